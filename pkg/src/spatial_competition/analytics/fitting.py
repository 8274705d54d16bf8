"""Power-law fits of sweep results in log-log space."""

from dataclasses import dataclass
from typing import Iterable, Sequence, Tuple

import numpy as np
from scipy.optimize import curve_fit
from scipy.stats import linregress

from . import config


class FitError(ValueError):
    """The supplied points cannot determine a power law."""


@dataclass(frozen=True)
class PowerLawFit:
    A: float
    B: float
    se_A: float
    se_B: float
    residual: float
    n_points: int

    def predict(self, m, r: float = 1.0):
        return self.A * r / np.asarray(m, dtype=float) ** self.B


@dataclass(frozen=True)
class ScalingSlope:
    slope: float
    se_slope: float
    intercept: float


def _log_power_law(log_m, log_a, b):
    return log_a - b * log_m


def fit_power_law(
    points: Iterable[Tuple[float, float, float]],
    r: float = 1.0,
    min_m: float = config.FIT_MIN_M,
) -> PowerLawFit:
    """
    Weighted least-squares fit of X = A r / m^B to (m, mean X, std X) points.

    Works on ln(X / r) against ln m; each point's variance in log space is
    (std / mean)^2, and A's error is propagated from ln A.
    """
    data = np.array([tuple(p) for p in points], dtype=float).reshape(-1, 3)
    data = data[data[:, 0] >= min_m]
    if len(data) < config.FIT_MIN_POINTS:
        raise FitError(f"Need at least {config.FIT_MIN_POINTS} points with m >= {min_m}, got {len(data)}.")
    m, mean, std = data.T
    if np.any(mean <= 0):
        raise FitError("Mean profits must be positive for a log-log fit.")
    if np.any(std <= 0):
        raise FitError("Standard deviations must be positive to weight the fit.")
    if np.unique(m).size < 2:
        raise FitError("All points share one m; the exponent is undetermined.")

    log_m = np.log(m)
    y = np.log(mean / r)
    sigma = std / mean
    guess = np.polyfit(-log_m, y, 1)
    params, cov = curve_fit(
        _log_power_law,
        log_m,
        y,
        p0=(guess[1], guess[0]),
        sigma=sigma,
        absolute_sigma=True,
    )
    log_a, b = params
    se_log_a, se_b = np.sqrt(np.diag(cov))
    a = float(np.exp(log_a))
    residual = float(np.sum(((y - _log_power_law(log_m, log_a, b)) / sigma) ** 2))
    return PowerLawFit(
        A=a,
        B=float(b),
        se_A=float(a * se_log_a),
        se_B=float(se_b),
        residual=residual,
        n_points=len(data),
    )


def fit_loglog_slope(x: Sequence[float], y: Sequence[float]) -> ScalingSlope:
    """Ordinary least-squares slope of ln y against ln x."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.size < 3:
        raise FitError(f"Need at least 3 points for a slope, got {x.size}.")
    if np.any(x <= 0) or np.any(y <= 0):
        raise FitError("Log-log slopes need strictly positive data.")
    result = linregress(np.log(x), np.log(y))
    return ScalingSlope(slope=float(result.slope), se_slope=float(result.stderr), intercept=float(result.intercept))
