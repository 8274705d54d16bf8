"""Nearest-neighbor statistics for uniformly scattered firms and the
profit scaling they predict."""

import math

import numpy as np
from scipy import integrate
from scipy.special import gammaln

from . import config
from .nash import nash_equilibrium

SUPPORT_EDGE = 1.0 / math.sqrt(math.pi)


def _check_m(m: int, minimum: int = 2):
    if int(m) != m or m < minimum:
        raise ValueError(f"m must be an integer >= {minimum}, got {m}.")


def nn_distance_pdf(R, m: int):
    """
    Density of the distance to the closest of m - 1 other firms at unit
    density: 2 pi R (1 - pi R^2)^(m - 2) (m - 1) on [0, 1/sqrt(pi)].
    """
    _check_m(m)
    R = np.asarray(R, dtype=float)
    if np.any(R < 0):
        raise ValueError("R must be non-negative.")
    inside = R <= SUPPORT_EDGE
    base = np.clip(1.0 - math.pi * R * R, 0.0, None)
    pdf = np.where(inside, 2.0 * math.pi * R * base ** (m - 2) * (m - 1), 0.0)
    return float(pdf) if pdf.ndim == 0 else pdf


def nn_distance_cdf(R, m: int):
    _check_m(m)
    R = np.asarray(R, dtype=float)
    if np.any(R < 0):
        raise ValueError("R must be non-negative.")
    base = np.clip(1.0 - math.pi * R * R, 0.0, None)
    cdf = 1.0 - base ** (m - 1)
    return float(cdf) if cdf.ndim == 0 else cdf


def nn_mean_distance(m: int) -> float:
    """Mean closest-firm distance (m - 1)/2 * Gamma(m - 1) / Gamma(m + 1/2)."""
    _check_m(m)
    return 0.5 * (m - 1) * math.exp(gammaln(m - 1) - gammaln(m + 0.5))


def sample_nn_distances(m: int, draws: int = config.NN_DRAWS, seed: int = 0, geometry: str = "disk") -> np.ndarray:
    """
    Monte Carlo closest-firm distances seen from one reference firm.

    "disk": the other m - 1 firms are uniform in a unit-area disk centred on
    the reference firm (the geometry the closed form assumes). "torus": they
    are uniform on the unit torus.
    """
    _check_m(m)
    if geometry not in ("disk", "torus"):
        raise ValueError(f"Unknown geometry {geometry!r}; use 'disk' or 'torus'.")
    rng = np.random.default_rng(seed)
    chunks = []
    for start in range(0, draws, config.NN_CHUNK):
        size = min(config.NN_CHUNK, draws - start)
        if geometry == "disk":
            radii = SUPPORT_EDGE * np.sqrt(rng.random((size, m - 1)))
            chunks.append(radii.min(axis=1))
        else:
            # reference firm at the origin; torus distance per axis
            pts = rng.random((size, m - 1, 2))
            delta = np.minimum(pts, 1.0 - pts)
            chunks.append(np.sqrt((delta**2).sum(axis=2)).min(axis=1))
    return np.concatenate(chunks)


def predicted_profit_per_firm(m: int, r: float = 1.0) -> float:
    """Leading large-m profit per firm and customer, r / m^(3/2)."""
    _check_m(m)
    return r * m ** -1.5


def predicted_total_profit(m: int, r: float = 1.0) -> float:
    return m * predicted_profit_per_firm(m, r)


def nn_profit_prediction(m: int, r: float = 1.0) -> float:
    """Two-firm total equilibrium profit at the mean closest distance, shared by m firms."""
    _check_m(m)
    return 2.0 * nash_equilibrium(nn_mean_distance(m), r).profit / m


def mean_profit_over_nn_density(m: int, r: float = 1.0) -> float:
    """Two-firm equilibrium profit averaged over the closest-distance density."""
    _check_m(m)
    value, _ = integrate.quad(
        lambda R: nash_equilibrium(R, r).profit * nn_distance_pdf(R, m) if R > 0 else 0.0,
        0.0,
        SUPPORT_EDGE,
        limit=200,
    )
    return value
