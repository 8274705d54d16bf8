"""Closed forms, extreme statistics and scaling fits."""

from . import config
from .nash import (
    DegenerateEquilibriumError,
    NashEquilibrium,
    is_stable,
    nash_equilibrium,
    omega,
    pbc_stability_check,
    undercut_price,
)
from .extreme import (
    SUPPORT_EDGE,
    mean_profit_over_nn_density,
    nn_distance_cdf,
    nn_distance_pdf,
    nn_mean_distance,
    nn_profit_prediction,
    predicted_profit_per_firm,
    predicted_total_profit,
    sample_nn_distances,
)
from .fitting import FitError, PowerLawFit, ScalingSlope, fit_loglog_slope, fit_power_law
