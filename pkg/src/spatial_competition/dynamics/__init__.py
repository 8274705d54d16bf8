"""Best responses and alternating price dynamics."""

from . import config
from .models import BestResponse, DynamicsTrace, Method, TraceStep
from .best_response import (
    UnboundedBestResponseError,
    best_response,
    best_response_exact,
    best_response_grid,
    competitor_thresholds,
    profit_profile,
)
from .alternating import (
    InsufficientDataError,
    default_convergence_threshold,
    default_grid_points,
    find_undercut_events,
    run_alternating,
    tail_profit_variance,
)
