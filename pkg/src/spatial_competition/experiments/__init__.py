"""Seeded sweep experiments over the market and dynamics layers."""

from . import config
from .models import ExperimentKind, ExperimentResult, ExperimentSpec, to_jsonable
from .placement import pair_positions, place_firms_random
from .runner import (
    RUNNERS,
    run_assign_map,
    run_experiment,
    run_gamma_sweep,
    run_multi_firm_sweep,
    run_nash_table,
    run_non_pbc_demo,
    run_profit_profile,
    run_two_firm_sweep,
    run_variance_scaling,
)
