"""Unit-square market geometry and customer assignment."""

from . import config
from .geometry import (
    Boundary,
    Point,
    customer_coordinates,
    distance,
    nearest_neighbor_distances,
    torus_delta,
    wrap_unit,
)
from .models import Assignment, FirmState, MarketConfig
from .assignment import (
    BoundaryCurves,
    NoBoundaryError,
    assign_customers,
    assignment_grid,
    boundary_curves,
    effective_cost,
    effective_costs,
    market_costs,
    transport_costs,
)
