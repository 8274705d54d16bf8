"""Configuration constants for the market geometry."""

# --- Boundary Curve Settings ---
BOUNDARY_SAMPLES = 512
BISECTION_TOL = 1e-10

# --- Transport Cost Cache ---
# Number of distinct firm geometries whose (m, N^2) cost matrices stay in memory.
COST_CACHE_SIZE = 32
