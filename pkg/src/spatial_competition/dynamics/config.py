"""Configuration constants for best-response dynamics."""

# --- Alternation Protocol ---
STEPS = 120
BURN_IN = 80
INITIAL_PRICE = 0.3

# --- Best Response Settings ---
METHOD = "exact"
GRID_POINTS = 10_000
# Finer price grid used for the largest lattices to avoid periodic profit patterns.
LARGE_N_GRID_POINTS = 100_000
LARGE_N_THRESHOLD = 640
PRICE_MAX = 1.0
EXACT_EPSILON = 1e-9

# --- Convergence ---
# A run is converged when every tail profit variance is below
# CONVERGENCE_SCALE * r^2 / N^2. Periodic pairs settle near 0.1 r^2 / N^2,
# open-boundary undercut cycles stay above 1e-3 regardless of N.
CONVERGENCE_SCALE = 0.5
