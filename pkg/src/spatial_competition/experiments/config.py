"""Configuration constants for the experiment runners."""

# --- Sweep Defaults ---
N_SIDE = 80
R = 1.0
GAMMA = 1.0
SEEDS = tuple(range(20))
D_VALUES = (0.1, 0.2, 0.3, 0.4, 0.5)
N_VALUES = (10, 20, 40, 80, 160)
M_VALUES = (2, 4, 8, 16, 32, 64)
GAMMA_VALUES = (0.25, 0.5, 0.75, 1.0, 1.25, 1.5, 1.75, 2.0, 2.5, 3.0, 3.5, 4.0)
NASH_D_VALUES = tuple(round(0.05 * i, 2) for i in range(1, 11))

# --- Non-periodic Demo ---
DEMO_D = 0.5
DEMO_P2_VALUES = (0.65, 0.71)
PROFILE_POINTS = 2_000

# --- Profit Profile Figure ---
PROFILE_N_SIDE = 10
PROFILE_P2_VALUES = (0.2, 0.4, 0.6, 0.8)

# --- Assignment Map Figure ---
# (x, y, price) per firm
ASSIGN_MAP_FIRMS = ((0.2, 0.5, 0.8), (0.5, 0.5, 1.0))
ASSIGN_MAP_N_SIDE = 100

# --- Reproducibility ---
RNG_ALGORITHM = "numpy.random.PCG64 (default_rng seeded with [seed, tag])"
