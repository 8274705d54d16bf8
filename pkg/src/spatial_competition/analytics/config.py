"""Configuration constants for the closed-form toolkit."""

# --- Power-Law Fit Settings ---
# Sweep points with fewer firms than this are left out of fits.
FIT_MIN_M = 8
FIT_MIN_POINTS = 3

# --- Monte Carlo Settings ---
NN_DRAWS = 100_000
NN_CHUNK = 10_000
