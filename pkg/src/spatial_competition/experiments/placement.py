"""Seeded firm placement."""

from typing import List, Optional, Tuple

import numpy as np

from ..market import Point

# Second entropy word, keeps translation offsets independent of placements.
TRANSLATE_TAG = 0x7A11


def place_firms_random(m: int, seed: int) -> List[Point]:
    """m positions i.i.d. uniform on [0, 1)^2, reproducible for a fixed seed."""
    if m < 1:
        raise ValueError(f"m must be at least 1, got {m}.")
    rng = np.random.default_rng([seed, m])
    return [Point(x, y) for x, y in rng.random((m, 2))]


def pair_positions(
    d: float, seed: int = 0, translate: bool = False, n_side: Optional[int] = None
) -> Tuple[Point, Point]:
    """
    Firms at (0, 0.5) and (d, 0.5), optionally shifted by a seeded offset.

    With n_side given the offset is a whole number of lattice spacings, so on
    the torus every translated pair sees the same customer geometry.
    """
    first, second = Point(0.0, 0.5), Point(d, 0.5)
    if not translate:
        return first, second
    dx, dy = np.random.default_rng([seed, TRANSLATE_TAG]).random(2)
    if n_side is not None:
        dx, dy = np.floor(np.array([dx, dy]) * n_side) / n_side
    return first.shifted(dx, dy), second.shifted(dx, dy)
