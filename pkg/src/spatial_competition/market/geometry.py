"""Distances on the unit square, with and without periodic boundaries."""

from enum import Enum
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.spatial import cKDTree


class Boundary(str, Enum):
    PERIODIC = "periodic"
    OPEN = "open"


def wrap_unit(value: float) -> float:
    """Reduces a coordinate into [0, 1)."""
    wrapped = float(value) % 1.0
    # -1e-17 % 1.0 rounds to 1.0
    if wrapped >= 1.0:
        wrapped = 0.0
    return wrapped


@dataclass(frozen=True)
class Point:
    """A location in the unit square; coordinates are wrapped mod 1."""

    x: float
    y: float

    def __post_init__(self):
        object.__setattr__(self, "x", wrap_unit(self.x))
        object.__setattr__(self, "y", wrap_unit(self.y))

    def shifted(self, dx: float, dy: float) -> "Point":
        return Point(self.x + dx, self.y + dy)


def torus_delta(a, b):
    """
    Shortest coordinate difference on the unit circle.

    Works element-wise on numpy arrays; the result lies in [0, 1/2].
    """
    delta = np.abs(np.asarray(a, dtype=float) - np.asarray(b, dtype=float))
    delta = np.where(delta <= 0.5, delta, 1.0 - delta)
    if delta.ndim == 0:
        return float(delta)
    return delta


def coordinate_delta(a, b, boundary: Boundary):
    if Boundary(boundary) is Boundary.PERIODIC:
        return torus_delta(a, b)
    delta = np.abs(np.asarray(a, dtype=float) - np.asarray(b, dtype=float))
    return float(delta) if delta.ndim == 0 else delta


def distance(p: Point, q: Point, boundary: Boundary, gamma: float = 1.0) -> float:
    """Returns [dx^2 + dy^2]^(gamma/2) between two points."""
    if gamma <= 0:
        raise ValueError(f"gamma must be positive, got {gamma}.")
    dx = coordinate_delta(p.x, q.x, boundary)
    dy = coordinate_delta(p.y, q.y, boundary)
    return float((dx * dx + dy * dy) ** (gamma / 2.0))


def customer_coordinates(n_side: int) -> np.ndarray:
    """Lattice coordinates (i - 0.5) / N for i = 1..N."""
    if n_side < 1:
        raise ValueError(f"n_side must be a positive integer, got {n_side}.")
    return (np.arange(n_side, dtype=float) + 0.5) / n_side


def nearest_neighbor_distances(points: Sequence[Point], boundary: Boundary = Boundary.PERIODIC) -> np.ndarray:
    """Euclidean distance from every point to its closest other point."""
    if len(points) < 2:
        raise ValueError("At least two points are needed for nearest-neighbor distances.")
    coords = np.array([(p.x, p.y) for p in points], dtype=float)
    boxsize = 1.0 if Boundary(boundary) is Boundary.PERIODIC else None
    tree = cKDTree(coords, boxsize=boxsize)
    dist, _ = tree.query(coords, k=2)
    return dist[:, 1]
