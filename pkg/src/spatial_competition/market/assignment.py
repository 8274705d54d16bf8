"""Customer-to-firm assignment on the N x N lattice."""

from dataclasses import dataclass
from functools import lru_cache
from typing import Tuple

import numpy as np
from loguru import logger
from scipy.optimize import bisect

from . import config
from .geometry import Boundary, Point, coordinate_delta, customer_coordinates, distance
from .models import Assignment, FirmState, MarketConfig


class NoBoundaryError(ValueError):
    """One firm undercuts the other everywhere, so no region boundary exists."""


@lru_cache(maxsize=config.COST_CACHE_SIZE)
def transport_costs(
    n_side: int,
    positions: Tuple[Point, ...],
    r: float,
    gamma: float,
    boundary: Boundary,
) -> np.ndarray:
    """
    Transport cost r * dist^gamma from every firm to every customer.

    Returns a read-only (m, N^2) array; row k, column i * N + j is customer
    (x_i, y_j). Cached on the geometry so price changes reuse it.
    """
    coords = customer_coordinates(n_side)
    costs = np.empty((len(positions), n_side * n_side), dtype=float)
    for k, pos in enumerate(positions):
        dx = coordinate_delta(coords, pos.x, boundary)
        dy = coordinate_delta(coords, pos.y, boundary)
        sq = dx[:, None] ** 2 + dy[None, :] ** 2
        costs[k] = r * (sq ** (gamma / 2.0)).ravel()
    costs.setflags(write=False)
    logger.debug(f"Computed transport costs for {len(positions)} firms on a {n_side}x{n_side} lattice")
    return costs


def market_costs(market: MarketConfig) -> np.ndarray:
    return transport_costs(market.n_side, market.positions, market.r, market.gamma, market.boundary)


def effective_cost(customer: Point, firm: FirmState, r: float, gamma: float, boundary: Boundary) -> float:
    """Mill price plus transport cost for one customer-firm pair."""
    return firm.price + r * distance(customer, firm.position, boundary, gamma)


def effective_costs(market: MarketConfig) -> np.ndarray:
    """(m, N^2) matrix of p_k + transport cost."""
    return market.prices[:, None] + market_costs(market)


def assign_customers(market: MarketConfig) -> Assignment:
    """
    Each customer buys from the firm with the lowest effective cost; exact
    ties go to the lowest firm id.
    """
    winners = np.argmin(effective_costs(market), axis=0)
    counts = np.bincount(winners, minlength=market.m)
    shares = counts / market.n_customers
    profits = market.prices * shares
    return Assignment(counts=counts, shares=shares, profits_per_customer=profits, winners=winners)


def assignment_grid(market: MarketConfig) -> np.ndarray:
    """Winning firm id per customer as an N x N array indexed [i, j]."""
    return assign_customers(market).winners.reshape(market.n_side, market.n_side)


@dataclass(frozen=True)
class BoundaryCurves:
    y: np.ndarray
    x_left: np.ndarray
    x_right: np.ndarray


def boundary_curves(
    d: float,
    p1: float,
    p2: float,
    r: float = 1.0,
    n_samples: int = config.BOUNDARY_SAMPLES,
) -> BoundaryCurves:
    """
    Region boundaries for firm 1 at (0, 0.5) and firm 2 at (d, 0.5) on the
    torus with linear transport costs.

    The left boundary separates firm 1 from firm 2 on the direct side, the
    right one on the wrapped side (firm 1's image at x = 1). Coordinates are
    unwrapped; rows where a branch does not reach are NaN.
    """
    if not 0 < d < 1:
        raise ValueError(f"d must lie in (0, 1), got {d}.")
    if r <= 0:
        raise ValueError(f"Transport rate r must be positive, got {r}.")
    if abs(p1 - p2) >= r * d:
        raise NoBoundaryError(
            f"|p1 - p2| = {abs(p1 - p2):.6g} >= r*d = {r * d:.6g}: one firm takes every customer."
        )

    ys = (np.arange(n_samples, dtype=float) + 0.5) / n_samples
    x_left = np.full(n_samples, np.nan)
    x_right = np.full(n_samples, np.nan)

    for idx, y in enumerate(ys):
        h2 = (y - 0.5) ** 2

        def left(x):
            return r * np.sqrt(x * x + h2) + p1 - r * np.sqrt((x - d) ** 2 + h2) - p2

        def right(x):
            return r * np.sqrt((x - 1.0) ** 2 + h2) + p1 - r * np.sqrt((x - d) ** 2 + h2) - p2

        # Each branch lies between the midpoints of the neighbouring images.
        x_left[idx] = _bracketed_root(left, (d - 1.0) / 2.0, (1.0 + d) / 2.0)
        x_right[idx] = _bracketed_root(right, d / 2.0, (2.0 + d) / 2.0)

    return BoundaryCurves(y=ys, x_left=x_left, x_right=x_right)


def _bracketed_root(func, lo: float, hi: float) -> float:
    f_lo, f_hi = func(lo), func(hi)
    if f_lo == 0:
        return lo
    if f_hi == 0:
        return hi
    if np.sign(f_lo) == np.sign(f_hi):
        return np.nan
    return bisect(func, lo, hi, xtol=config.BISECTION_TOL)
