"""Value types describing a market instance and its customer partition."""

from dataclasses import dataclass, field, replace
from typing import Sequence, Tuple

import numpy as np

from .geometry import Boundary, Point


@dataclass(frozen=True)
class FirmState:
    id: int
    position: Point
    price: float

    def __post_init__(self):
        if self.price < 0:
            raise ValueError(f"Firm {self.id}: price must be non-negative, got {self.price}.")
        object.__setattr__(self, "price", float(self.price))

    def with_price(self, price: float) -> "FirmState":
        return replace(self, price=price)


@dataclass(frozen=True)
class MarketConfig:
    """
    A full problem instance: an N x N customer lattice, the firms competing
    for it, the transport rate r and the distance exponent gamma.
    """

    n_side: int
    firms: Tuple[FirmState, ...]
    r: float = 1.0
    gamma: float = 1.0
    boundary: Boundary = Boundary.PERIODIC

    def __post_init__(self):
        if int(self.n_side) != self.n_side or self.n_side < 1:
            raise ValueError(f"n_side must be a positive integer, got {self.n_side}.")
        if len(self.firms) < 1:
            raise ValueError("A market needs at least one firm.")
        if self.r <= 0:
            raise ValueError(f"Transport rate r must be positive, got {self.r}.")
        if self.gamma <= 0:
            raise ValueError(f"gamma must be positive, got {self.gamma}.")
        object.__setattr__(self, "n_side", int(self.n_side))
        object.__setattr__(self, "firms", tuple(self.firms))
        object.__setattr__(self, "boundary", Boundary(self.boundary))
        ids = [firm.id for firm in self.firms]
        if ids != list(range(len(ids))):
            raise ValueError(f"Firm ids must be 0..m-1 in order, got {ids}.")

    @classmethod
    def from_positions(
        cls,
        n_side: int,
        positions: Sequence[Point],
        prices: Sequence[float] | float = 0.3,
        r: float = 1.0,
        gamma: float = 1.0,
        boundary: Boundary = Boundary.PERIODIC,
    ) -> "MarketConfig":
        if np.isscalar(prices):
            prices = [float(prices)] * len(positions)
        if len(prices) != len(positions):
            raise ValueError("positions and prices must have the same length.")
        firms = tuple(
            FirmState(id=k, position=pos, price=price)
            for k, (pos, price) in enumerate(zip(positions, prices))
        )
        return cls(n_side=n_side, firms=firms, r=r, gamma=gamma, boundary=boundary)

    @property
    def m(self) -> int:
        return len(self.firms)

    @property
    def n_customers(self) -> int:
        return self.n_side * self.n_side

    @property
    def positions(self) -> Tuple[Point, ...]:
        return tuple(firm.position for firm in self.firms)

    @property
    def prices(self) -> np.ndarray:
        return np.array([firm.price for firm in self.firms], dtype=float)

    def with_prices(self, prices: Sequence[float]) -> "MarketConfig":
        if len(prices) != self.m:
            raise ValueError(f"Expected {self.m} prices, got {len(prices)}.")
        firms = tuple(firm.with_price(float(p)) for firm, p in zip(self.firms, prices))
        return replace(self, firms=firms)

    def with_price(self, k: int, price: float) -> "MarketConfig":
        prices = self.prices
        prices[k] = price
        return self.with_prices(prices)


@dataclass(frozen=True)
class Assignment:
    counts: np.ndarray
    shares: np.ndarray
    profits_per_customer: np.ndarray
    winners: np.ndarray = field(repr=False)

    @property
    def total(self) -> int:
        return int(self.counts.sum())
