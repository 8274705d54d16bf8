"""Result types for best responses and alternating-optimization traces."""

from dataclasses import dataclass, field
from enum import Enum
from typing import List

import numpy as np


class Method(str, Enum):
    GRID = "grid"
    EXACT = "exact"


@dataclass(frozen=True)
class BestResponse:
    price: float
    profit_per_customer: float
    method: Method


@dataclass(frozen=True)
class TraceStep:
    firm: int
    prices: np.ndarray
    profits: np.ndarray
    shares: np.ndarray


@dataclass
class DynamicsTrace:
    steps: List[TraceStep]
    burn_in: int
    tail_mean_price: np.ndarray = field(default=None)
    tail_mean_profit: np.ndarray = field(default=None)
    tail_var_profit: np.ndarray = field(default=None)
    converged: bool = False

    @property
    def prices(self) -> np.ndarray:
        """(steps, m) price history."""
        return np.array([step.prices for step in self.steps])

    @property
    def profits(self) -> np.ndarray:
        return np.array([step.profits for step in self.steps])

    @property
    def shares(self) -> np.ndarray:
        return np.array([step.shares for step in self.steps])

    @property
    def acting_firms(self) -> np.ndarray:
        return np.array([step.firm for step in self.steps], dtype=int)

    @property
    def tail(self) -> List[TraceStep]:
        return self.steps[self.burn_in:]
