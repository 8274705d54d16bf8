"""Experiment definitions (ExperimentSpec) and results."""

import math
from dataclasses import asdict, dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional, Tuple

import numpy as np
import pandas as pd

from . import config
from ..analytics import PowerLawFit, ScalingSlope
from ..analytics import config as analytics_config
from ..dynamics import DynamicsTrace, Method
from ..dynamics import config as dynamics_config
from ..market import Boundary


def to_jsonable(value: Any) -> Any:
    """Plain Python containers and scalars; non-finite floats become None."""
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return to_jsonable(value.tolist())
    if isinstance(value, np.generic):
        value = value.item()
    if isinstance(value, float) and not math.isfinite(value):
        return None
    return value


class ExperimentKind(str, Enum):
    TWO_FIRM_SWEEP = "two_firm_sweep"
    VARIANCE_SCALING = "variance_scaling"
    MULTI_FIRM_SWEEP = "multi_firm_sweep"
    GAMMA_SWEEP = "gamma_sweep"
    NON_PBC_DEMO = "non_pbc_demo"
    NASH_TABLE = "nash_table"
    PROFIT_PROFILE = "profit_profile"
    ASSIGN_MAP = "assign_map"

    @property
    def subcommand(self) -> str:
        return {
            "two_firm_sweep": "two-firm",
            "variance_scaling": "variance-scaling",
            "multi_firm_sweep": "multi-firm",
            "gamma_sweep": "gamma-sweep",
            "non_pbc_demo": "non-pbc-demo",
            "nash_table": "nash-table",
            "profit_profile": "profit-profile",
            "assign_map": "assign-map",
        }[self.value]


@dataclass(frozen=True)
class ExperimentSpec:
    kind: ExperimentKind
    n_side: int = config.N_SIDE
    r: float = config.R
    gamma: float = config.GAMMA
    boundary: Boundary = Boundary.PERIODIC
    d_values: Tuple[float, ...] = config.D_VALUES
    n_values: Tuple[int, ...] = (config.N_SIDE,)
    m_values: Tuple[int, ...] = config.M_VALUES
    gamma_values: Tuple[float, ...] = config.GAMMA_VALUES
    p2_values: Tuple[float, ...] = config.DEMO_P2_VALUES
    firms: Tuple[Tuple[float, float, float], ...] = config.ASSIGN_MAP_FIRMS
    seeds: Tuple[int, ...] = config.SEEDS
    steps: int = dynamics_config.STEPS
    burn_in: int = dynamics_config.BURN_IN
    initial_price: float = dynamics_config.INITIAL_PRICE
    method: Method = Method(dynamics_config.METHOD)
    grid_points: Optional[int] = None
    price_max: float = dynamics_config.PRICE_MAX
    epsilon: float = dynamics_config.EXACT_EPSILON
    fit_min_m: int = analytics_config.FIT_MIN_M
    translate: bool = False
    scale_steps_with_m: bool = True
    profile_points: int = config.PROFILE_POINTS
    n_jobs: int = 1

    def __post_init__(self):
        object.__setattr__(self, "kind", ExperimentKind(self.kind))
        object.__setattr__(self, "boundary", Boundary(self.boundary))
        object.__setattr__(self, "method", Method(self.method))
        for name in ("d_values", "n_values", "m_values", "gamma_values", "p2_values", "seeds"):
            values = tuple(getattr(self, name))
            if not values:
                raise ValueError(f"{name} must not be empty.")
            object.__setattr__(self, name, values)
        object.__setattr__(self, "firms", tuple(tuple(f) for f in self.firms))
        if len(set(self.seeds)) != len(self.seeds):
            raise ValueError(f"seeds must be distinct, got {self.seeds}.")
        if not self.steps > self.burn_in >= 0:
            raise ValueError("burn-in must be < steps")
        if self.r <= 0:
            raise ValueError(f"r must be positive, got {self.r}.")
        if self.gamma <= 0 or any(g <= 0 for g in self.gamma_values):
            raise ValueError("gamma must be positive.")
        if self.grid_points is not None and self.grid_points < 2:
            raise ValueError(f"grid_points must be at least 2, got {self.grid_points}.")
        if self.price_max <= 0:
            raise ValueError(f"price_max must be positive, got {self.price_max}.")

    def to_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        data["kind"] = self.kind.value
        data["boundary"] = self.boundary.value
        data["method"] = self.method.value
        for key, value in data.items():
            if isinstance(value, tuple):
                data[key] = [list(v) if isinstance(v, tuple) else v for v in value]
        return data

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "ExperimentSpec":
        data = dict(data)
        if "firms" in data:
            data["firms"] = tuple(tuple(f) for f in data["firms"])
        return cls(**data)


@dataclass
class ExperimentResult:
    spec: ExperimentSpec
    rows: pd.DataFrame
    aggregates: pd.DataFrame
    fits: Dict[str, PowerLawFit] = field(default_factory=dict)
    slopes: Dict[str, ScalingSlope] = field(default_factory=dict)
    meta: Dict[str, Any] = field(default_factory=dict)
    trace: Optional[DynamicsTrace] = None
    profiles: Optional[pd.DataFrame] = None
    tables: Dict[str, pd.DataFrame] = field(default_factory=dict)
    grids: Dict[str, Any] = field(default_factory=dict)

    @property
    def kind(self) -> ExperimentKind:
        return self.spec.kind

    def gamma_exponents(self) -> List[Tuple[float, PowerLawFit]]:
        """(gamma, fit) pairs of a gamma sweep, in sweep order."""
        pairs = []
        for gamma in self.spec.gamma_values:
            fit = self.fits.get(f"gamma={gamma:g}")
            if fit is not None:
                pairs.append((gamma, fit))
        return pairs

    def to_summary(self) -> Dict[str, Any]:
        """JSON-ready summary: the spec echo, rows, aggregates, fits and metadata."""
        fits: Dict[str, Any] = {name: asdict(fit) for name, fit in self.fits.items()}
        fits.update({name: asdict(slope) for name, slope in self.slopes.items()})
        return to_jsonable(
            {
                "spec": self.spec.to_dict(),
                "rows": self.rows.to_dict(orient="records"),
                "aggregates": self.aggregates.to_dict(orient="records"),
                "fits": fits,
                "meta": self.meta,
            }
        )
