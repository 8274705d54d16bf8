"""Two-firm Nash equilibrium on the torus and its stability conditions."""

import math
from dataclasses import dataclass


class DegenerateEquilibriumError(ValueError):
    """Co-located firms (d = 0 or 1): the zero-profit Bertrand limit."""


@dataclass(frozen=True)
class NashEquilibrium:
    d: float
    r: float
    omega: float
    profit: float
    price: float


def _log_sqrt_gap(u: float) -> float:
    """ln(u^2 [sqrt(u^2 + 1) - 1]) without cancellation for small u."""
    root = math.sqrt(u * u + 1.0)
    return 4.0 * math.log(u) - math.log(root + 1.0)


def _xlogx_weighted(weight: float, value: float) -> float:
    # weight * ln(value) with the 0 * ln 0 = 0 convention
    if weight == 0.0:
        return 0.0
    return weight * math.log(value)


def omega(d: float) -> float:
    """
    Denominator of the equilibrium profit for two firms at distance d.

    Symmetric under d -> 1 - d.
    """
    if not 0 < d < 1:
        raise ValueError(f"d must lie in (0, 1), got {d}.")
    e = 1.0 - d
    value = d * math.sqrt(e * e + 1.0) + e * math.sqrt(d * d + 1.0)
    value += _xlogx_weighted(3.0 * d * e * e, e) + _xlogx_weighted(3.0 * d * d * e, d)
    value -= d * e * e * _log_sqrt_gap(e)
    value -= d * d * e * _log_sqrt_gap(d)
    return value


def nash_equilibrium(d: float, r: float = 1.0) -> NashEquilibrium:
    """Equilibrium profit X* = (1 - d) d r / omega(d) and price p* = 2 X*."""
    if d in (0.0, 1.0):
        raise DegenerateEquilibriumError(
            f"d = {d}: co-located firms compete prices down to zero profit."
        )
    if not 0 < d < 1:
        raise ValueError(f"d must lie in (0, 1), got {d}.")
    if r <= 0:
        raise ValueError(f"Transport rate r must be positive, got {r}.")
    om = omega(d)
    profit = (1.0 - d) * d * r / om
    return NashEquilibrium(d=d, r=r, omega=om, profit=profit, price=2.0 * profit)


def undercut_price(p_other: float, r: float, d: float, gamma: float = 1.0) -> float:
    """Highest price that still captures every customer: p_other - r d^gamma, floored at 0."""
    if p_other < 0:
        raise ValueError(f"p_other must be non-negative, got {p_other}.")
    return max(p_other - r * d**gamma, 0.0)


def is_stable(p1: float, p2: float, s1: float, r: float, d: float) -> bool:
    """
    True when the worse-placed firm 1 earns more by sharing the market
    (p1 * s1) than by undercutting firm 2 to take all of it.
    """
    if not 0 <= s1 <= 1:
        raise ValueError(f"Area share s1 must lie in [0, 1], got {s1}.")
    return undercut_price(p2, r, d) < p1 * s1


def pbc_stability_check(d: float, r: float = 1.0) -> bool:
    """Symmetric torus equilibrium is stable iff p* < 2 r d."""
    if not 0 < d <= 0.5:
        raise ValueError(f"d must lie in (0, 0.5], got {d}.")
    return nash_equilibrium(d, r).price < 2.0 * r * d
