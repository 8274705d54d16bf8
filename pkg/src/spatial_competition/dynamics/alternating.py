"""Alternating (round-robin) profit optimization and its tail statistics."""

from typing import Optional

import numpy as np
import pandas as pd
from loguru import logger

from . import config
from .best_response import best_response
from .models import DynamicsTrace, Method, TraceStep
from ..market import MarketConfig, assign_customers


class InsufficientDataError(ValueError):
    """Fewer than two post-burn-in steps are available."""


def default_grid_points(n_side: int) -> int:
    if n_side >= config.LARGE_N_THRESHOLD:
        return config.LARGE_N_GRID_POINTS
    return config.GRID_POINTS


def default_convergence_threshold(market: MarketConfig) -> float:
    return config.CONVERGENCE_SCALE * market.r**2 / market.n_side**2


def run_alternating(
    market: MarketConfig,
    steps: int = config.STEPS,
    burn_in: int = config.BURN_IN,
    initial_price: float = config.INITIAL_PRICE,
    method: Method = Method(config.METHOD),
    grid_points: Optional[int] = None,
    price_max: float = config.PRICE_MAX,
    epsilon: float = config.EXACT_EPSILON,
    convergence_threshold: Optional[float] = None,
) -> DynamicsTrace:
    """
    Starts every firm at initial_price; at step t firm t mod m replaces its
    price by its best response to the current prices of the others.

    The run counts as converged when every tail profit variance is below
    convergence_threshold, by default default_convergence_threshold(market).
    """
    if not steps > burn_in >= 0:
        raise ValueError(f"Need steps > burn_in >= 0, got steps={steps}, burn_in={burn_in}.")
    if initial_price < 0:
        raise ValueError(f"initial_price must be non-negative, got {initial_price}.")
    if grid_points is None:
        grid_points = default_grid_points(market.n_side)
    if convergence_threshold is None:
        convergence_threshold = default_convergence_threshold(market)

    prices = np.full(market.m, float(initial_price))
    history = []
    for t in range(steps):
        k = t % market.m
        response = best_response(
            market.with_prices(prices),
            k,
            method=method,
            grid_points=grid_points,
            price_max=price_max,
            epsilon=epsilon,
        )
        prices[k] = response.price
        assignment = assign_customers(market.with_prices(prices))
        history.append(
            TraceStep(
                firm=k,
                prices=prices.copy(),
                profits=assignment.profits_per_customer.copy(),
                shares=assignment.shares.copy(),
            )
        )
        logger.debug(f"step {t}: firm {k} -> price {response.price:.6f}, profit {response.profit_per_customer:.6f}")

    trace = DynamicsTrace(steps=history, burn_in=burn_in)
    _fill_tail_statistics(trace, convergence_threshold)
    return trace


def _fill_tail_statistics(trace: DynamicsTrace, threshold: float):
    tail_prices = np.array([step.prices for step in trace.tail])
    tail_profits = np.array([step.profits for step in trace.tail])
    trace.tail_mean_price = tail_prices.mean(axis=0)
    trace.tail_mean_profit = tail_profits.mean(axis=0)
    if len(trace.tail) >= 2:
        trace.tail_var_profit = tail_profits.var(axis=0, ddof=1)
        trace.converged = bool(np.all(trace.tail_var_profit < threshold))
    else:
        trace.tail_var_profit = np.full(tail_profits.shape[1], np.nan)
        trace.converged = False


def tail_profit_variance(trace: DynamicsTrace) -> np.ndarray:
    """Unbiased per-firm sample variance of profit over post-burn-in steps."""
    if len(trace.tail) < 2:
        raise InsufficientDataError(
            f"Need at least 2 post-burn-in steps, got {len(trace.tail)}."
        )
    tail_profits = np.array([step.profits for step in trace.tail])
    return tail_profits.var(axis=0, ddof=1)


def find_undercut_events(
    trace: DynamicsTrace,
    r: float,
    d: float,
    gamma: float = 1.0,
    tolerance: float = 0.01,
) -> pd.DataFrame:
    """
    Steps where firm 0 abandons a shared-market price and drops to the
    all-capture undercut p_other - r * d^gamma (within tolerance).

    The state before each drop is reported next to it.
    """
    rows = []
    for t in range(1, len(trace.steps)):
        step, before = trace.steps[t], trace.steps[t - 1]
        if step.firm != 0:
            continue
        p_other = before.prices[1]
        undercut = max(p_other - r * d**gamma, 0.0)
        dropped = step.prices[0] < before.prices[0]
        if dropped and step.prices[0] <= undercut + tolerance and before.shares[0] < 1.0:
            rows.append(
                {
                    "step": t,
                    "p1_before": float(before.prices[0]),
                    "p2": float(p_other),
                    "s1_before": float(before.shares[0]),
                    "p1_after": float(step.prices[0]),
                    "undercut": undercut,
                }
            )
    return pd.DataFrame(rows, columns=["step", "p1_before", "p2", "s1_before", "p1_after", "undercut"])
