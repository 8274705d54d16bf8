"""Best-response prices for one firm against fixed competitor prices."""

from typing import Tuple

import numpy as np

from . import config
from .models import BestResponse, Method
from ..market import MarketConfig, assign_customers, effective_costs, market_costs


class UnboundedBestResponseError(ValueError):
    """A monopolist faces no competitor thresholds; demand has no price cap."""


def competitor_thresholds(market: MarketConfig, k: int) -> Tuple[np.ndarray, np.ndarray]:
    """
    Per-customer price threshold below which firm k wins the customer.

    Returns (theta, wins_ties): theta = min over competitors of their
    effective cost minus firm k's transport cost; wins_ties marks customers
    whose cheapest competitor has a higher id, so firm k also wins at
    exactly p = theta.
    """
    if market.m < 2:
        raise UnboundedBestResponseError("A single firm has no competitor thresholds.")
    _check_firm(market, k)
    costs = effective_costs(market)
    others = np.delete(costs, k, axis=0)
    best = np.argmin(others, axis=0)
    best_ids = best + (best >= k)
    emin = others[best, np.arange(others.shape[1])]
    theta = emin - market_costs(market)[k]
    return theta, k < best_ids


def profit_profile(market: MarketConfig, k: int, prices) -> np.ndarray:
    """Profit per customer X_k(p) of firm k at each price, others fixed."""
    prices = np.asarray(prices, dtype=float)
    n = market.n_customers
    if market.m < 2:
        return prices * 1.0

    _check_firm(market, k)
    theta, wins_ties = competitor_thresholds(market, k)
    weak = np.sort(theta[wins_ties])
    strict = np.sort(theta[~wins_ties])
    counts = (weak.size - np.searchsorted(weak, prices, side="left")) + (
        strict.size - np.searchsorted(strict, prices, side="right")
    )
    return prices * counts / n


def best_response_grid(
    market: MarketConfig,
    k: int,
    grid_points: int = config.GRID_POINTS,
    price_max: float = config.PRICE_MAX,
) -> BestResponse:
    """Scans grid_points evenly spaced prices in [0, price_max]."""
    if grid_points < 2:
        raise ValueError(f"grid_points must be at least 2, got {grid_points}.")
    if price_max <= 0:
        raise ValueError(f"price_max must be positive, got {price_max}.")
    prices = np.linspace(0.0, price_max, grid_points)
    profits = profit_profile(market, k, prices)
    # argmax keeps the lowest price among equal profits
    price = float(prices[int(np.argmax(profits))])
    return _realised(market, k, price, Method.GRID)


def best_response_exact(
    market: MarketConfig,
    k: int,
    epsilon: float = config.EXACT_EPSILON,
) -> BestResponse:
    """
    Exact optimum of the sawtooth X_k(p) = p * #{theta > p} / N^2.

    The maximum sits just below one of the thresholds, so every distinct
    threshold theta is tried at p = theta - epsilon.
    """
    theta, _ = competitor_thresholds(market, k)
    ordered = np.sort(theta)
    distinct = np.unique(ordered)
    candidates = distinct[distinct > epsilon] - epsilon
    if candidates.size == 0:
        return _realised(market, k, 0.0, Method.EXACT)

    counts = ordered.size - np.searchsorted(ordered, candidates, side="right")
    profits = candidates * counts
    price = float(candidates[int(np.argmax(profits))])
    return _realised(market, k, price, Method.EXACT)


def best_response(
    market: MarketConfig,
    k: int,
    method: Method = Method(config.METHOD),
    grid_points: int = config.GRID_POINTS,
    price_max: float = config.PRICE_MAX,
    epsilon: float = config.EXACT_EPSILON,
) -> BestResponse:
    if Method(method) is Method.GRID:
        return best_response_grid(market, k, grid_points=grid_points, price_max=price_max)
    return best_response_exact(market, k, epsilon=epsilon)


def _realised(market: MarketConfig, k: int, price: float, method: Method) -> BestResponse:
    assignment = assign_customers(market.with_price(k, price))
    return BestResponse(
        price=price,
        profit_per_customer=float(assignment.profits_per_customer[k]),
        method=method,
    )


def _check_firm(market: MarketConfig, k: int):
    if not 0 <= k < market.m:
        raise ValueError(f"Firm id {k} out of range for {market.m} firms.")
