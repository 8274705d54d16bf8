"""Core logic for running the sweep experiments."""

import time
from datetime import datetime
from typing import Callable, Dict, List, Sequence

import numpy as np
import pandas as pd
from joblib import Parallel, delayed
from loguru import logger
from tqdm import tqdm

from . import config
from .models import ExperimentKind, ExperimentResult, ExperimentSpec
from .placement import pair_positions, place_firms_random
from .. import __version__
from .. import config as app_config
from ..analytics import (
    FitError,
    fit_loglog_slope,
    fit_power_law,
    mean_profit_over_nn_density,
    nash_equilibrium,
    nn_profit_prediction,
    pbc_stability_check,
    predicted_profit_per_firm,
)
from ..dynamics import default_grid_points, find_undercut_events, profit_profile, run_alternating
from ..dynamics import config as dynamics_config
from ..market import Boundary, MarketConfig, Point, assign_customers, assignment_grid, nearest_neighbor_distances

# Configure logging when module is imported
app_config.configure_logging()


def _run_tasks(func: Callable, tasks: Sequence[tuple], n_jobs: int, desc: str) -> List[dict]:
    """Runs func over tasks; results come back in task order whatever n_jobs is."""
    if n_jobs == 1:
        return [func(*task) for task in tqdm(tasks, desc=desc)]
    return Parallel(n_jobs=n_jobs)(delayed(func)(*task) for task in tqdm(tasks, desc=desc))


def _grid_points_for(spec: ExperimentSpec, n_side: int) -> int:
    grid_points = spec.grid_points or default_grid_points(n_side)
    if n_side >= dynamics_config.LARGE_N_THRESHOLD:
        grid_points = max(grid_points, dynamics_config.LARGE_N_GRID_POINTS)
    return grid_points


def _dynamics(spec: ExperimentSpec, market: MarketConfig, steps: int, burn_in: int):
    return run_alternating(
        market,
        steps=steps,
        burn_in=burn_in,
        initial_price=spec.initial_price,
        method=spec.method,
        grid_points=_grid_points_for(spec, market.n_side),
        price_max=spec.price_max,
        epsilon=spec.epsilon,
    )


def _pair_task(spec: ExperimentSpec, n_side: int, d: float, seed: int) -> dict:
    positions = pair_positions(d, seed=seed, translate=spec.translate, n_side=n_side)
    market = MarketConfig.from_positions(
        n_side, positions, prices=spec.initial_price, r=spec.r, gamma=spec.gamma, boundary=spec.boundary
    )
    trace = _dynamics(spec, market, spec.steps, spec.burn_in)
    return {
        "n_side": n_side,
        "d": d,
        "seed": seed,
        "profit_0": trace.tail_mean_profit[0],
        "profit_1": trace.tail_mean_profit[1],
        "price_0": trace.tail_mean_price[0],
        "price_1": trace.tail_mean_price[1],
        "var_0": trace.tail_var_profit[0],
        "var_1": trace.tail_var_profit[1],
        "mean_profit": float(trace.tail_mean_profit.mean()),
        "mean_var": float(trace.tail_var_profit.mean()),
        "converged": trace.converged,
    }


def _multi_task(spec: ExperimentSpec, gamma: float, m: int, seed: int) -> dict:
    positions = place_firms_random(m, seed)
    market = MarketConfig.from_positions(
        spec.n_side, positions, prices=spec.initial_price, r=spec.r, gamma=gamma, boundary=spec.boundary
    )
    steps, burn_in = spec.steps, spec.burn_in
    if spec.scale_steps_with_m and m > 2:
        # every firm gets the two-firm protocol's share of optimizations
        steps, burn_in = spec.steps * m // 2, spec.burn_in * m // 2

    nn = nearest_neighbor_distances(positions, spec.boundary) if m > 1 else np.array([np.nan])
    if m > 1 and nn.min() < 1.0 / spec.n_side:
        logger.warning(f"m={m}, seed={seed}: two firms closer than one lattice cell ({nn.min():.4g}); kept.")

    trace = _dynamics(spec, market, steps, burn_in)
    return {
        "gamma": gamma,
        "m": m,
        "seed": seed,
        "mean_profit": float(trace.tail_mean_profit.mean()),
        "total_profit": float(trace.tail_mean_profit.sum()),
        "mean_price": float(trace.tail_mean_price.mean()),
        "mean_var": float(np.nanmean(trace.tail_var_profit)),
        "mean_nn_distance": float(nn.mean()),
        "min_nn_distance": float(nn.min()),
        "steps": steps,
        "converged": trace.converged,
    }


def _aggregate(rows: pd.DataFrame, keys: List[str], value: str) -> pd.DataFrame:
    """Mean and spread of value across seeds for every sweep point."""
    grouped = rows.groupby(keys, sort=False)[value]
    agg = grouped.agg(["mean", "min", "max", "count"]).reset_index()
    # std only when at least two seeds contribute
    std = grouped.std(ddof=1).reset_index(drop=True)
    agg["std"] = np.where(agg["count"] >= 2, std, np.nan)
    return agg.rename(columns={"count": "n_seeds"})


def run_two_firm_sweep(spec: ExperimentSpec) -> ExperimentResult:
    """Tail profit of two firms at distance d against the closed-form X*(d, r)."""
    seeds = spec.seeds if spec.translate else spec.seeds[:1]
    if not spec.translate and len(spec.seeds) > 1:
        logger.info("Fixed placement: seeds collapse to one deterministic run per sweep point.")
    tasks = [(spec, n, d, seed) for n in spec.n_values for d in spec.d_values for seed in seeds]
    logger.info(f"Two-firm sweep: {len(tasks)} runs over d={list(spec.d_values)}, N={list(spec.n_values)}")
    rows = pd.DataFrame(_run_tasks(_pair_task, tasks, spec.n_jobs, "Two-firm sweep"))

    aggregates = _aggregate(rows, ["n_side", "d"], "mean_profit")
    aggregates["x_star"] = [nash_equilibrium(d, spec.r).profit for d in aggregates["d"]]
    aggregates["rel_gap"] = (aggregates["mean"] - aggregates["x_star"]).abs() / aggregates["x_star"]
    for rec in aggregates.itertuples():
        logger.info(f"N={rec.n_side}, d={rec.d}: profit {rec.mean:.5f} vs X* {rec.x_star:.5f} (gap {rec.rel_gap:.1%})")
    return ExperimentResult(spec=spec, rows=rows, aggregates=aggregates)


def run_variance_scaling(spec: ExperimentSpec) -> ExperimentResult:
    """Tail profit variance against lattice size, with its log-log slope."""
    d = spec.d_values[0]
    seeds = spec.seeds if spec.translate else spec.seeds[:1]
    tasks = [(spec, n, d, seed) for n in spec.n_values for seed in seeds]
    logger.info(f"Variance scaling: d={d}, N={list(spec.n_values)}, {len(seeds)} seeds")
    rows = pd.DataFrame(_run_tasks(_pair_task, tasks, spec.n_jobs, "Variance scaling"))

    aggregates = _aggregate(rows, ["n_side"], "mean_var")
    aggregates["grid_points"] = [_grid_points_for(spec, n) for n in aggregates["n_side"]]
    result = ExperimentResult(spec=spec, rows=rows, aggregates=aggregates)
    try:
        slope = fit_loglog_slope(aggregates["n_side"], aggregates["mean"])
        result.slopes["variance_vs_n"] = slope
        logger.info(f"Variance ~ N^{slope.slope:.3f} (se {slope.se_slope:.3f})")
    except FitError as e:
        logger.warning(f"Variance slope not fitted: {e}")
    return result


def _multi_firm_rows(spec: ExperimentSpec, gammas: Sequence[float], desc: str) -> pd.DataFrame:
    tasks = [(spec, gamma, m, seed) for gamma in gammas for m in spec.m_values for seed in spec.seeds]
    logger.info(f"{desc}: {len(tasks)} runs over m={list(spec.m_values)}, gamma={list(gammas)}")
    return pd.DataFrame(_run_tasks(_multi_task, tasks, spec.n_jobs, desc))


def _multi_firm_aggregates(spec: ExperimentSpec, rows: pd.DataFrame) -> pd.DataFrame:
    aggregates = _aggregate(rows, ["gamma", "m"], "mean_profit")
    aggregates["predicted"] = [predicted_profit_per_firm(m, spec.r) for m in aggregates["m"]]
    aggregates["overestimate"] = aggregates["predicted"] / aggregates["mean"]
    aggregates["nn_prediction"] = [nn_profit_prediction(m, spec.r) for m in aggregates["m"]]
    # pair equilibrium averaged over the pair distance density, m = 2 with linear costs only
    aggregates["density_prediction"] = [
        mean_profit_over_nn_density(m, spec.r) if m == 2 and gamma == 1.0 else np.nan
        for gamma, m in zip(aggregates["gamma"], aggregates["m"])
    ]
    return aggregates


def _fit(spec: ExperimentSpec, aggregates: pd.DataFrame, label: str):
    usable = aggregates.dropna(subset=["std"])
    points = list(zip(usable["m"], usable["mean"], usable["std"]))
    try:
        fit = fit_power_law(points, r=spec.r, min_m=spec.fit_min_m)
    except FitError as e:
        logger.warning(f"{label}: power law not fitted: {e}")
        return None
    logger.info(f"{label}: A={fit.A:.4f}±{fit.se_A:.4f}, B={fit.B:.4f}±{fit.se_B:.4f}")
    return fit


def run_multi_firm_sweep(spec: ExperimentSpec) -> ExperimentResult:
    """Profit per firm against the number of randomly placed firms, fitted to A r / m^B."""
    rows = _multi_firm_rows(spec, [spec.gamma], "Multi-firm sweep")
    aggregates = _multi_firm_aggregates(spec, rows)
    result = ExperimentResult(spec=spec, rows=rows, aggregates=aggregates)
    fit = _fit(spec, aggregates, f"gamma={spec.gamma:g}")
    if fit is not None:
        result.fits["fit"] = fit
    return result


def run_gamma_sweep(spec: ExperimentSpec) -> ExperimentResult:
    """The multi-firm pipeline repeated for every transport exponent."""
    rows = _multi_firm_rows(spec, spec.gamma_values, "Gamma sweep")
    aggregates = _multi_firm_aggregates(spec, rows)
    result = ExperimentResult(spec=spec, rows=rows, aggregates=aggregates)
    exponents = []
    for gamma in spec.gamma_values:
        label = f"gamma={gamma:g}"
        fit = _fit(spec, aggregates[aggregates["gamma"] == gamma], label)
        if fit is None:
            continue
        result.fits[label] = fit
        exponents.append({"gamma": gamma, "B": fit.B, "se_B": fit.se_B, "A": fit.A, "se_A": fit.se_A, "linear_B": 1.0 + gamma / 2.0})
    result.tables["exponents"] = pd.DataFrame(exponents, columns=["gamma", "B", "se_B", "A", "se_A", "linear_B"])
    return result


def _profiles(market: MarketConfig, p2_values: Sequence[float], price_max: float, points: int) -> pd.DataFrame:
    """X_0(p_0 | p_1) on a price grid for each competitor price."""
    prices = np.linspace(0.0, price_max, points)
    frames = []
    for p2 in p2_values:
        profits = profit_profile(market.with_prices([0.0, p2]), 0, prices)
        frames.append(pd.DataFrame({"p2": p2, "p1": prices, "profit": profits}))
    return pd.concat(frames, ignore_index=True)


def _profile_maxima(profiles: pd.DataFrame) -> pd.DataFrame:
    best = profiles.loc[profiles.groupby("p2", sort=False)["profit"].idxmax()]
    return best.rename(columns={"p1": "best_p1", "profit": "best_profit"}).reset_index(drop=True)


def run_non_pbc_demo(spec: ExperimentSpec) -> ExperimentResult:
    """Two firms without periodic boundaries: the trace and bimodal profit profiles."""
    d = spec.d_values[0]
    market = MarketConfig.from_positions(
        spec.n_side, pair_positions(d), prices=spec.initial_price, r=spec.r, gamma=spec.gamma, boundary=Boundary.OPEN
    )
    logger.info(f"Open-boundary demo: d={d}, N={spec.n_side}, {spec.steps} steps")
    trace = _dynamics(spec, market, spec.steps, spec.burn_in)
    prices, profits, shares = trace.prices, trace.profits, trace.shares
    rows = pd.DataFrame(
        {
            "step": np.arange(len(trace.steps)),
            "firm": trace.acting_firms,
            "price_0": prices[:, 0],
            "price_1": prices[:, 1],
            "profit_0": profits[:, 0],
            "profit_1": profits[:, 1],
            "share_0": shares[:, 0],
            "share_1": shares[:, 1],
        }
    )
    events = find_undercut_events(trace, spec.r, d, gamma=spec.gamma)
    profiles = _profiles(market, spec.p2_values, spec.price_max, spec.profile_points)
    aggregates = pd.DataFrame(
        [
            {
                "d": d,
                "converged": trace.converged,
                "tail_profit_0": trace.tail_mean_profit[0],
                "tail_profit_1": trace.tail_mean_profit[1],
                "tail_var_0": trace.tail_var_profit[0],
                "tail_var_1": trace.tail_var_profit[1],
                "undercut_events": len(events),
            }
        ]
    )
    if trace.converged:
        logger.warning("Open-boundary dynamics reported convergence.")
    else:
        logger.info(f"No equilibrium: {len(events)} undercut collapses in {len(trace.steps)} steps")
    return ExperimentResult(
        spec=spec,
        rows=rows,
        aggregates=aggregates,
        trace=trace,
        profiles=profiles,
        tables={"undercut_events": events, "profile_maxima": _profile_maxima(profiles)},
    )


def run_profit_profile(spec: ExperimentSpec) -> ExperimentResult:
    """Discontinuous profit profiles X_0(p_0 | p_1) on a small periodic lattice."""
    d = spec.d_values[0]
    market = MarketConfig.from_positions(
        spec.n_side, pair_positions(d), prices=spec.initial_price, r=spec.r, gamma=spec.gamma, boundary=spec.boundary
    )
    profiles = _profiles(market, spec.p2_values, spec.price_max, spec.profile_points)
    return ExperimentResult(spec=spec, rows=profiles, aggregates=_profile_maxima(profiles), profiles=profiles)


def run_nash_table(spec: ExperimentSpec) -> ExperimentResult:
    """Closed-form equilibrium quantities per distance."""
    records = []
    for d in spec.d_values:
        ne = nash_equilibrium(d, spec.r)
        records.append(
            {
                "d": d,
                "omega": ne.omega,
                "x_star": ne.profit,
                "p_star": ne.price,
                "stable": pbc_stability_check(min(d, 1.0 - d), spec.r),
            }
        )
    rows = pd.DataFrame(records, columns=["d", "omega", "x_star", "p_star", "stable"])
    return ExperimentResult(spec=spec, rows=rows, aggregates=pd.DataFrame())


def run_assign_map(spec: ExperimentSpec) -> ExperimentResult:
    """Customer regions of each firm under both boundary modes."""
    positions = [Point(x, y) for x, y, _ in spec.firms]
    prices = [price for _, _, price in spec.firms]
    records, grids = [], {}
    for boundary in (Boundary.OPEN, Boundary.PERIODIC):
        market = MarketConfig.from_positions(
            spec.n_side, positions, prices=prices, r=spec.r, gamma=spec.gamma, boundary=boundary
        )
        assignment = assign_customers(market)
        grids[boundary.value] = assignment_grid(market)
        for firm in market.firms:
            records.append(
                {
                    "boundary": boundary.value,
                    "firm": firm.id,
                    "x": firm.position.x,
                    "y": firm.position.y,
                    "price": firm.price,
                    "count": int(assignment.counts[firm.id]),
                    "share": assignment.shares[firm.id],
                    "profit": assignment.profits_per_customer[firm.id],
                }
            )
    return ExperimentResult(spec=spec, rows=pd.DataFrame(records), aggregates=pd.DataFrame(), grids=grids)


RUNNERS: Dict[ExperimentKind, Callable[[ExperimentSpec], ExperimentResult]] = {
    ExperimentKind.TWO_FIRM_SWEEP: run_two_firm_sweep,
    ExperimentKind.VARIANCE_SCALING: run_variance_scaling,
    ExperimentKind.MULTI_FIRM_SWEEP: run_multi_firm_sweep,
    ExperimentKind.GAMMA_SWEEP: run_gamma_sweep,
    ExperimentKind.NON_PBC_DEMO: run_non_pbc_demo,
    ExperimentKind.NASH_TABLE: run_nash_table,
    ExperimentKind.PROFIT_PROFILE: run_profit_profile,
    ExperimentKind.ASSIGN_MAP: run_assign_map,
}


def run_experiment(spec: ExperimentSpec) -> ExperimentResult:
    """Runs the experiment named by spec.kind and stamps reproducibility metadata."""
    started = datetime.now()
    tick = time.perf_counter()
    result = RUNNERS[spec.kind](spec)
    result.meta = {
        "rng": config.RNG_ALGORITHM,
        "seeds": list(spec.seeds),
        "started_at": started.isoformat(timespec="seconds"),
        "wall_clock_s": time.perf_counter() - tick,
        "n_rows": len(result.rows),
        "version": __version__,
    }
    logger.info(f"{spec.kind.subcommand} finished in {result.meta['wall_clock_s']:.1f}s")
    return result
