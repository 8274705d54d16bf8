"""Static figure analogues for each experiment kind."""

from typing import Callable, Dict

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from ..analytics import nash_equilibrium, predicted_profit_per_firm
from ..experiments import ExperimentKind, ExperimentResult


def _two_firm(result: ExperimentResult, ax):
    agg = result.aggregates
    for n_side, group in agg.groupby("n_side", sort=False):
        ax.errorbar(group["d"], group["mean"], yerr=group["std"].fillna(0.0), fmt="o", capsize=3, label=f"N={n_side}")
    d = np.linspace(0.01, 0.99, 197)
    ax.plot(d, [nash_equilibrium(x, result.spec.r).profit for x in d], "k-", label="X*(d)")
    ax.set_xlabel("distance d")
    ax.set_ylabel("profit per customer")
    ax.legend()


def _variance_scaling(result: ExperimentResult, ax):
    agg = result.aggregates
    ax.errorbar(agg["n_side"], agg["mean"], yerr=agg["std"].fillna(0.0), fmt="o", capsize=3)
    slope = result.slopes.get("variance_vs_n")
    if slope is not None:
        n = np.asarray(agg["n_side"], dtype=float)
        ax.plot(n, np.exp(slope.intercept) * n**slope.slope, "k--", label=f"slope {slope.slope:.2f}")
        ax.legend()
    ax.set_xscale("log")
    ax.set_yscale("log")
    ax.set_xlabel("N")
    ax.set_ylabel("tail profit variance")


def _multi_firm(result: ExperimentResult, ax):
    agg = result.aggregates
    ax.errorbar(agg["m"], agg["mean"], yerr=agg["std"].fillna(0.0), fmt="o", capsize=3, label="simulation")
    m = np.asarray(agg["m"], dtype=float)
    ax.plot(m, [predicted_profit_per_firm(int(x), result.spec.r) for x in m], "k:", label="r / m^1.5")
    fit = result.fits.get("fit")
    if fit is not None:
        ax.plot(m, fit.predict(m, result.spec.r), "k--", label=f"A={fit.A:.2f}, B={fit.B:.2f}")
    ax.set_xscale("log")
    ax.set_yscale("log")
    ax.set_xlabel("number of firms m")
    ax.set_ylabel("profit per firm and customer")
    ax.legend()


def _gamma_sweep(result: ExperimentResult, ax):
    table = result.tables.get("exponents")
    if table is not None and len(table):
        ax.errorbar(table["gamma"], table["B"], yerr=table["se_B"], fmt="o", capsize=3, label="fitted B")
    g = np.linspace(0.0, max(result.spec.gamma_values), 100)
    ax.plot(g, 1.0 + g / 2.0, "k--", label="1 + gamma/2")
    ax.set_xlabel("gamma")
    ax.set_ylabel("profit exponent B")
    ax.legend()


def _profiles(result: ExperimentResult, ax):
    for p2, group in result.profiles.groupby("p2", sort=False):
        ax.plot(group["p1"], group["profit"], label=f"p2={p2:g}")
    p = np.linspace(0.0, result.spec.price_max, 2)
    ax.plot(p, p, "k:", lw=1)
    ax.set_xlabel("p1")
    ax.set_ylabel("profit of firm 1")
    ax.legend()


def _nash_table(result: ExperimentResult, ax):
    rows = result.rows
    ax.plot(rows["d"], rows["x_star"], "o-", label="X*")
    ax.plot(rows["d"], rows["p_star"], "s-", label="p*")
    ax.set_xlabel("distance d")
    ax.legend()


PLOTTERS: Dict[ExperimentKind, Callable] = {
    ExperimentKind.TWO_FIRM_SWEEP: _two_firm,
    ExperimentKind.VARIANCE_SCALING: _variance_scaling,
    ExperimentKind.MULTI_FIRM_SWEEP: _multi_firm,
    ExperimentKind.GAMMA_SWEEP: _gamma_sweep,
    ExperimentKind.NON_PBC_DEMO: _profiles,
    ExperimentKind.PROFIT_PROFILE: _profiles,
    ExperimentKind.NASH_TABLE: _nash_table,
}


def render_figure(result: ExperimentResult, path, fmt: str = "svg"):
    """Draws the figure analogue of result and saves it to path."""
    if result.kind is ExperimentKind.ASSIGN_MAP:
        fig, axes = plt.subplots(1, len(result.grids), figsize=(5 * len(result.grids), 5))
        for ax, (boundary, grid) in zip(np.atleast_1d(axes), result.grids.items()):
            # grid[i, j] is customer (x_i, y_j)
            ax.imshow(grid.T, origin="lower", extent=(0, 1, 0, 1), cmap="Pastel1", interpolation="nearest")
            firms = result.rows[result.rows["boundary"] == boundary]
            ax.plot(firms["x"], firms["y"], "k*", markersize=10)
            ax.set_title(boundary)
            ax.set_xlabel("x")
            ax.set_ylabel("y")
    else:
        fig, ax = plt.subplots(figsize=(7, 5))
        PLOTTERS[result.kind](result, ax)
        ax.grid(True, alpha=0.3)
        ax.set_title(result.kind.subcommand)
    fig.tight_layout()
    try:
        fig.savefig(path, format=fmt)
    finally:
        plt.close(fig)
