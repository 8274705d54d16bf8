import numpy as np
import pandas as pd
import pytest

from spatial_competition.analytics import mean_profit_over_nn_density, nash_equilibrium, nn_mean_distance
from spatial_competition.dynamics import Method
from spatial_competition.dynamics import config as dynamics_config
from spatial_competition.experiments import (
    ExperimentKind,
    ExperimentResult,
    ExperimentSpec,
    pair_positions,
    place_firms_random,
    run_assign_map,
    run_experiment,
    run_gamma_sweep,
    run_multi_firm_sweep,
    run_nash_table,
    run_non_pbc_demo,
    run_profit_profile,
    run_two_firm_sweep,
    run_variance_scaling,
)
from spatial_competition.market import Boundary, MarketConfig, Point, assign_customers, nearest_neighbor_distances


@pytest.fixture
def small_two_firm():
    return ExperimentSpec(
        kind=ExperimentKind.TWO_FIRM_SWEEP,
        n_values=(20,),
        d_values=(0.3, 0.5, 0.7),
        seeds=(0, 1, 2),
        steps=40,
        burn_in=20,
    )


@pytest.fixture
def small_multi_firm():
    return ExperimentSpec(
        kind=ExperimentKind.MULTI_FIRM_SWEEP,
        n_side=16,
        m_values=(2, 3, 4),
        seeds=(0, 1, 2),
        steps=12,
        burn_in=6,
        fit_min_m=2,
    )


def test_place_firms_random_is_deterministic():
    assert place_firms_random(10, 5) == place_firms_random(10, 5)
    assert place_firms_random(10, 5) != place_firms_random(10, 6)
    with pytest.raises(ValueError):
        place_firms_random(0, 1)


def test_place_firms_random_is_uniform():
    xs = np.array([p.x for p in place_firms_random(100_000, 0)])
    assert abs(xs.mean() - 0.5) < 3 * (1 / np.sqrt(12)) / np.sqrt(100_000)
    assert xs.min() >= 0.0 and xs.max() < 1.0


def test_place_firms_random_nearest_neighbor_mean():
    distances = np.concatenate([nearest_neighbor_distances(place_firms_random(10, seed)) for seed in range(5000)])
    assert distances.mean() == pytest.approx(nn_mean_distance(10), rel=0.01)


def test_pair_positions():
    assert pair_positions(0.3) == (Point(0.0, 0.5), Point(0.3, 0.5))
    a, b = pair_positions(0.3, seed=4, translate=True)
    assert a == pair_positions(0.3, seed=4, translate=True)[0]
    assert a != Point(0.0, 0.5)
    dx = (b.x - a.x) % 1.0
    assert dx == pytest.approx(0.3)
    assert b.y == pytest.approx(a.y)


@pytest.mark.parametrize("n_side", [10, 20, 40])
def test_translated_pair_stays_on_lattice(n_side):
    fixed = assign_customers(MarketConfig.from_positions(n_side, pair_positions(0.5), prices=[0.3, 0.27]))
    for seed in range(10):
        a, b = pair_positions(0.5, seed=seed, translate=True, n_side=n_side)
        assert a.x * n_side == pytest.approx(round(a.x * n_side), abs=1e-9)
        assert (a.y - 0.5) * n_side == pytest.approx(round((a.y - 0.5) * n_side), abs=1e-9)
        moved = assign_customers(MarketConfig.from_positions(n_side, [a, b], prices=[0.3, 0.27]))
        np.testing.assert_array_equal(moved.counts, fixed.counts)


def test_spec_default_method_follows_dynamics_config():
    assert ExperimentSpec(kind=ExperimentKind.NASH_TABLE).method is Method(dynamics_config.METHOD)


def test_spec_validation():
    with pytest.raises(ValueError, match="burn-in must be < steps"):
        ExperimentSpec(kind="two_firm_sweep", steps=120, burn_in=200)
    with pytest.raises(ValueError, match="seeds must be distinct"):
        ExperimentSpec(kind="two_firm_sweep", seeds=(1, 1))
    with pytest.raises(ValueError, match="d_values must not be empty"):
        ExperimentSpec(kind="two_firm_sweep", d_values=())
    with pytest.raises(ValueError):
        ExperimentSpec(kind="gamma_sweep", gamma_values=(1.0, -1.0))
    with pytest.raises(ValueError):
        ExperimentSpec(kind="unknown")


def test_spec_round_trips_through_dict(small_two_firm):
    data = small_two_firm.to_dict()
    assert data["kind"] == "two_firm_sweep"
    assert data["method"] == "exact"
    assert ExperimentSpec.from_dict(data) == small_two_firm
    assert ExperimentKind.TWO_FIRM_SWEEP.subcommand == "two-firm"


def test_two_firm_sweep_collapses_seeds_without_translation(small_two_firm):
    result = run_two_firm_sweep(small_two_firm)
    assert len(result.rows) == 3
    assert set(result.rows["seed"]) == {0}
    agg = result.aggregates
    assert list(agg.columns[:2]) == ["n_side", "d"]
    assert agg["std"].isna().all()
    assert (agg["n_seeds"] == 1).all()
    np.testing.assert_allclose(agg["x_star"], [nash_equilibrium(d).profit for d in (0.3, 0.5, 0.7)])


def test_two_firm_sweep_symmetric_in_d(small_two_firm):
    rows = run_two_firm_sweep(small_two_firm).rows.set_index("d")
    assert rows.loc[0.3, "mean_profit"] == pytest.approx(rows.loc[0.7, "mean_profit"], rel=0.05)


def test_two_firm_sweep_with_translation(small_two_firm):
    spec = ExperimentSpec.from_dict({**small_two_firm.to_dict(), "translate": True, "d_values": [0.5]})
    result = run_two_firm_sweep(spec)
    assert list(result.rows["seed"]) == [0, 1, 2]
    agg = result.aggregates.iloc[0]
    assert agg["n_seeds"] == 3
    assert agg["min"] <= agg["mean"] <= agg["max"]


def test_two_firm_sweep_is_deterministic(small_two_firm):
    first = run_two_firm_sweep(small_two_firm)
    second = run_two_firm_sweep(small_two_firm)
    pd.testing.assert_frame_equal(first.rows, second.rows)


def test_parallel_sweep_keeps_task_order(small_two_firm):
    serial = run_two_firm_sweep(small_two_firm)
    parallel = run_two_firm_sweep(ExperimentSpec.from_dict({**small_two_firm.to_dict(), "n_jobs": 2}))
    pd.testing.assert_frame_equal(serial.rows, parallel.rows)


def test_variance_scaling_reports_slope():
    spec = ExperimentSpec(
        kind=ExperimentKind.VARIANCE_SCALING,
        n_values=(10, 20, 40),
        d_values=(0.5,),
        seeds=(0, 1),
        steps=40,
        burn_in=20,
        translate=True,
    )
    result = run_variance_scaling(spec)
    assert list(result.aggregates["n_side"]) == [10, 20, 40]
    assert len(result.rows) == 6
    assert list(result.aggregates["grid_points"]) == [10_000] * 3
    if (result.aggregates["mean"] > 0).all():
        assert "variance_vs_n" in result.slopes


def test_multi_firm_sweep(small_multi_firm):
    result = run_multi_firm_sweep(small_multi_firm)
    rows, agg = result.rows, result.aggregates
    assert len(rows) == 9
    # steps scale with m / 2 beyond two firms
    assert dict(zip(rows["m"], rows["steps"])) == {2: 12, 3: 18, 4: 24}
    assert list(agg["m"]) == [2, 3, 4]
    assert (agg["min"] <= agg["mean"]).all() and (agg["mean"] <= agg["max"]).all()
    np.testing.assert_allclose(agg["predicted"], [m**-1.5 for m in (2, 3, 4)])
    assert agg["density_prediction"].iloc[0] == pytest.approx(mean_profit_over_nn_density(2))
    assert agg["density_prediction"].iloc[1:].isna().all()
    assert set(result.fits) <= {"fit"}
    if "fit" in result.fits:
        assert result.fits["fit"].n_points >= 3


def test_multi_firm_fit_skipped_with_one_seed(small_multi_firm):
    spec = ExperimentSpec.from_dict({**small_multi_firm.to_dict(), "seeds": [0]})
    result = run_multi_firm_sweep(spec)
    assert result.fits == {}
    assert result.aggregates["std"].isna().all()


def test_random_pairs_match_density_averaged_equilibrium():
    spec = ExperimentSpec(kind=ExperimentKind.MULTI_FIRM_SWEEP, n_side=40, m_values=(2,), seeds=tuple(range(20)))
    agg = run_multi_firm_sweep(spec).aggregates.iloc[0]
    assert agg["n_seeds"] == 20
    assert agg["mean"] == pytest.approx(agg["density_prediction"], rel=0.15)


def test_gamma_sweep_table(small_multi_firm):
    spec = ExperimentSpec.from_dict(
        {**small_multi_firm.to_dict(), "kind": "gamma_sweep", "gamma_values": [1.0, 2.0], "m_values": [2, 3]}
    )
    result = run_gamma_sweep(spec)
    assert set(result.rows["gamma"]) == {1.0, 2.0}
    exponents = result.tables["exponents"]
    assert list(exponents.columns) == ["gamma", "B", "se_B", "A", "se_A", "linear_B"]
    assert [gamma for gamma, _ in result.gamma_exponents()] == list(exponents["gamma"])


def test_non_pbc_demo():
    spec = ExperimentSpec(
        kind=ExperimentKind.NON_PBC_DEMO,
        n_side=20,
        d_values=(0.2,),
        boundary=Boundary.OPEN,
        p2_values=(0.65, 0.71),
        steps=60,
        burn_in=40,
        profile_points=201,
    )
    result = run_non_pbc_demo(spec)
    assert len(result.rows) == 60
    assert result.trace is not None and len(result.trace.steps) == 60
    assert len(result.profiles) == 2 * 201
    assert set(result.tables) == {"undercut_events", "profile_maxima"}
    assert list(result.tables["profile_maxima"]["p2"]) == [0.65, 0.71]


def test_profit_profile_is_discontinuous():
    spec = ExperimentSpec(
        kind=ExperimentKind.PROFIT_PROFILE,
        n_side=10,
        d_values=(0.5,),
        p2_values=(0.4,),
        profile_points=2000,
    )
    result = run_profit_profile(spec)
    profile = result.profiles["profit"].to_numpy()
    # every customer gained or lost is a jump of at least p / N^2
    assert np.max(np.abs(np.diff(profile))) > 0.001
    assert result.aggregates["best_profit"].iloc[0] == profile.max()


def test_nash_table():
    spec = ExperimentSpec(kind=ExperimentKind.NASH_TABLE, d_values=(0.05, 0.25, 0.5))
    result = run_nash_table(spec)
    assert list(result.rows.columns) == ["d", "omega", "x_star", "p_star", "stable"]
    assert result.rows["stable"].all()
    assert result.rows["p_star"].iloc[-1] == pytest.approx(0.33807, abs=1e-5)


def test_assign_map():
    spec = ExperimentSpec(kind=ExperimentKind.ASSIGN_MAP, n_side=50)
    result = run_assign_map(spec)
    assert set(result.grids) == {"open", "periodic"}
    for grid in result.grids.values():
        assert grid.shape == (50, 50)
    counts = result.rows.groupby("boundary")["count"].sum()
    assert (counts == 2500).all()


def test_run_experiment_records_metadata():
    result = run_experiment(ExperimentSpec(kind=ExperimentKind.NASH_TABLE, d_values=(0.1, 0.2), seeds=(3, 4)))
    assert isinstance(result, ExperimentResult)
    assert result.meta["seeds"] == [3, 4]
    assert "PCG64" in result.meta["rng"]
    assert result.meta["wall_clock_s"] >= 0


@pytest.mark.slow
def test_two_firm_sweep_matches_closed_form():
    spec = ExperimentSpec(kind=ExperimentKind.TWO_FIRM_SWEEP, n_values=(20, 40, 80), seeds=(0,))
    agg = run_two_firm_sweep(spec).aggregates
    at_80 = agg[agg["n_side"] == 80]
    assert (at_80["rel_gap"] < 0.15).all()
    gaps = agg.pivot(index="n_side", columns="d", values="rel_gap")
    assert (gaps.loc[20] >= gaps.loc[40]).all()
    assert (gaps.loc[40] >= gaps.loc[80]).all()


@pytest.mark.slow
def test_variance_scales_as_inverse_square():
    spec = ExperimentSpec(
        kind=ExperimentKind.VARIANCE_SCALING,
        n_values=(10, 20, 40, 80, 160),
        d_values=(0.5,),
        seeds=tuple(range(10)),
    )
    result = run_variance_scaling(spec)
    assert (result.aggregates["n_seeds"] == 1).all()
    slope = result.slopes["variance_vs_n"]
    assert slope.slope == pytest.approx(-2.0, abs=0.3)


@pytest.mark.slow
def test_multi_firm_scaling():
    spec = ExperimentSpec(kind=ExperimentKind.MULTI_FIRM_SWEEP, m_values=(8, 16, 32, 64), seeds=tuple(range(20)))
    result = run_multi_firm_sweep(spec)
    fit = result.fits["fit"]
    assert fit.B == pytest.approx(1.5, abs=0.15)
    assert fit.A == pytest.approx(0.32, abs=0.05)
    assert result.aggregates["overestimate"].between(2.5, 3.5).all()


@pytest.mark.slow
def test_gamma_exponents():
    spec = ExperimentSpec(
        kind=ExperimentKind.GAMMA_SWEEP,
        m_values=(8, 16, 32, 64),
        gamma_values=(0.5, 1.0, 1.5, 2.0, 3.0),
        seeds=tuple(range(20)),
    )
    fits = dict(run_gamma_sweep(spec).gamma_exponents())
    assert fits[2.0].B == pytest.approx(1.98, abs=0.15)
    for gamma in (0.5, 1.0, 1.5, 2.0):
        fit = fits[gamma]
        assert abs(fit.B - (1 + gamma / 2)) <= max(2 * fit.se_B, 0.15)
    assert fits[3.0].B < 2.5


@pytest.mark.slow
def test_open_boundary_collapses_and_periodic_converges():
    spec = ExperimentSpec(
        kind=ExperimentKind.NON_PBC_DEMO,
        d_values=(0.2,),
        boundary=Boundary.OPEN,
        steps=500,
        burn_in=400,
        p2_values=(0.65,),
    )
    result = run_non_pbc_demo(spec)
    assert not result.trace.converged
    events = result.tables["undercut_events"]
    hits = events[
        events["p1_before"].between(0.10, 0.14)
        & events["p2"].between(0.22, 0.26)
        & events["s1_before"].between(0.28, 0.32)
    ]
    assert len(hits) > 0
    assert (hits["p1_after"] <= hits["p2"] - 0.2 + 0.01).all()

    periodic = ExperimentSpec(kind=ExperimentKind.TWO_FIRM_SWEEP, seeds=(0,))
    assert run_two_firm_sweep(periodic).rows["converged"].all()
