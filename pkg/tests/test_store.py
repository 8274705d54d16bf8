import numpy as np
import pandas as pd
import pytest
from unittest.mock import patch
from sqlalchemy import create_engine
from sqlalchemy.orm import sessionmaker

from spatial_competition.analytics import PowerLawFit
from spatial_competition.experiments import ExperimentKind, ExperimentResult, ExperimentSpec
from spatial_competition.store import ExperimentRun, ResultRecord, get_run, get_run_rows, list_runs, models, save_result


@pytest.fixture
def db_session():
    """Creates a fresh in-memory database for each test."""
    engine = create_engine("sqlite:///:memory:")
    models.Base.metadata.create_all(engine)
    Session = sessionmaker(bind=engine)
    session = Session()
    yield session
    session.close()


@pytest.fixture
def result():
    spec = ExperimentSpec(kind=ExperimentKind.MULTI_FIRM_SWEEP, m_values=(8, 16), seeds=(0, 1))
    rows = pd.DataFrame({"m": [8, 8, 16, 16], "seed": [0, 1, 0, 1], "mean_profit": [0.014, 0.015, 0.005, np.nan]})
    aggregates = pd.DataFrame({"m": [8, 16], "mean": [0.0145, 0.005], "std": [0.0007, np.nan]})
    fit = PowerLawFit(A=0.32, B=1.5, se_A=0.01, se_B=0.02, residual=0.1, n_points=2)
    return ExperimentResult(
        spec=spec, rows=rows, aggregates=aggregates, fits={"fit": fit}, meta={"wall_clock_s": 1.5, "seeds": [0, 1]}
    )


def test_save_result(db_session, result):
    run_id = save_result(result, session=db_session)

    run = db_session.get(ExperimentRun, run_id)
    assert run.kind == "multi_firm_sweep"
    assert run.wall_clock == 1.5
    assert run.spec_json["m_values"] == [8, 16]
    assert run.fits_json["fit"]["B"] == 1.5
    assert db_session.query(ResultRecord).filter_by(run_id=run_id, agg=False).count() == 4
    assert db_session.query(ResultRecord).filter_by(run_id=run_id, agg=True).count() == 2


def test_saved_spec_rebuilds_the_experiment(db_session, result):
    run_id = save_result(result, session=db_session)
    spec = ExperimentSpec.from_dict(get_run(db_session, run_id).spec_json)
    assert spec == result.spec


def test_list_runs(db_session, result):
    first = save_result(result, session=db_session)
    second = save_result(result, session=db_session)
    runs = list_runs(db_session)
    assert list(runs["id"]) == [second, first]
    assert list(runs["kind"]) == ["multi_firm_sweep"] * 2


def test_get_run_rows(db_session, result):
    run_id = save_result(result, session=db_session)
    rows = get_run_rows(db_session, run_id)
    assert list(rows["seed"]) == [0, 1, 0, 1]
    # NaN is stored as null
    assert rows["mean_profit"].isna().tolist() == [False, False, False, True]
    agg = get_run_rows(db_session, run_id, agg=True)
    assert list(agg["m"]) == [8, 16]


def test_get_missing_run(db_session):
    with pytest.raises(ValueError, match="No run with id 42"):
        get_run(db_session, 42)
    with pytest.raises(ValueError):
        get_run_rows(db_session, 42)


def test_save_result_rolls_back_on_failure(db_session, result):
    with patch.object(db_session, "commit", side_effect=RuntimeError("locked")):
        with pytest.raises(RuntimeError):
            save_result(result, session=db_session)
    assert db_session.query(ExperimentRun).count() == 0


def test_save_result_owns_its_session(db_session, result):
    with patch("spatial_competition.store.recorder.get_session", return_value=db_session), \
         patch("spatial_competition.store.recorder.create_tables") as mock_create:
        run_id = save_result(result)
    mock_create.assert_called_once()
    assert run_id == 1
