"""Functions to query the run registry."""

import pandas as pd
from sqlalchemy.orm import Session

from .models import ExperimentRun, ResultRecord


def list_runs(session: Session) -> pd.DataFrame:
    """One line per stored run, newest first."""
    query = session.query(
        ExperimentRun.id,
        ExperimentRun.kind,
        ExperimentRun.created_at,
        ExperimentRun.wall_clock,
    ).order_by(ExperimentRun.id.desc())
    return pd.read_sql_query(query.statement, session.bind)


def get_run(session: Session, run_id: int) -> ExperimentRun:
    run = session.get(ExperimentRun, run_id)
    if run is None:
        raise ValueError(f"No run with id {run_id}.")
    return run


def get_run_rows(session: Session, run_id: int, agg: bool = False) -> pd.DataFrame:
    """
    The stored rows of a run as a DataFrame, or its aggregate rows when agg is
    set.
    """
    get_run(session, run_id)
    payloads = (
        session.query(ResultRecord.payload_json)
        .filter(ResultRecord.run_id == run_id, ResultRecord.agg == agg)
        .order_by(ResultRecord.id)
        .all()
    )
    return pd.DataFrame([payload for (payload,) in payloads])
