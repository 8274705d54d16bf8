"""Writes experiment results into the run registry."""

from typing import Optional

from loguru import logger
from sqlalchemy.orm import Session

from .. import config
from ..experiments import ExperimentResult
from .models import ExperimentRun, ResultRecord, create_tables, get_session

# Configure logging when module is imported
config.configure_logging()


def save_result(result: ExperimentResult, session: Optional[Session] = None) -> int:
    """Stores one run with its rows and aggregates; returns the new run id."""
    owns_session = session is None
    if owns_session:
        create_tables()
        session = get_session()

    summary = result.to_summary()
    run = ExperimentRun(
        kind=result.kind.value,
        spec_json=summary["spec"],
        meta_json=summary["meta"],
        fits_json=summary["fits"],
        wall_clock=result.meta.get("wall_clock_s"),
    )
    run.records = [ResultRecord(agg=False, payload_json=row) for row in summary["rows"]]
    run.records += [ResultRecord(agg=True, payload_json=row) for row in summary["aggregates"]]

    try:
        session.add(run)
        session.commit()
        logger.info(f"Recorded {result.kind.subcommand} as run {run.id} ({len(run.records)} records).")
        return run.id
    except Exception as e:
        logger.exception(f"Failed to record run: {e}")
        session.rollback()
        raise
    finally:
        if owns_session:
            session.close()
