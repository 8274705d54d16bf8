"""Local SQLite registry of experiment runs."""

from .models import Base, ExperimentRun, ResultRecord, create_tables, drop_tables, get_engine, get_session
from .query import get_run, get_run_rows, list_runs
from .recorder import save_result
