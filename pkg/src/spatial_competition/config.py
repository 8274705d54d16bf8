"""Configuration constants shared by the spatial competition tools."""

import os
import sys
from pathlib import Path
from dotenv import load_dotenv
from loguru import logger

# --- Global Config Variables ---
DB_URL = "sqlite:///db/hotelling.db"
LOG_FILE = Path("logs") / "hotelling.log"
OUT_DIR = Path("results")
N_JOBS = 1

# --- Logging Configuration ---
LOG_LEVEL = "INFO"
LOG_ROTATION = "10 MB"
LOG_COMPRESSION = "zip"


def load_config():
    """Loads optional overrides from a .env file and the environment."""
    global DB_URL, LOG_FILE, OUT_DIR, N_JOBS, LOG_LEVEL

    load_dotenv()

    DB_URL = os.getenv("HOTELLING_DB_URL", DB_URL)
    LOG_FILE = Path(os.getenv("HOTELLING_LOG_FILE", str(LOG_FILE)))
    OUT_DIR = Path(os.getenv("HOTELLING_OUT_DIR", str(OUT_DIR)))
    LOG_LEVEL = os.getenv("HOTELLING_LOG_LEVEL", LOG_LEVEL).upper()

    n_jobs = os.getenv("HOTELLING_N_JOBS")
    if n_jobs:
        try:
            N_JOBS = int(n_jobs)
        except ValueError:
            raise ValueError(f"HOTELLING_N_JOBS must be an integer, got {n_jobs!r}.")


def get_db_path() -> Path:
    """Returns the path to the database file."""
    return Path(DB_URL.replace("sqlite:///", ""))


def ensure_dir_exists():
    """Ensures the db and logs directories exist."""
    if DB_URL.startswith("sqlite:///") and ":memory:" not in DB_URL:
        get_db_path().parent.mkdir(parents=True, exist_ok=True)
    LOG_FILE.parent.mkdir(parents=True, exist_ok=True)


def color_enabled() -> bool:
    """Diagnostics are plain text whenever NO_COLOR is set (any value)."""
    return "NO_COLOR" not in os.environ


_logging_configured = False


def configure_logging():
    """Configures the logger to write to a rotating file and to stderr."""
    global _logging_configured
    if _logging_configured:
        return

    ensure_dir_exists()
    logger.remove()
    logger.add(sys.stderr, level=LOG_LEVEL, colorize=color_enabled())
    logger.add(
        LOG_FILE,
        rotation=LOG_ROTATION,
        compression=LOG_COMPRESSION,
        level=LOG_LEVEL,
    )
    _logging_configured = True


# Load the configuration when the module is imported
load_config()
