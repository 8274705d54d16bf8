"""Writes experiment results to CSV, JSON, plot-data and SVG files."""

import json
import os
from datetime import datetime
from pathlib import Path
from typing import Callable, Dict, Iterable, List, Optional

import numpy as np
import pandas as pd
from loguru import logger

from . import config
from .plotting import render_figure
from .. import config as app_config
from ..experiments import ExperimentKind, ExperimentResult
from ..store import save_result

# Configure logging when module is imported
app_config.configure_logging()


def _atomic_write(path: Path, writer: Callable[[Path], None]) -> Path:
    """Calls writer on a temporary sibling of path, then renames it into place."""
    tmp = path.with_name(f".{path.name}.tmp")
    try:
        writer(tmp)
        os.replace(tmp, path)
    except BaseException:
        tmp.unlink(missing_ok=True)
        raise
    logger.info(f"Wrote {path}")
    return path


def results_frame(result: ExperimentResult) -> pd.DataFrame:
    """Per-seed rows followed by aggregate rows, told apart by the agg column."""
    rows = result.rows.assign(agg=False)
    if result.aggregates.empty:
        return rows
    return pd.concat([rows, result.aggregates.assign(agg=True)], ignore_index=True)


def write_csv(frame: pd.DataFrame, path: Path) -> Path:
    return _atomic_write(
        path,
        lambda tmp: frame.to_csv(tmp, index=False, float_format=config.CSV_FLOAT_FORMAT, lineterminator="\n"),
    )


def write_json(result: ExperimentResult, path: Path) -> Path:
    def writer(tmp: Path):
        with open(tmp, "w", encoding="utf-8", newline="\n") as f:
            json.dump(result.to_summary(), f, indent=2, allow_nan=False)
            f.write("\n")

    return _atomic_write(path, writer)


def _dat(path: Path, columns: Dict[str, Iterable], fmt: str = config.DAT_FLOAT_FORMAT) -> Path:
    data = np.column_stack([np.asarray(list(v), dtype=float) for v in columns.values()])
    header = " ".join(columns)
    return _atomic_write(path, lambda tmp: np.savetxt(tmp, data, fmt=fmt, header=header))


def _profile_dat(profiles: pd.DataFrame, base: Path) -> List[Path]:
    written = []
    for p2, group in profiles.groupby("p2", sort=False):
        written.append(_dat(base.with_name(f"{base.name}_p2_{p2:g}.dat"), {"p1": group["p1"], "profit": group["profit"]}))
    return written


def write_plot_data(result: ExperimentResult, base: Path) -> List[Path]:
    """Figure-ready whitespace columns: x y, or x y err where seeds give a spread."""
    kind, agg = result.kind, result.aggregates
    dat = base.with_name(f"{base.name}.dat")
    written = []

    if kind is ExperimentKind.TWO_FIRM_SWEEP:
        for n_side, group in agg.groupby("n_side", sort=False):
            path = base.with_name(f"{base.name}_N{n_side}.dat")
            written.append(_dat(path, {"d": group["d"], "profit": group["mean"], "std": group["std"].fillna(0.0)}))
        nash = agg.drop_duplicates("d")
        written.append(_dat(base.with_name(f"{base.name}_theory.dat"), {"d": nash["d"], "x_star": nash["x_star"]}))
    elif kind is ExperimentKind.VARIANCE_SCALING:
        written.append(_dat(dat, {"N": agg["n_side"], "variance": agg["mean"], "std": agg["std"].fillna(0.0)}))
    elif kind is ExperimentKind.MULTI_FIRM_SWEEP:
        written.append(_dat(dat, {"m": agg["m"], "profit": agg["mean"], "std": agg["std"].fillna(0.0)}))
        written.append(_dat(base.with_name(f"{base.name}_theory.dat"), {"m": agg["m"], "predicted": agg["predicted"]}))
    elif kind is ExperimentKind.GAMMA_SWEEP:
        table = result.tables["exponents"]
        written.append(_dat(dat, {"gamma": table["gamma"], "B": table["B"], "se_B": table["se_B"]}))
    elif kind is ExperimentKind.NASH_TABLE:
        rows = result.rows
        written.append(_dat(dat, {"d": rows["d"], "x_star": rows["x_star"], "p_star": rows["p_star"]}))
    elif kind is ExperimentKind.NON_PBC_DEMO:
        rows = result.rows
        written.append(_dat(dat, {"step": rows["step"], "price_0": rows["price_0"], "price_1": rows["price_1"]}))
        written.extend(_profile_dat(result.profiles, base))
    elif kind is ExperimentKind.PROFIT_PROFILE:
        written.extend(_profile_dat(result.profiles, base))
    elif kind is ExperimentKind.ASSIGN_MAP:
        for boundary, grid in result.grids.items():
            path = base.with_name(f"{base.name}_{boundary}.dat")
            # row i holds customers x_i, columns run over y_j
            written.append(_atomic_write(path, lambda tmp, g=grid: np.savetxt(tmp, g, fmt="%d")))
    return written


def write_svg(result: ExperimentResult, path: Path) -> Path:
    return _atomic_write(path, lambda tmp: render_figure(result, tmp, fmt="svg"))


def emit_results(
    result: ExperimentResult,
    formats: Iterable[str] = config.DEFAULT_FORMATS,
    out_dir: Optional[Path] = None,
    timestamp: Optional[str] = None,
) -> List[Path]:
    """
    Writes every requested format for result and returns the paths written.

    Files are named <subcommand>_<timestamp>.<ext>. Each file appears only
    once it is complete; a failure leaves no partial file behind. The "db"
    format records the run in the local registry instead of writing a file.
    """
    formats = set(formats)
    unknown = formats - set(config.FORMATS)
    if unknown:
        raise ValueError(f"Unknown output formats: {sorted(unknown)}.")

    out_dir = Path(out_dir or app_config.OUT_DIR)
    out_dir.mkdir(parents=True, exist_ok=True)
    timestamp = timestamp or datetime.now().strftime(config.TIMESTAMP_FORMAT)
    base = out_dir / f"{result.kind.subcommand}_{timestamp}"

    written = []
    if "csv" in formats:
        written.append(write_csv(results_frame(result), base.with_name(f"{base.name}.csv")))
        for name, table in result.tables.items():
            written.append(write_csv(table, base.with_name(f"{base.name}_{name}.csv")))
    if "json" in formats:
        written.append(write_json(result, base.with_name(f"{base.name}.json")))
    if "dat" in formats:
        written.extend(write_plot_data(result, base))
    if "svg" in formats:
        written.append(write_svg(result, base.with_name(f"{base.name}.svg")))
    if "db" in formats:
        save_result(result)
    return written
