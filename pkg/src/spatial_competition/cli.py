"""Command-line interface for the spatial competition experiments."""

import argparse
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Optional, Tuple

import numpy as np
import pandas as pd
from loguru import logger

from . import config
from .dynamics import Method
from .dynamics import config as dynamics_config
from .experiments import RUNNERS, ExperimentKind, ExperimentSpec, run_experiment
from .experiments import config as experiments_config
from .market import Boundary
from .output import config as output_config
from .output import emit_results
from .store import cli as store_cli

SUBCOMMANDS = {kind.subcommand: kind for kind in ExperimentKind}

# Flag defaults that differ between subcommands; anything not listed falls
# back to the ExperimentSpec default.
SUBCOMMAND_DEFAULTS = {
    ExperimentKind.TWO_FIRM_SWEEP: {"translate": False},
    ExperimentKind.VARIANCE_SCALING: {"d": (0.5,), "n_side": experiments_config.N_VALUES, "translate": False},
    ExperimentKind.MULTI_FIRM_SWEEP: {},
    ExperimentKind.GAMMA_SWEEP: {"gamma": experiments_config.GAMMA_VALUES},
    ExperimentKind.NON_PBC_DEMO: {"d": (experiments_config.DEMO_D,), "boundary": "open"},
    ExperimentKind.NASH_TABLE: {"d": experiments_config.NASH_D_VALUES},
    ExperimentKind.PROFIT_PROFILE: {
        "d": (0.5,),
        "n_side": (experiments_config.PROFILE_N_SIDE,),
        "p2": experiments_config.PROFILE_P2_VALUES,
    },
    ExperimentKind.ASSIGN_MAP: {"n_side": (experiments_config.ASSIGN_MAP_N_SIDE,)},
}

# Kinds whose flag accepts a list; everywhere else it takes a single value.
N_SIDE_SWEEPS = {ExperimentKind.TWO_FIRM_SWEEP, ExperimentKind.VARIANCE_SCALING}
GAMMA_SWEEPS = {ExperimentKind.GAMMA_SWEEP}

EXAMPLES = {
    "two-firm": "hotelling two-firm --d 0.1,0.2,0.3,0.4,0.5 --n-side 20,40,80",
    "variance-scaling": "hotelling variance-scaling --n-side 10,20,40,80,160 --seeds 0:9:10",
    "multi-firm": "hotelling multi-firm --m 8,16,32,64 --gamma 1 --fit-min-m 8 --jobs 4",
    "gamma-sweep": "hotelling gamma-sweep --gamma 0.5:2:4 --m 8,16,32,64",
    "non-pbc-demo": "hotelling non-pbc-demo --d 0.2 --steps 500 --burn-in 400 --p2 0.65,0.71",
    "nash-table": "hotelling nash-table --d 0.05:0.5:10",
    "profit-profile": "hotelling profit-profile --n-side 10 --p2 0.2,0.4,0.6,0.8",
    "assign-map": "hotelling assign-map --firm 0.2,0.5,0.8 --firm 0.5,0.5,1.0 --formats dat,svg",
}


@dataclass(frozen=True)
class CliInvocation:
    command: str
    spec: Optional[ExperimentSpec]
    formats: Tuple[str, ...]
    out_dir: Path
    args: argparse.Namespace


def _values(text: str) -> List[float]:
    """Comma-separated numbers; an item start:stop:count expands to an even range."""
    values = []
    for item in text.split(","):
        item = item.strip()
        if not item:
            continue
        if ":" in item:
            parts = item.split(":")
            if len(parts) != 3:
                raise argparse.ArgumentTypeError(f"range {item!r} must look like start:stop:count")
            start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
            if count < 1:
                raise argparse.ArgumentTypeError(f"range {item!r} needs a positive count")
            values.extend(round(float(v), 12) for v in np.linspace(start, stop, count))
        else:
            values.append(float(item))
    if not values:
        raise argparse.ArgumentTypeError("expected at least one value")
    return values


def float_list(text: str) -> Tuple[float, ...]:
    try:
        return tuple(_values(text))
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e))


def int_list(text: str) -> Tuple[int, ...]:
    values = float_list(text)
    if any(v != int(v) for v in values):
        raise argparse.ArgumentTypeError(f"expected integers, got {text!r}")
    return tuple(int(v) for v in values)


def firm_triple(text: str) -> Tuple[float, float, float]:
    parts = text.split(",")
    try:
        x, y, price = (float(p) for p in parts)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected x,y,price, got {text!r}")
    if price < 0:
        raise argparse.ArgumentTypeError(f"price must be non-negative, got {price}")
    return x, y, price


def format_list(text: str) -> Tuple[str, ...]:
    formats = tuple(f.strip() for f in text.split(",") if f.strip())
    unknown = [f for f in formats if f not in output_config.FORMATS]
    if unknown or not formats:
        raise argparse.ArgumentTypeError(f"choose from {','.join(output_config.FORMATS)}, got {text!r}")
    return formats


def add_experiment_arguments(parser: argparse.ArgumentParser):
    """Flags shared by every experiment subcommand."""
    market = parser.add_argument_group("market")
    market.add_argument("--d", type=float_list, help="Firm distance(s) for two-firm kinds.")
    market.add_argument("--n-side", type=int_list, help="Customers per lattice side (a list for two-firm and variance-scaling).")
    market.add_argument("--m", type=int_list, help="Numbers of firms for multi-firm kinds.")
    market.add_argument("--r", type=float, default=experiments_config.R, help="Transport cost scale.")
    market.add_argument("--gamma", type=float_list, help="Transport cost exponent (a list for gamma-sweep).")
    market.add_argument("--boundary", choices=[b.value for b in Boundary], help="Boundary condition.")
    market.add_argument("--firm", type=firm_triple, action="append", help="x,y,price of one firm (assign-map; repeatable).")

    dynamics = parser.add_argument_group("dynamics")
    dynamics.add_argument("--steps", type=int, help="Optimization steps per run.")
    dynamics.add_argument("--burn-in", type=int, help="Steps discarded before tail statistics.")
    dynamics.add_argument("--initial-price", type=float, help="Starting price of every firm.")
    dynamics.add_argument("--method", choices=[m.value for m in Method], help="Best-response method.")
    dynamics.add_argument("--grid-points", type=int, help="Price grid size for the grid method.")
    dynamics.add_argument("--price-max", type=float, help="Upper end of the price grid and of profiles.")
    dynamics.add_argument("--epsilon", type=float, help="Undercut margin of the exact method.")
    dynamics.add_argument("--p2", type=float_list, help="Competitor prices for profit profiles.")

    sweep = parser.add_argument_group("sweep")
    sweep.add_argument("--seeds", type=int_list, help="RNG seeds, e.g. 0:19:20 (default 0..19).")
    sweep.add_argument("--fit-min-m", type=int, help="Smallest m entering the power-law fit.")
    sweep.add_argument(
        "--translate",
        action=argparse.BooleanOptionalAction,
        default=None,
        help="Shift the two-firm pair by a seeded whole-lattice offset per seed.",
    )
    sweep.add_argument("--jobs", type=int, default=None, help="Parallel worker processes.")

    out = parser.add_argument_group("output")
    out.add_argument("--out-dir", type=Path, default=None, help="Directory for result files.")
    out.add_argument(
        "--formats",
        type=format_list,
        default=output_config.DEFAULT_FORMATS,
        help=f"Comma-separated subset of {','.join(output_config.FORMATS)}.",
    )


def build_parser() -> Tuple[argparse.ArgumentParser, Dict[str, argparse.ArgumentParser]]:
    """The top-level parser and the experiment subparsers by name."""
    parser = argparse.ArgumentParser(prog="hotelling", description="Spatial Bertrand-Hotelling competition tools")
    subparsers = parser.add_subparsers(dest="command", help="Experiment to run")

    experiment_parsers = {}
    for name, kind in SUBCOMMANDS.items():
        runner = RUNNERS[kind]
        sub = subparsers.add_parser(
            name,
            help=runner.__doc__.splitlines()[0],
            formatter_class=argparse.RawTextHelpFormatter,
            description=f"{runner.__doc__}\n\nExample:\n  {EXAMPLES[name]}",
        )
        add_experiment_arguments(sub)
        experiment_parsers[name] = sub

    runs_parser = subparsers.add_parser("runs", help="Inspect the local run registry")
    runs_subparsers = runs_parser.add_subparsers(dest="subcommand", help="Run registry commands")
    store_cli.add_subparsers(runs_subparsers)
    return parser, experiment_parsers


def _single(values, flag: str, kind: ExperimentKind):
    if len(values) != 1:
        raise ValueError(f"{flag} takes a single value for {kind.subcommand}")
    return values[0]


def _spec_from_args(args: argparse.Namespace, kind: ExperimentKind) -> ExperimentSpec:
    """Applies subcommand defaults, checks each flag and builds the ExperimentSpec."""
    defaults = SUBCOMMAND_DEFAULTS[kind]

    def pick(name, fallback=None):
        value = getattr(args, name)
        if value is not None:
            return value
        return defaults.get(name, fallback)

    fields = {"kind": kind, "r": args.r}

    d_values = pick("d")
    if d_values is not None:
        if any(not 0.0 < d < 1.0 for d in d_values):
            raise ValueError(f"--d values must lie in (0, 1), got {list(d_values)}")
        fields["d_values"] = d_values

    n_values = pick("n_side")
    if n_values is not None:
        if any(n < 1 for n in n_values):
            raise ValueError(f"--n-side must be positive, got {list(n_values)}")
        if kind in N_SIDE_SWEEPS:
            fields["n_values"] = n_values
        else:
            fields["n_side"] = _single(n_values, "--n-side", kind)
    if kind in N_SIDE_SWEEPS:
        fields["n_side"] = fields.get("n_values", (experiments_config.N_SIDE,))[0]

    if args.m is not None:
        if any(m < 1 for m in args.m):
            raise ValueError(f"--m must be positive, got {list(args.m)}")
        fields["m_values"] = args.m

    gammas = pick("gamma")
    if gammas is not None:
        if any(g <= 0 for g in gammas):
            raise ValueError(f"--gamma must be positive, got {list(gammas)}")
        if kind in GAMMA_SWEEPS:
            fields["gamma_values"] = gammas
        else:
            fields["gamma"] = _single(gammas, "--gamma", kind)

    if args.r <= 0:
        raise ValueError(f"--r must be positive, got {args.r}")

    boundary = pick("boundary")
    if boundary is not None:
        if kind is ExperimentKind.NON_PBC_DEMO and boundary != Boundary.OPEN.value:
            raise ValueError("--boundary must be open for non-pbc-demo")
        fields["boundary"] = boundary

    steps = args.steps if args.steps is not None else dynamics_config.STEPS
    burn_in = args.burn_in if args.burn_in is not None else dynamics_config.BURN_IN
    if steps < 1:
        raise ValueError(f"--steps must be positive, got {steps}")
    if burn_in < 0:
        raise ValueError(f"--burn-in must be non-negative, got {burn_in}")
    if burn_in >= steps:
        raise ValueError("burn-in must be < steps")
    fields.update(steps=steps, burn_in=burn_in)

    for name in ("initial_price", "method", "grid_points", "price_max", "epsilon", "fit_min_m"):
        value = getattr(args, name)
        if value is not None:
            fields[name] = value
    if args.initial_price is not None and args.initial_price < 0:
        raise ValueError(f"--initial-price must be non-negative, got {args.initial_price}")
    if args.epsilon is not None and args.epsilon <= 0:
        raise ValueError(f"--epsilon must be positive, got {args.epsilon}")

    p2 = pick("p2")
    if p2 is not None:
        if any(p < 0 for p in p2):
            raise ValueError(f"--p2 must be non-negative, got {list(p2)}")
        fields["p2_values"] = p2

    if args.firm is not None:
        if kind is not ExperimentKind.ASSIGN_MAP:
            raise ValueError("--firm only applies to assign-map")
        fields["firms"] = tuple(args.firm)

    if args.seeds is not None:
        if len(set(args.seeds)) != len(args.seeds):
            raise ValueError(f"--seeds must be distinct, got {list(args.seeds)}")
        if any(s < 0 for s in args.seeds):
            raise ValueError(f"--seeds must be non-negative, got {list(args.seeds)}")
        fields["seeds"] = args.seeds

    translate = pick("translate")
    if translate is not None:
        fields["translate"] = translate

    jobs = args.jobs if args.jobs is not None else config.N_JOBS
    if jobs == 0:
        raise ValueError("--jobs must not be 0")
    fields["n_jobs"] = jobs

    return ExperimentSpec(**fields)


def parse_and_validate(argv: Optional[List[str]] = None) -> CliInvocation:
    """
    Parses argv into a fully validated invocation. Problems exit through
    argparse with a usage error naming the flag.
    """
    parser, experiment_parsers = build_parser()
    args = parser.parse_args(argv)
    if args.command is None:
        parser.error("choose a subcommand")

    if args.command == "runs":
        if args.subcommand is None:
            parser.error("runs needs one of: list, show, clear, migrate")
        return CliInvocation(command="runs", spec=None, formats=(), out_dir=config.OUT_DIR, args=args)

    kind = SUBCOMMANDS[args.command]
    try:
        spec = _spec_from_args(args, kind)
    except ValueError as e:
        experiment_parsers[args.command].error(str(e))

    return CliInvocation(
        command=args.command,
        spec=spec,
        formats=tuple(args.formats),
        out_dir=args.out_dir or config.OUT_DIR,
        args=args,
    )


def _print_summary(result):
    frame = result.aggregates if not result.aggregates.empty else result.rows
    with pd.option_context("display.width", 160, "display.max_columns", None, "display.max_rows", 60):
        print(frame.to_string(index=False))
    for name, fit in result.fits.items():
        print(f"{name}: A = {fit.A:.4f} ± {fit.se_A:.4f}, B = {fit.B:.4f} ± {fit.se_B:.4f} ({fit.n_points} points)")
    for name, slope in result.slopes.items():
        print(f"{name}: slope = {slope.slope:.4f} ± {slope.se_slope:.4f}")


def main(argv: Optional[List[str]] = None) -> int:
    try:
        invocation = parse_and_validate(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else 0

    config.configure_logging()
    try:
        if invocation.command == "runs":
            store_cli.main(invocation.args)
            return 0
        result = run_experiment(invocation.spec)
        written = emit_results(result, invocation.formats, invocation.out_dir)
        _print_summary(result)
        for path in written:
            print(path)
    except Exception as e:
        logger.debug(f"{invocation.command} failed: {e!r}")
        message = " ".join(str(e).split()) or type(e).__name__
        print(f"error: {message}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
