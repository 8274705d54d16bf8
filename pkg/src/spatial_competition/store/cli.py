"""Command-line interface for the run registry."""

import json

import pandas as pd
from loguru import logger

from . import models, query


def add_subparsers(subparsers):
    """Add subparsers for run registry commands."""
    subparsers.add_parser("list", help="List recorded runs.")

    parser_show = subparsers.add_parser("show", help="Show the spec, fits and aggregates of a run.")
    parser_show.add_argument("run_id", type=int, help="Run id as printed by 'runs list'.")
    parser_show.add_argument("--rows", action="store_true", help="Print the per-seed rows as well.")

    subparsers.add_parser("clear", help="Clear the run registry.")
    subparsers.add_parser("migrate", help="Create the registry tables if they don't exist.")


def main(args):
    if args.subcommand == "list":
        models.create_tables()
        session = models.get_session()
        try:
            df = query.list_runs(session)
            print("No recorded runs." if df.empty else df.to_string(index=False))
        finally:
            session.close()
    elif args.subcommand == "show":
        models.create_tables()
        session = models.get_session()
        try:
            run = query.get_run(session, args.run_id)
            print(f"--- Run {run.id}: {run.kind} ({run.created_at}) ---")
            print(json.dumps({"spec": run.spec_json, "fits": run.fits_json}, indent=2))
            with pd.option_context("display.width", 160, "display.max_columns", None):
                print(query.get_run_rows(session, run.id, agg=True).to_string(index=False))
                if args.rows:
                    print(query.get_run_rows(session, run.id).to_string(index=False))
        finally:
            session.close()
    elif args.subcommand == "clear":
        logger.info("Clearing the run registry...")
        models.drop_tables()
        logger.info("Run registry cleared.")
    elif args.subcommand == "migrate":
        logger.info("Creating registry tables if they don't exist...")
        models.create_tables()
        logger.info("Registry tables checked/created.")
