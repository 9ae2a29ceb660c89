from pathlib import Path

import typer

from aknot.core.config_utils import resolve_option
from aknot.core.display import display_batch
from aknot.core.errors import AknotError, InputError
from aknot.core.formatter import format_to_json
from aknot.core.jobs import KnotJob, run_batch
from aknot.core.knotio import load_knot_table, parse_knot_table

from .common import BUDGET, JSON, SEED, STRATEGY, TOL, VERBOSE, fail


def batch(
    list_file: Path = typer.Option(
        None, "--list-file", help="File of 'name dt-code' lines; default is the bundled table"
    ),
    names: str = typer.Option(None, "--names", help="Comma separated knot names to run"),
    limit: int = typer.Option(None, "--limit", help="Run at most this many knots"),
    workers: int = typer.Option(None, "--workers", "-w", help="Worker processes"),
    strategy: str = STRATEGY,
    budget_seconds: float = BUDGET,
    seed: int = SEED,
    tol: float = TOL,
    as_json: bool = JSON,
    verbose: bool = VERBOSE,
):
    """Run the A-polynomial pipeline over a knot table and check every finished knot."""
    try:
        table = parse_knot_table(list_file.read_text()) if list_file else load_knot_table()
    except OSError as err:
        fail(InputError(f"Cannot read knot list: {err}"))
    if names:
        wanted = [n.strip() for n in names.split(",") if n.strip()]
        missing = sorted(set(wanted) - {name for name, _ in table})
        if missing:
            fail(InputError(f"Unknown knot names: {', '.join(missing)}"))
        table = [(name, code) for name, code in table if name in wanted]
    if limit is not None:
        if limit < 1:
            fail(InputError("--limit must be at least 1"))
        table = table[:limit]

    try:
        jobs = [
            KnotJob(
                name=name,
                fmt="dt",
                code=code,
                strategy=resolve_option("strategy", strategy),
                budget_seconds=float(resolve_option("budget_seconds", budget_seconds)),
                seed=resolve_option("seed", seed),
                tol=resolve_option("tol", tol),
                cert_tol=resolve_option("cert_tol"),
                cert_samples=resolve_option("cert_samples"),
            )
            for name, code in table
        ]
        report = run_batch(jobs, workers=resolve_option("workers", workers), verbose=verbose)
    except ValueError as err:
        fail(InputError(f"Bad config value: {err}"))
    except AknotError as err:
        fail(err)

    if as_json:
        typer.echo(format_to_json(report))
    else:
        display_batch(report)
