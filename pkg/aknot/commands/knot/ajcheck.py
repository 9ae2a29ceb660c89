from pathlib import Path

import typer

from aknot.core.display import display_ajcheck
from aknot.core.errors import InputError
from aknot.core.jobs import run_ajcheck

from .common import (
    BRAID,
    BUDGET,
    CACHE_DIR,
    DT,
    JSON,
    NAME,
    NO_CACHE,
    PD,
    SEED,
    STRATEGY,
    TOL,
    VERBOSE,
    build_job,
    emit,
    fail,
    open_cache,
    run_cached,
)


def ajcheck(
    operator_file: Path = typer.Option(
        ..., "--operator-file", "-o", help="Operator as text, e.g. 'Q^3*E + 1', or as JSON"
    ),
    dt: str = DT,
    pd: str = PD,
    braid: str = BRAID,
    name: str = NAME,
    strategy: str = STRATEGY,
    budget_seconds: float = BUDGET,
    seed: int = SEED,
    tol: float = TOL,
    cache_dir: str = CACHE_DIR,
    no_cache: bool = NO_CACHE,
    as_json: bool = JSON,
    verbose: bool = VERBOSE,
):
    """Specialize an operator at q = 1 and compare it with the knot's A-polynomial."""
    job = build_job(dt, pd, braid, name, strategy, budget_seconds, seed, tol)
    try:
        operator_text = operator_file.read_text(encoding="utf-8")
    except OSError as err:
        fail(InputError(f"Cannot read operator file: {err}"))
    text = run_cached(
        "ajcheck",
        job,
        {"operator": " ".join(operator_text.split())},
        lambda: run_ajcheck(job, operator_text, verbose=verbose),
        open_cache(cache_dir, no_cache, verbose),
    )
    emit(text, as_json, display_ajcheck)
