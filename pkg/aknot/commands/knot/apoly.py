import typer

from aknot.core.display import display_apoly
from aknot.core.jobs import run_apoly

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
    open_cache,
    run_cached,
)


def apoly(
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
    dump_system: bool = typer.Option(
        False, "--dump-system", help="Include the polynomial system in the report"
    ),
    as_json: bool = JSON,
    verbose: bool = VERBOSE,
):
    """Compute the A-polynomial of a knot and decide whether it is non-trivial."""
    job = build_job(dt, pd, braid, name, strategy, budget_seconds, seed, tol)
    text = run_cached(
        "apoly",
        job,
        {"dump_system": dump_system},
        lambda: run_apoly(job, verbose=verbose, with_system=dump_system),
        open_cache(cache_dir, no_cache, verbose),
    )
    emit(text, as_json, display_apoly)
