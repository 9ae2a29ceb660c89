import typer

from aknot.core.config_utils import resolve_option
from aknot.core.display import display_su2scan
from aknot.core.errors import AknotError, InputError
from aknot.core.jobs import run_su2scan
from aknot.core.knotio import FillingSpec
from aknot.core.su2 import default_fillings

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


def parse_fillings(text):
    """Comma separated ``p/q`` slopes; None gives the default list."""
    if text is None:
        return default_fillings()
    fillings = [FillingSpec.parse(part) for part in text.split(",") if part.strip()]
    if not fillings:
        raise InputError("No filling slopes given")
    return fillings


def su2scan(
    dt: str = DT,
    pd: str = PD,
    braid: str = BRAID,
    name: str = NAME,
    fillings: str = typer.Option(
        None, "--fillings", "-f", help="Comma separated slopes p/q, e.g. '1/1,1/2'"
    ),
    attempts: int = typer.Option(None, "--attempts", "-a", help="Random starts per filling"),
    with_apoly: bool = typer.Option(
        False, "--with-apoly", help="Also compute the A-polynomial and score each boundary point"
    ),
    strategy: str = STRATEGY,
    budget_seconds: float = BUDGET,
    seed: int = SEED,
    tol: float = TOL,
    cache_dir: str = CACHE_DIR,
    no_cache: bool = NO_CACHE,
    as_json: bool = JSON,
    verbose: bool = VERBOSE,
):
    """Search SU(2) representations of Dehn fillings and compare their boundary points."""
    job = build_job(dt, pd, braid, name, strategy, budget_seconds, seed, tol)
    try:
        slopes = parse_fillings(fillings)
    except AknotError as err:
        fail(err)
    attempts = resolve_option("attempts", attempts)
    if attempts < 1:
        fail(InputError("--attempts must be at least 1"))
    text = run_cached(
        "su2scan",
        job,
        {"fillings": [str(s) for s in slopes], "attempts": attempts, "with_apoly": with_apoly},
        lambda: run_su2scan(job, slopes, attempts, with_apoly=with_apoly, verbose=verbose),
        open_cache(cache_dir, no_cache, verbose),
    )
    emit(text, as_json, display_su2scan)
