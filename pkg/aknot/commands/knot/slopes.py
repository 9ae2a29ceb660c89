from aknot.core.display import display_slopes
from aknot.core.jobs import run_slopes

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


def slopes(
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
    """Boundary slopes from the Newton polygon of the A-polynomial."""
    job = build_job(dt, pd, braid, name, strategy, budget_seconds, seed, tol)
    text = run_cached(
        "slopes",
        job,
        {},
        lambda: run_slopes(job, verbose=verbose),
        open_cache(cache_dir, no_cache, verbose),
    )
    emit(text, as_json, display_slopes)
