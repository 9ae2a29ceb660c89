import json

import typer

from aknot.core.cache import ResultCache, cache_key
from aknot.core.config_utils import resolve_option
from aknot.core.errors import AknotError, EliminationTimeout, InputError
from aknot.core.formatter import colorize, format_to_json
from aknot.core.jobs import KnotJob
from aknot.core.knotio import canonical_code

DT = typer.Option(None, "--dt", help="Dowker-Thistlethwaite code, e.g. '4 6 2'; '' is the unknot")
PD = typer.Option(None, "--pd", help="Planar diagram code, e.g. 'X[1,5,2,4], X[3,1,4,6], X[5,3,6,2]'")
BRAID = typer.Option(None, "--braid", help="Braid word of signed generator indices, e.g. '1 1 1'")
NAME = typer.Option(None, "--name", "-n", help="Label for the knot in reports")
STRATEGY = typer.Option(
    None, "--strategy", help="Elimination strategy: auto, resultant_tower or groebner"
)
BUDGET = typer.Option(None, "--budget-seconds", "-b", help="Time budget for elimination")
SEED = typer.Option(None, "--seed", help="Seed for every random choice")
TOL = typer.Option(None, "--tol", help="Residual tolerance of numerical solves")
CACHE_DIR = typer.Option(None, "--cache-dir", help="Result cache directory")
NO_CACHE = typer.Option(False, "--no-cache", help="Neither read nor write the cache")
JSON = typer.Option(True, "--json/--pretty", help="JSON on stdout, or grid tables")
VERBOSE = typer.Option(False, "--verbose", "-v", help="Stage-by-stage progress on stderr")


def fail(err):
    """Report a domain error and exit with its code; timeouts print the partial report first."""
    if isinstance(err, EliminationTimeout):
        typer.echo(format_to_json({"status": "timeout", "stage": err.stage, **err.partial}))
    typer.echo(colorize(f"❌ {type(err).__name__}: {err}", "neg"), err=True)
    raise typer.Exit(code=err.exit_code)


def build_job(dt, pd, braid, name=None, strategy=None, budget_seconds=None, seed=None, tol=None):
    """Exactly one diagram code plus options resolved as flag, config block, default."""
    given = [(fmt, code) for fmt, code in (("dt", dt), ("pd", pd), ("braid", braid)) if code is not None]
    if len(given) != 1:
        fail(InputError("Give exactly one of --dt, --pd or --braid"))
    (fmt, code), = given
    try:
        return KnotJob(
            name=name or f"{fmt}:{canonical_code(fmt, code)}",
            fmt=fmt,
            code=code,
            strategy=resolve_option("strategy", strategy),
            budget_seconds=float(resolve_option("budget_seconds", budget_seconds)),
            seed=resolve_option("seed", seed),
            tol=resolve_option("tol", tol),
            cert_tol=resolve_option("cert_tol"),
            cert_samples=resolve_option("cert_samples"),
        )
    except ValueError as err:
        fail(InputError(f"Bad config value: {err}"))
    except AknotError as err:
        fail(err)


def open_cache(cache_dir, no_cache, verbose=False):
    if no_cache:
        return None
    return ResultCache(resolve_option("cache_dir", cache_dir), verbose=verbose)


def run_cached(command, job, extra, compute, cache):
    """JSON text of the command's report, from the cache when possible.

    ``extra`` holds command-specific options that belong in the cache key.
    """
    key = cache_key(command, job.fmt, job.code, {**job.options(), "name": job.name, **extra})
    if cache is not None:
        text = cache.load(key)
        if text is not None:
            return text
    try:
        text = format_to_json(compute())
    except AknotError as err:
        fail(err)
    if cache is not None:
        cache.store(key, text)
    return text


def emit(text, as_json, display):
    if as_json:
        typer.echo(text)
    else:
        display(json.loads(text))
