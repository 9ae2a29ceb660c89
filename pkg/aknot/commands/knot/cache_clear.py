import typer

from aknot.core.cache import ResultCache
from aknot.core.config_utils import resolve_option
from aknot.core.formatter import colorize

from .common import CACHE_DIR


def cache_clear(cache_dir: str = CACHE_DIR):
    """Delete every cached result."""
    cache = ResultCache(resolve_option("cache_dir", cache_dir))
    removed = cache.clear()
    typer.echo(colorize(f"Removed {removed} cached results from {cache.directory}", "pos"))
