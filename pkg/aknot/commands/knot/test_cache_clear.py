from pathlib import Path

from typer.testing import CliRunner

from aknot.cli import app as main_cli_app
from aknot.core.cache import ResultCache


def test_cache_clear(runner: CliRunner, tmp_path: Path):
    cache = ResultCache(tmp_path / "cache")
    cache.store("a", "{}")
    result = runner.invoke(main_cli_app, ["cache-clear", "--cache-dir", str(tmp_path / "cache")])
    assert result.exit_code == 0
    assert "Removed 1 cached results" in result.stdout
    assert cache.load("a") is None


def test_cache_clear_default_dir(runner: CliRunner, isolated_config_file: Path):
    cache = ResultCache(isolated_config_file.parent / "cache")
    cache.store("a", "{}")
    result = runner.invoke(main_cli_app, ["cache-clear"])
    assert result.exit_code == 0
    assert cache.load("a") is None
