from pathlib import Path

from typer.testing import CliRunner

from aknot.cli import app as main_cli_app
from aknot.commands.conftest import create_config_file_manually


def test_list_sections(runner: CliRunner, isolated_config_file: Path):
    create_config_file_manually(
        isolated_config_file,
        {"default": {"seed": "0"}, "fast": {"seed": "1"}, "meta": {"active_config": "fast"}},
    )
    result = runner.invoke(main_cli_app, ["config", "list"])
    assert result.exit_code == 0
    assert "default" in result.stdout
    assert "Active configuration: fast" in result.stdout
    assert "meta\n" not in result.stdout


def test_list_named(runner: CliRunner, isolated_config_file: Path):
    create_config_file_manually(
        isolated_config_file, {"default": {"seed": "0"}, "meta": {"active_config": "default"}}
    )
    result = runner.invoke(main_cli_app, ["config", "list", "--name", "default"])
    assert "Configuration for 'default':" in result.stdout
    assert "seed = 0" in result.stdout


def test_list_empty(runner: CliRunner, isolated_config_file: Path):
    result = runner.invoke(main_cli_app, ["config", "list"])
    assert "No configuration found." in result.stdout


def test_list_missing(runner: CliRunner, isolated_config_file: Path):
    result = runner.invoke(main_cli_app, ["config", "list", "--name", "nope"])
    assert "Config 'nope' not found." in result.stdout
