import typer

from aknot.core.config_utils import META, coerce_value, get_active_config, load_config, save_config
from aknot.core.formatter import colorize


def set(
    key: str,
    value: str,
    name: str = typer.Option(None, "--name", "-n", help="Target config block"),
):
    """Set a configuration key-value pair."""
    config = load_config()
    if name is None:
        name = get_active_config(config)

    if name == META:
        typer.echo(colorize("Cannot modify 'meta' block. It is reserved for internal use.", "neg"))
        raise typer.Exit(code=1)

    if name not in config:
        typer.echo(f"Config '{name}' not found. Use 'list' to view available configs.")
        raise typer.Exit(code=1)

    try:
        coerce_value(key, value)
    except ValueError as err:
        typer.echo(colorize(f"❌ {err}", "neg"))
        raise typer.Exit(code=2)

    section = config[name]
    is_update = key in section
    section[key] = value
    save_config(config)
    typer.echo(f"{'Config updated' if is_update else 'Config added'} in '{name}': {key}={value}")
