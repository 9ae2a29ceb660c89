import typer

from aknot.core.config_utils import OPTIONS, builtin_default, get_active_config, load_config


def get(
    key: str, name: str = typer.Option(None, "--name", "-n", help="Target config block")
):
    """Get a configuration value; unset keys show their built-in default."""
    config = load_config()
    if name is None:
        name = get_active_config(config)

    if name in config and key in config[name]:
        typer.echo(config[name][key])
    elif key in OPTIONS:
        typer.echo(f"{builtin_default(key)} (built-in default)")
    else:
        typer.echo(f"Key '{key}' not found in config '{name}'.")
        raise typer.Exit(code=1)
