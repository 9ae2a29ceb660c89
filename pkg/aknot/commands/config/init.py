import typer

from aknot.core.config_utils import (
    META,
    default_block,
    load_config,
    prepend_warning_to_config,
    save_config,
    set_active_config,
)


def init(
    name: str = typer.Option(
        None, "--name", "-n", help="Name of a new block (prompted when blocks exist)"
    )
):
    """Create the default block, or add a named block with built-in defaults."""
    config = load_config()

    if META not in config:
        config[META] = {}

    if not [sec for sec in config.sections() if sec != META]:
        typer.echo(
            "Config file does not exist or contains no blocks. Creating default configuration."
        )
        config[name or "default"] = default_block()
        set_active_config(config, name or "default")
        save_config(config)
        typer.echo(f"Configuration '{name or 'default'}' set and active.")
    else:
        typer.echo("Config file already exists. Adding a new configuration block.")
        if name is None:
            name = typer.prompt("Enter a new config name")

        if name == META or name in config:
            typer.echo(
                f"Config name '{name}' already exists or is reserved. Please choose a different name."
            )
            raise typer.Exit(code=1)

        config[name] = default_block()
        save_config(config)
        typer.echo(f"New configuration block '{name}' added.")

    prepend_warning_to_config()
