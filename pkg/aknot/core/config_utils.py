import configparser
import os
from pathlib import Path

CONFIG_DIR = Path.home() / ".aknot"
CONFIG_FILE = CONFIG_DIR / "config"
CONFIG_ENV = "AKNOT_CONFIG"

META = "meta"

STRATEGY_CHOICES = ("auto", "resultant_tower", "groebner")

# key -> (built-in default, type)
OPTIONS = {
    "strategy": ("auto", str),
    "budget_seconds": (300.0, float),
    "tol": (1e-10, float),
    "cert_tol": (1e-8, float),
    "cert_samples": (4, int),
    "attempts": (200, int),
    "seed": (0, int),
    "workers": (1, int),
    "cache_dir": (None, str),
}


def config_path():
    """The config file in use: ``$AKNOT_CONFIG`` when set, else ``~/.aknot/config``."""
    override = os.environ.get(CONFIG_ENV)
    if override:
        return Path(override).expanduser()
    return CONFIG_FILE


def prepend_warning_to_config():
    """Prepend a warning comment to the config file."""
    path = config_path()
    if os.path.exists(path):
        with open(path, "r+") as config_file:
            content = config_file.read()
            warning_message = (
                "# WARNING: Edit this file with 'aknot config set'. \n"
                "# Values that do not parse make every command fail. \n"
                "# If that happens, delete this file and run 'aknot config init' again.\n"
            )
            config_file.seek(0, 0)
            config_file.write(warning_message + content)


def validate_config(config):
    changed = False
    for section in config.sections():
        keys_to_remove = [k for k, v in config.items(section) if not v.strip()]
        for k in keys_to_remove:
            config.remove_option(section, k)
            changed = True
    if changed:
        save_config(config)


def load_config():
    config = configparser.ConfigParser()
    path = config_path()
    if path.exists():
        config.read(path)
    validate_config(config)
    return config


def save_config(config):
    path = config_path()
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w") as f:
        config.write(f)


def get_active_config(config=None):
    if config is None:
        config = load_config()
    if config.has_section(META) and config.has_option(META, "active_config"):
        return config.get(META, "active_config")
    return "default"


def set_active_config(config, config_name):
    if META not in config:
        config[META] = {}
    config[META]["active_config"] = config_name


def builtin_default(key):
    """Built-in default of ``key``; the cache lives next to the config file."""
    if key == "cache_dir":
        return str(CONFIG_DIR / "cache")
    return OPTIONS[key][0]


def default_block():
    """Built-in defaults as config strings."""
    return {key: str(builtin_default(key)) for key in OPTIONS}


def coerce_value(key, value):
    """Parse a config string for ``key``.

    Raises:
        ValueError: Unknown key, a value of the wrong type, or an
            out-of-range value.
    """
    if key not in OPTIONS:
        raise ValueError(f"Unknown config key '{key}'. Known keys: {', '.join(OPTIONS)}")
    _, kind = OPTIONS[key]
    try:
        parsed = kind(value)
    except (TypeError, ValueError):
        raise ValueError(f"'{value}' is not a valid {kind.__name__} for '{key}'") from None
    if key == "strategy" and parsed not in STRATEGY_CHOICES:
        raise ValueError(f"Strategy must be one of {', '.join(STRATEGY_CHOICES)}")
    if key in ("budget_seconds", "tol", "cert_tol") and not parsed > 0:
        raise ValueError(f"'{key}' must be positive")
    if key in ("cert_samples", "attempts", "workers") and parsed < 1:
        raise ValueError(f"'{key}' must be at least 1")
    return parsed


def resolve_option(name, flag_value=None, config=None):
    """Flag value, else the active config block, else the built-in default."""
    if flag_value is not None:
        return flag_value
    if config is None:
        config = load_config()
    active = get_active_config(config)
    if config.has_section(active) and config.has_option(active, name):
        return coerce_value(name, config.get(active, name))
    return builtin_default(name)
