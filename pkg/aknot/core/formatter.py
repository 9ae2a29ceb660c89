import json
import re
from fractions import Fraction

import typer
from colorama import Fore, Style


def strip_ansi(text):
    # Regex to remove all ANSI escape sequences (including color codes)
    ansi_escape = re.compile(r"\x1B(?:[@-Z\\-_]|\[[0-?]*[ -/]*[@-~])")
    if isinstance(text, str):
        return ansi_escape.sub("", text)
    return text


def colorize(text, how=None):
    if how == "pos":
        return f"{Fore.GREEN}{text}{Style.RESET_ALL}"
    elif how == "neg":
        return f"{Fore.RED}{text}{Style.RESET_ALL}"
    elif how == "neu":
        return f"{Fore.YELLOW}{text}{Style.RESET_ALL}"
    elif how == "head":
        return f"{Fore.MAGENTA}{text}{Style.RESET_ALL}"
    elif how == "info":
        return f"{Fore.CYAN}{text}{Style.RESET_ALL}"
    else:
        return f"{Fore.BLUE}{text}{Style.RESET_ALL}"


def get_coloured(table_content=None, header=None):
    """Color table headers magenta, or the first column of each row blue."""
    if header is not None:
        return [colorize(h, "head") for h in header]
    return [[colorize(row[0])] + list(row[1:]) for row in table_content or []]


def say(message, verbose=True, how="info"):
    """Progress line on stderr; stdout is reserved for machine output."""
    if verbose:
        typer.echo(colorize(message, how), err=True)


def format_float(x):
    """Shortest decimal string that round-trips the float."""
    return repr(float(x))


def format_complex(z):
    z = complex(z)
    return [format_float(z.real), format_float(z.imag)]


def format_rational(value):
    """Rationals as ``"p/q"`` (always with a denominator), infinity as ``"inf"``."""
    if value is None or value == float("inf"):
        return "inf"
    value = Fraction(value)
    return f"{value.numerator}/{value.denominator}"


def format_to_json(data):
    """Deterministic JSON text; the same data always gives the same bytes."""
    return json.dumps(data, indent=2, sort_keys=False, ensure_ascii=False)
