"""Tests for core formatter module."""

import json
from fractions import Fraction
from unittest.mock import patch

from aknot.core.formatter import (
    colorize,
    format_complex,
    format_float,
    format_rational,
    format_to_json,
    get_coloured,
    say,
    strip_ansi,
)


class TestFormatterFunctions:
    """Test suite for formatter utility functions."""

    def test_colorize_function(self):
        """Test colorize function with different options."""
        text = "test_text"

        result = colorize(text, "pos")
        assert "\033[32m" in result  # Green
        assert "test_text" in result
        assert "\033[0m" in result  # Reset

        assert "\033[31m" in colorize(text, "neg")  # Red
        assert "\033[33m" in colorize(text, "neu")  # Yellow
        assert "\033[35m" in colorize(text, "head")  # Magenta
        assert "\033[36m" in colorize(text, "info")  # Cyan
        assert "\033[34m" in colorize(text)  # Blue

    def test_strip_ansi(self):
        """Color codes are removed; non-strings pass through."""
        assert strip_ansi(colorize("L - 1", "pos")) == "L - 1"
        assert strip_ansi(3) == 3

    def test_get_coloured(self):
        """Headers go magenta, first columns blue."""
        headers = get_coloured(header=["Factor", "Kind"])
        assert all("\033[35m" in h for h in headers)
        rows = get_coloured([["L - 1", 1]])
        assert "\033[34m" in rows[0][0]
        assert rows[0][1] == 1
        assert get_coloured() == []

    @patch("aknot.core.formatter.typer.echo")
    def test_say(self, mock_echo):
        """Progress goes to stderr only when verbose."""
        say("Reducing", verbose=False)
        mock_echo.assert_not_called()
        say("Reducing")
        args, kwargs = mock_echo.call_args
        assert "Reducing" in args[0]
        assert kwargs == {"err": True}


class TestNumberFormatting:
    """Test suite for exact decimal output."""

    def test_float_round_trips(self):
        """Float strings parse back to the same float."""
        for x in (0.1, 1e-10, -2.5, 1 / 3):
            assert float(format_float(x)) == x

    def test_complex(self):
        """Complex numbers become a pair of strings."""
        assert format_complex(1 - 2j) == ["1.0", "-2.0"]

    def test_rational(self):
        """Rationals always carry a denominator."""
        assert format_rational(Fraction(-6)) == "-6/1"
        assert format_rational(Fraction(3, 2)) == "3/2"
        assert format_rational(float("inf")) == "inf"
        assert format_rational(None) == "inf"

    def test_json_deterministic(self):
        """Equal data gives equal bytes, key order preserved."""
        data = {"b": ["1/2"], "a": "é"}
        assert format_to_json(data) == format_to_json(dict(data))
        assert json.loads(format_to_json(data)) == data
        assert format_to_json(data).index('"b"') < format_to_json(data).index('"a"')
        assert "é" in format_to_json(data)
