"""Tests for __main__ module."""

import inspect
import runpy
from unittest.mock import patch


class TestMainModule:
    """Test suite for __main__ module functionality."""

    def test_main_module_app_reference(self):
        """The module re-exports the CLI app."""
        import aknot.__main__ as main_module
        from aknot.cli import app as cli_app

        assert main_module.app is cli_app

    def test_main_module_minimal_structure(self):
        """The module imports the app and calls it under a __main__ guard."""
        import aknot.__main__ as main_module

        source = inspect.getsource(main_module)
        assert "from aknot.cli import app" in source
        assert 'if __name__ == "__main__":' in source
        assert source.index('if __name__ == "__main__":') < source.rindex("app()")

    def test_run_as_module(self):
        """python -m aknot runs the app."""
        with patch("aknot.cli.app") as mock_app:
            runpy.run_module("aknot", run_name="__main__")
        mock_app.assert_called_once_with()
