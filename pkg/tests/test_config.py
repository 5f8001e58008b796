"""
Tests for environment-driven configuration.
"""

import pytest

from psys_oracle.cli import main
from psys_oracle.config import DEFAULT_BUDGET, get_budget
from psys_oracle.exceptions import ConfigurationError
from psys_oracle.search import Budget


class TestBudgetSetting:
    """Test suite for PSYS_BUDGET handling."""

    def test_default(self, monkeypatch):
        """Without PSYS_BUDGET the default node budget applies."""
        monkeypatch.delenv("PSYS_BUDGET", raising=False)
        assert get_budget() == DEFAULT_BUDGET
        assert Budget().limit == DEFAULT_BUDGET

    def test_override(self, monkeypatch):
        """Underscores are accepted as digit separators."""
        monkeypatch.setenv("PSYS_BUDGET", "250_000")
        assert get_budget() == 250_000

    @pytest.mark.parametrize("raw", ["many", "0", "-5"])
    def test_invalid(self, monkeypatch, raw):
        """Non-numeric and non-positive budgets are configuration errors."""
        monkeypatch.setenv("PSYS_BUDGET", raw)
        with pytest.raises(ConfigurationError):
            get_budget()

    def test_cli_rejects_bad_budget(self, monkeypatch, fixtures_dir):
        """The command line reports a bad PSYS_BUDGET as a usage error."""
        monkeypatch.setenv("PSYS_BUDGET", "lots")
        assert main(["validate", str(fixtures_dir / "sys_a.psys")]) == 4
