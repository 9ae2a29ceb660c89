"""Tests for core jobs module."""

import json
from unittest.mock import patch

import pytest

from aknot.core.ajspec import MATCH_UP_TO_ALLOWANCES
from aknot.core.elim import NONTRIVIAL
from aknot.core.errors import EliminationTimeout, InputError, MalformedCode, OperatorParseError
from aknot.core.jobs import (
    KnotJob,
    load_operator,
    run_ajcheck,
    run_apoly,
    run_batch,
    run_slopes,
    run_su2scan,
    summarize,
)
from aknot.core.knotio import FillingSpec

TREFOIL = KnotJob("3_1", "dt", "4 6 2")


class TestKnotJob:
    """Test suite for job validation."""

    def test_options_exclude_input(self):
        """Cache options hold only settings."""
        options = TREFOIL.options()
        assert "code" not in options and "name" not in options
        assert options["strategy"] == "auto"

    @pytest.mark.parametrize(
        "kwargs, error",
        [
            ({"fmt": "gauss"}, MalformedCode),
            ({"strategy": "magic"}, InputError),
            ({"budget_seconds": 0}, InputError),
        ],
    )
    def test_rejects_bad_settings(self, kwargs, error):
        """Unknown formats, strategies and empty budgets are input errors."""
        base = {"name": "k", "fmt": "dt", "code": "4 6 2"}
        with pytest.raises(error):
            KnotJob(**{**base, **kwargs})


class TestRunners:
    """Test suite for the per-command runners."""

    def test_apoly(self):
        """The report carries the input and the verdict."""
        report = run_apoly(TREFOIL)
        assert report["input"]["code"] == "4 6 2"
        assert report["verdict"] == NONTRIVIAL
        assert "system" not in report

    def test_apoly_timeout_partial_has_input(self):
        """Timeouts keep the input in their partial report."""
        err = EliminationTimeout("out", "eliminate", {"branches": []})
        with patch("aknot.core.jobs.compute_apoly", side_effect=err):
            with pytest.raises(EliminationTimeout) as info:
                run_apoly(TREFOIL)
        assert info.value.partial["input"]["name"] == "3_1"
        assert info.value.partial["branches"] == []

    def test_slopes(self):
        """The trefoil nontrivial part has the single slope -6."""
        assert run_slopes(TREFOIL)["nontrivial"]["slopes"] == ["-6/1"]

    def test_su2scan_with_apoly(self):
        """Scored boundary points lie on the A-curve."""
        report = run_su2scan(TREFOIL, [FillingSpec(1, 1)], attempts=40, with_apoly=True)
        (entry,) = report["fillings"]
        assert entry["status"] == "found"
        assert all(float(r) < 1e-6 for r in entry["apoly_residuals"])

    def test_ajcheck(self):
        """The trefoil part without L - 1 matches up to allowances."""
        report = run_ajcheck(TREFOIL, "Q^3*E + 1")
        assert report["verdict"] == MATCH_UP_TO_ALLOWANCES
        assert report["operator"] == str(load_operator("Q^3*E + 1"))

    def test_load_operator(self):
        """Text and JSON forms load the same operator."""
        text = load_operator("E - 1")
        assert load_operator(json.dumps(text.to_json())) == text
        with pytest.raises(InputError):
            load_operator("{not json")
        with pytest.raises(OperatorParseError):
            load_operator('{"terms": [{"E": 1}]}')


class TestBatch:
    """Test suite for the batch runner."""

    def test_sequential(self):
        """Entries keep input order and carry their checks."""
        jobs = [TREFOIL, KnotJob("bad", "dt", "junk")]
        report = run_batch(jobs)
        assert [e["status"] for e in report["jobs"]] == ["ok", "error"]
        assert report["summary"]["finished"] == 1
        assert report["summary"]["theorem_check"] is True

    def test_workers_must_be_positive(self):
        """Zero workers is an input error."""
        with pytest.raises(InputError):
            run_batch([TREFOIL], workers=0)

    def test_summary_flags_failures(self):
        """A finished knot that is not NonTrivial fails the check."""
        entries = [
            {"name": "0_1", "status": "ok", "verdict": "TrivialUnknotLike", "l1_divides": True,
             "symmetric": True},
            {"name": "8_19", "status": "timeout"},
        ]
        summary = summarize(entries)
        assert summary["theorem_check"] is False
        assert summary["failing"] == ["0_1"]
        assert summary["timeouts"] == 1
