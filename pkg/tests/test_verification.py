"""
Tests for the built-in property suites.
"""
import pytest
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent.parent / 'src'))

from config import get_config
from utils import verification
from utils.validation import RamificationError, ValidationError
from utils.verification import SuiteResult, default_cases, run_suite, run_suites


class TestSuiteResult:
    """Test SuiteResult bookkeeping."""

    def test_check(self):
        """Failed checks are recorded with their description."""
        result = SuiteResult("demo")
        result.check(True, "fine")
        result.check(False, "broken")

        assert result.cases == 2
        assert result.failures == ["broken"]
        assert result.passed is False

    def test_to_dict_caps_failures(self):
        """At most five failure descriptions are reported."""
        result = SuiteResult("demo")
        for k in range(8):
            result.check(False, f"case {k}")
        summary = result.to_dict()

        assert summary["failed"] == 8
        assert len(summary["failures"]) == 5
        assert summary["error"] is None


class TestRunSuite:
    """Test run_suite and run_suites."""

    @pytest.mark.parametrize("name", ["artin_hasse", "dimensions", "filtration", "structure"])
    def test_cheap_suites_pass(self, name):
        """Suites with fixed inputs pass."""
        result = run_suite(name, cases=2)

        assert result.error is None
        assert result.passed, result.failures

    @pytest.mark.parametrize("name", ["witt_laws", "kummer", "lattice"])
    def test_random_suites_pass(self, name):
        """Seeded random suites pass on a few cases."""
        result = run_suite(name, cases=3, seed=11)
        assert result.passed, result.error or result.failures

    def test_units_run_per_level(self):
        """The units suite checks `cases` units for every (p, n) pair."""
        with get_config().override("verify", unit_max_level=4):
            result = run_suite("units", cases=2, seed=3)

        assert result.passed, result.error or result.failures
        # 3 primes x levels 2..4 x 2 units x 3 checks
        assert result.cases == 3 * 3 * 2 * 3

    def test_witt_laws_exhaustive_by_default(self):
        """cases = 0 walks the whole integer grid and the small field grids."""
        with get_config().override("verify", witt_component_range=1):
            result = run_suite("witt_laws", cases=0)

        assert result.passed, result.error or result.failures
        integer_checks = 2 * 2 * (3 ** 2 + 3 ** 4 + 3 ** 6)
        # exhaustive: F_2, F_4 (m <= 2), F_3, F_9 (m = 1); 50 samples otherwise
        field_pairs = (4 + 16 + 64) + (16 + 256 + 50) + (9 + 81 + 729) + (81 + 50 + 50)
        assert result.cases == integer_checks + 2 * field_pairs

    def test_witt_laws_default_is_exhaustive(self):
        """The configured default for witt_laws asks for the exhaustive grid."""
        assert default_cases("witt_laws") == 0

    def test_symbols_cover_length_three(self, monkeypatch):
        """Bilinearity is checked on Witt vectors up to length 3."""
        lengths = set()
        original = verification.SuiteResult.check

        def recording(self, condition, description):
            if description.startswith("additivity in f"):
                lengths.add(int(description.rsplit("m=", 1)[1]))
            return original(self, condition, description)

        monkeypatch.setattr(verification.SuiteResult, "check", recording)
        run_suite("symbols", cases=1, seed=2)

        assert lengths == {1, 2, 3}

    def test_reproducible(self):
        """The same seed checks the same cases."""
        with get_config().override("verify", unit_max_level=5):
            first = run_suite("units", cases=2, seed=5).to_dict()
            second = run_suite("units", cases=2, seed=5).to_dict()
        assert first == second

    def test_errors_are_recorded(self, monkeypatch):
        """A domain error aborts the suite without raising."""
        def broken(result, cases, rng):
            raise RamificationError("broken suite")

        monkeypatch.setitem(verification.SUITES, "broken", broken)
        result = run_suite("broken", cases=1)

        assert result.passed is False
        assert result.error == "RamificationError: broken suite"

    def test_unknown_suite(self):
        """Unknown names are rejected."""
        with pytest.raises(ValidationError):
            run_suite("nope")
        with pytest.raises(ValidationError):
            run_suites(["dimensions", "nope"])

    def test_run_suites_order(self):
        """Results come back in name order."""
        results = run_suites(["structure", "artin_hasse", "dimensions"], cases=1, max_workers=3)
        assert [r.name for r in results] == ["artin_hasse", "dimensions", "structure"]

    def test_default_cases(self):
        """Defaults come from the verify configuration."""
        assert default_cases("units") == get_config().verify.unit_cases
        assert default_cases("artin_hasse") == 1
