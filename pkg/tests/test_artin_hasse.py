"""
Unit tests for the Artin-Hasse series and the principal unit splitting.
"""
import pytest
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent.parent / 'src'))

from algebra import PrincipalUnit
from artin_hasse import (
    add_decompositions,
    artin_hasse_F,
    decompose_unit,
    mobius_product_series,
    reassemble,
    slot_indices,
    slot_length,
    transition,
    unit_from_witt,
)
from utils.validation import ValidationError
from witt import WittVector


def random_unit(spec, level, rng):
    return PrincipalUnit.from_coefficients(spec, level, [spec.random_element(rng) for _ in range(level - 1)])


class TestArtinHasseSeries:
    """Test the coefficients of F(u)."""

    def test_first_coefficients_p3(self):
        """F(u) = 1 - u + u^2/2 + ... reduces to 1, 2, 2 mod 3."""
        assert artin_hasse_F(3, 3) == (1, 2, 2)

    def test_first_coefficients_p2(self):
        """F(u) = 1 - u + 0 u^2 + u^3/3 + ... mod 2."""
        assert artin_hasse_F(2, 4) == (1, 1, 0, 1)

    @pytest.mark.parametrize("p", [2, 3, 5, 7])
    def test_matches_mobius_product(self, p):
        """The exponential and product formulas agree."""
        assert artin_hasse_F(p, 30) == mobius_product_series(p, 30)

    def test_rejects_composite(self):
        """p must be prime."""
        with pytest.raises(ValidationError):
            artin_hasse_F(4, 5)


class TestSlots:
    """Test slot bookkeeping."""

    def test_slot_length(self):
        """r_i is the least r with p^r i >= n."""
        assert slot_length(1, 4, 2) == 2
        assert slot_length(3, 4, 2) == 1
        assert slot_length(1, 2, 2) == 1

    def test_slot_indices(self):
        """Indices below n prime to p."""
        assert slot_indices(6, 3) == [1, 2, 4, 5]

    @pytest.mark.parametrize("p,n", [(2, 9), (3, 10), (5, 26)])
    def test_lengths_sum_to_dimension(self, p, n):
        """sum r_i = n - 1."""
        assert sum(slot_length(i, n, p) for i in slot_indices(n, p)) == n - 1


class TestUnitSplitting:
    """Test unit_from_witt, decompose_unit and reassemble."""

    def test_artin_hasse_unit_decomposes_to_its_slot(self, f2):
        """E((1, 0) u) sits in slot 1."""
        a = WittVector(2, (f2.one(), f2.zero()))
        decomposition = decompose_unit(unit_from_witt(a, 1, 4))

        assert decomposition.slots == {1: a}

    def test_roundtrip(self, f3, rng):
        """reassemble inverts decompose_unit."""
        for _ in range(10):
            v = random_unit(f3, 10, rng)
            assert reassemble(decompose_unit(v)) == v

    def test_roundtrip_over_extension(self, f4, rng):
        """The splitting works over F_4."""
        for _ in range(5):
            v = random_unit(f4, 9, rng)
            assert reassemble(decompose_unit(v)) == v

    def test_homomorphism(self, f2, rng):
        """Slotwise Witt addition matches the product of units."""
        for _ in range(5):
            v, w = random_unit(f2, 8, rng), random_unit(f2, 8, rng)
            total = add_decompositions(decompose_unit(v), decompose_unit(w))
            assert total == decompose_unit(v * w)

    def test_transition_matches_truncation(self, f3, rng):
        """Projecting slots equals decomposing the truncated unit."""
        for _ in range(5):
            v = random_unit(f3, 12, rng)
            assert transition(decompose_unit(v), 5) == decompose_unit(v.truncate(5))

    def test_one_has_no_slots(self, f5):
        """The unit 1 decomposes to nothing."""
        decomposition = decompose_unit(PrincipalUnit.one(f5, 6))

        assert decomposition.slots == {}
        assert decomposition.slot(2).is_zero()

    def test_to_dict(self, f2):
        """1 + u = F(u) F(u^3) mod u^4 over F_2."""
        v = PrincipalUnit.from_coefficients(f2, 4, [1])
        assert decompose_unit(v).to_dict() == {
            "level": 4,
            "slots": [{"i": 1, "witt": ["1", "0"]}, {"i": 3, "witt": ["1"]}],
        }

    def test_slot_divisible_by_p(self, f2):
        """Slots are indexed by i prime to p."""
        with pytest.raises(ValidationError):
            unit_from_witt(WittVector(2, (f2.one(),)), 2, 4)

    def test_wrong_slot_length(self, f2):
        """Slot 1 at level 4 has length 2."""
        with pytest.raises(ValidationError):
            unit_from_witt(WittVector(2, (f2.one(),)), 1, 4)

    def test_transition_upwards(self, f2):
        """Levels can only decrease."""
        with pytest.raises(ValidationError):
            transition(decompose_unit(PrincipalUnit.one(f2, 4)), 6)
