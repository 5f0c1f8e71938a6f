"""
Unit tests for global classes and their minimal moduli.
"""
import pytest
import random
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent.parent / 'src'))

from algebra import PointOfP1, parse_rational
from conductor import parse_group
from curve import Modulus, parse_points
from modulus import (
    GlobalTorsorClass,
    RegularityError,
    alpha_p_modulus,
    filtration_member,
    kummer_modulus,
    local_local_modulus,
    minimal_modulus,
    mu_rank,
    mu_rank_bruteforce,
    random_global_class,
)
from utils.validation import ValidationError


def global_class(spec, group_text, data, points):
    group = parse_group(group_text, spec.p)
    S = parse_points(points, spec)
    if group.variant == "kummer":
        return GlobalTorsorClass.kummer(group, S, parse_rational(data, spec))
    return GlobalTorsorClass.from_functions(group, S, [[parse_rational(data, spec)]])


class TestAlphaPModulus:
    """Test the differential route."""

    def test_square_at_infinity(self, f3):
        """x^2 over F_3: d(x^2) = 2x dx has order -3 at infinity."""
        result = alpha_p_modulus(global_class(f3, "alpha_p", "x^2", "inf"))

        assert str(result.modulus) == "inf:3"
        assert result.trivial is False

    def test_linear(self, f2):
        """x over F_2: dx has a double pole at infinity."""
        assert str(alpha_p_modulus(global_class(f2, "alpha_p", "x", "inf")).modulus) == "inf:2"

    def test_p_th_power_is_trivial(self, f2):
        """x^2 over F_2 has df = 0."""
        result = alpha_p_modulus(global_class(f2, "alpha_p", "x^2", "inf"))

        assert result.trivial is True
        assert result.modulus.is_zero()

    def test_agrees_with_local_conductors(self, f2):
        """The differential and the conductor routes agree."""
        P = global_class(f2, "alpha_p", "1/x^3+x", "0,inf")
        expected = Modulus.parse("0:4,inf:2", f2)

        assert alpha_p_modulus(P).modulus == expected
        assert local_local_modulus(P).modulus == expected

    def test_random_classes_agree(self, f3):
        """Both routes agree on random alpha_p classes."""
        rng = random.Random(7)
        group = parse_group("alpha_p", 3)
        S = parse_points("0,1,inf", f3)
        for _ in range(3):
            P = random_global_class(rng, group, f3, S, 3)
            assert alpha_p_modulus(P).modulus == local_local_modulus(P).modulus

    def test_to_dict(self, f2):
        """Serialized moduli list points with multiplicities."""
        assert alpha_p_modulus(global_class(f2, "alpha_p", "x", "inf")).to_dict() == {
            "modulus": [{"point": "inf", "multiplicity": 2}],
            "trivial": False,
        }


class TestRegularity:
    """Test the regularity check on U = P^1 - S."""

    def test_pole_outside_s(self, f3):
        """1/(x - 1) has a pole at 1, which is not in S."""
        with pytest.raises(RegularityError):
            global_class(f3, "alpha_p", "1/(x-1)", "0")

    def test_pole_at_infinity(self, f3):
        """x has a pole at infinity."""
        with pytest.raises(RegularityError):
            global_class(f3, "alpha_p", "x", "0")

    def test_kummer_zero_outside_s(self, f3):
        """Kummer data must be invertible on U."""
        with pytest.raises(RegularityError):
            global_class(f3, "mu_2", "x-1", "0,inf")


class TestOtherRoutes:
    """Test Kummer, Artin-Schreier-Witt and mixed moduli."""

    def test_kummer(self, f2):
        """x for mu_3 on S = {0, inf} has modulus 0 + inf."""
        result = kummer_modulus(global_class(f2, "mu_3", "x", "0,inf"))
        assert str(result.modulus) == "0:1,inf:1"

    def test_kummer_trivial(self, f2):
        """x^3 is a cube."""
        assert kummer_modulus(global_class(f2, "mu_3", "x^3", "0,inf")).trivial is True

    def test_kummer_below_reduced(self, f5, rng):
        """Kummer moduli are bounded by m_red."""
        group = parse_group("mu_3", 5)
        S = parse_points("0,2,inf", f5)
        for _ in range(5):
            P = random_global_class(rng, group, f5, S, 4)
            modulus = kummer_modulus(P).modulus
            assert modulus <= Modulus.from_dict({pt: 1 for pt in S})

    def test_artin_schreier(self, f2):
        """x^3 for Z/2 on S = {inf} has modulus 4 inf."""
        assert str(minimal_modulus(global_class(f2, "Z/2", "x^3", "inf")).modulus) == "inf:4"

    def test_mixed_class_takes_sup(self, f2):
        """A sequence of classes gets the pointwise maximum."""
        parts = [
            global_class(f2, "alpha_p", "x", "inf"),
            global_class(f2, "mu_3", "x", "0,inf"),
        ]
        result = minimal_modulus(parts)

        assert str(result.modulus) == "0:1,inf:2"
        assert result.trivial is False


class TestFiltration:
    """Test filtration_member function."""

    def test_membership(self, f2):
        """x lies in F_m exactly for m >= 2 inf."""
        P = global_class(f2, "alpha_p", "x", "inf")

        assert filtration_member(P, Modulus.parse("inf:2", f2)) is True
        assert filtration_member(P, Modulus.parse("inf:5", f2)) is True
        assert filtration_member(P, Modulus.parse("inf:1", f2)) is False

    def test_support_outside_s(self, f2):
        """The modulus must live on S."""
        P = global_class(f2, "alpha_p", "x", "inf")
        with pytest.raises(ValidationError):
            filtration_member(P, Modulus.parse("0:3", f2))


class TestMuRank:
    """Test the rank of H^1(U, mu_{p^n})."""

    def test_formula(self):
        """f_X + #S - 1."""
        assert mu_rank(2, 1, 3, 0) == 2
        assert mu_rank(3, 2, 1, 0) == 0

    def test_bruteforce_with_infinity(self, f2):
        """S = {0, 1, inf}: rank 2."""
        assert mu_rank_bruteforce(f2, parse_points("0,1,inf", f2), 2) == 2

    def test_bruteforce_without_infinity(self, f2):
        """S = {0, 1}: rank 1."""
        assert mu_rank_bruteforce(f2, parse_points("0,1", f2), 2) == 1

    def test_empty_s(self, f2):
        """S must be nonempty."""
        with pytest.raises(ValidationError):
            mu_rank(2, 1, 0, 0)


class TestEnlargingS:
    """Adding points with no local data leaves the minimal modulus unchanged."""

    @pytest.mark.parametrize("group_text, field", [
        ("alpha_p", "f3"),
        ("W2[F^1]", "f2"),
        ("alpha_p x W1[F^2]", "f2"),
        ("Z/3", "f3"),
        ("mu_2", "f3"),
        ("mu_3", "f2"),
    ])
    def test_minimal_modulus_stable(self, group_text, field, request):
        """m(P) computed on S equals m(P) computed on S plus extra points."""
        spec = request.getfixturevalue(field)
        rng = random.Random(group_text)
        group = parse_group(group_text, spec.p)
        everything = [PointOfP1.finite(c) for c in spec.elements()] + [PointOfP1.infinity()]
        for _ in range(3):
            S = rng.sample(everything, rng.randint(1, 2))
            P = random_global_class(rng, group, spec, S, 2)
            enlarged = GlobalTorsorClass(P.group, tuple(everything), P.data, P.unit)

            assert minimal_modulus(enlarged).modulus == minimal_modulus(P).modulus
            assert minimal_modulus(enlarged).trivial == minimal_modulus(P).trivial
