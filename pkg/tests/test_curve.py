"""
Unit tests for points, moduli and differential forms on P^1.
"""
import pytest
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent.parent / 'src'))

from algebra import PointOfP1, Polynomial, RationalFunction, parse_rational
from curve import (
    DifferentialForm,
    Modulus,
    NonRationalPointError,
    ZeroFormError,
    cartier,
    d,
    is_alpha_p_form,
    ord_at,
    parse_point,
    parse_points,
)
from utils.validation import ValidationError


class TestPoints:
    """Test point parsing."""

    def test_infinity(self, f3):
        """inf is the point at infinity."""
        assert parse_point("inf", f3).is_infinity

    def test_finite(self, f3):
        """Constants are finite points, reduced mod p."""
        assert parse_point("5", f3).value == f3.element(2)

    def test_non_constant(self, f3):
        """x is not a point."""
        with pytest.raises(ValidationError):
            parse_point("x", f3)

    def test_sorted_list(self, f3):
        """Finite points by index, infinity last."""
        assert [str(pt) for pt in parse_points("inf,1,0", f3)] == ["0", "1", "inf"]

    def test_repeated(self, f3):
        """A point may appear once."""
        with pytest.raises(ValidationError):
            parse_points("0,1,0", f3)


class TestModulus:
    """Test effective divisors."""

    def test_parse(self, f2):
        """Degree, points and canonical string."""
        modulus = Modulus.parse("inf:7,0:4", f2)

        assert modulus.degree == 11
        assert str(modulus) == "0:4,inf:7"
        assert modulus.to_list() == [
            {"point": "0", "multiplicity": 4},
            {"point": "inf", "multiplicity": 7},
        ]

    def test_zero_multiplicity_dropped(self, f2):
        """0:0 does not enter the support."""
        assert Modulus.parse("0:0,1:2", f2).points == [PointOfP1.finite(f2.one())]

    def test_empty(self, f2):
        """The empty literal is the zero modulus."""
        assert Modulus.parse("", f2).is_zero()

    def test_negative(self, f2):
        """Multiplicities are nonnegative."""
        with pytest.raises(ValidationError):
            Modulus.from_dict({PointOfP1.infinity(): -1})

    def test_lattice(self, f2):
        """Pointwise inf, sup and order."""
        a = Modulus.parse("0:4,inf:7", f2)
        b = Modulus.parse("0:2,1:3", f2)

        assert str(a.inf(b)) == "0:2"
        assert str(a.sup(b)) == "0:4,1:3,inf:7"
        assert a.inf(b) <= a
        assert not b <= a
        assert a < a.sup(b)

    def test_reduced(self, f2):
        """m_red has multiplicity one on the support."""
        assert str(Modulus.parse("0:4,inf:7", f2).reduced()) == "0:1,inf:1"


class TestDifferentialForms:
    """Test orders, divisors and the Cartier operator."""

    def test_dx_at_infinity(self, f3):
        """dx has a double pole at infinity."""
        omega = DifferentialForm(RationalFunction.one(f3))

        assert ord_at(omega, PointOfP1.infinity()) == -2
        assert omega.divisor() == {PointOfP1.infinity(): -2}
        assert omega.degree() == -2

    def test_canonical_degree(self, f5):
        """deg(df) = -2 for any nonconstant f with separable derivative."""
        assert d(parse_rational("x^2/(x-1)", f5)).degree() == -2

    def test_exact_p_th_power(self, f2):
        """d(x^2) = 0 over F_2."""
        assert d(parse_rational("x^2", f2)).is_zero()

    def test_zero_form(self, f2):
        """The zero form has no order."""
        with pytest.raises(ZeroFormError):
            d(parse_rational("x^2", f2)).ord_at(PointOfP1.infinity())

    def test_non_rational_divisor(self, f3):
        """x^2 + 1 splits only over F_9."""
        with pytest.raises(NonRationalPointError):
            DifferentialForm(parse_rational("x^2+1", f3)).divisor()

    def test_cartier(self, f3):
        """C(dx) = 0, C(x^2 dx) = dx and C(dx/x) = dx/x."""
        one = RationalFunction.one(f3)
        inverse = parse_rational("1/x", f3)

        assert cartier(DifferentialForm(one)).is_zero()
        assert cartier(DifferentialForm(parse_rational("x^2", f3))) == DifferentialForm(one)
        assert cartier(DifferentialForm(inverse)) == DifferentialForm(inverse)

    def test_exact_forms_are_alpha_p(self, f3):
        """C kills exact forms."""
        assert is_alpha_p_form(d(parse_rational("x^2+1/x", f3)))
        assert not is_alpha_p_form(DifferentialForm(parse_rational("1/x", f3)))


def random_function(rng, spec, degree=3):
    numerator = Polynomial.from_coeffs(spec, [spec.random_element(rng) for _ in range(degree + 1)])
    denominator = Polynomial.from_coeffs(spec, [spec.random_element(rng) for _ in range(degree)] + [spec.one()])
    return RationalFunction.fraction(numerator, denominator)


class TestCartierLinearity:
    """C is additive and p^-1-linear."""

    @pytest.mark.parametrize("field", ["f2", "f3", "f4", "f5"])
    def test_p_inverse_linear(self, field, rng, request):
        """C(h^p omega) = h C(omega) and C(a^p omega) = a C(omega)."""
        spec = request.getfixturevalue(field)
        for _ in range(8):
            omega = DifferentialForm(random_function(rng, spec))
            h = random_function(rng, spec, 2)
            if h.is_zero():
                continue
            a = spec.random_element(rng, nonzero=True)
            constant = RationalFunction.constant(spec, a.frobenius())

            assert cartier(omega.scale(h ** spec.p)) == cartier(omega).scale(h)
            assert cartier(omega.scale(constant)) == cartier(omega).scale(RationalFunction.constant(spec, a))

    @pytest.mark.parametrize("field", ["f2", "f3", "f4"])
    def test_additive_and_kills_exact_forms(self, field, rng, request):
        """C(omega + eta) = C(omega) + C(eta) and C(df) = 0."""
        spec = request.getfixturevalue(field)
        for _ in range(8):
            omega = DifferentialForm(random_function(rng, spec))
            eta = DifferentialForm(random_function(rng, spec))

            assert cartier(omega + eta) == cartier(omega) + cartier(eta)
            assert cartier(d(random_function(rng, spec))).is_zero()
