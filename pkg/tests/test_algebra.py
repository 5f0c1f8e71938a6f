"""
Unit tests for finite fields, Galois rings, polynomials, rational functions,
Laurent series and principal units.
"""
import pytest
import random
import sys
from pathlib import Path

from sympy import primerange

sys.path.insert(0, str(Path(__file__).parent.parent / 'src'))

from algebra import (
    FieldError,
    FieldSpec,
    GaloisRing,
    LaurentSeries,
    PointOfP1,
    Polynomial,
    PrecisionError,
    PrincipalUnit,
    RationalFunction,
    laurent_expand,
    p_adic_valuation,
    parse_rational,
)
from utils.validation import ValidationError


class TestFieldSpec:
    """Test F_{p^d} construction and arithmetic."""

    def test_prime_field_reduces_integers(self, f5):
        """Integers are reduced mod p and printed in [0, p)."""
        assert str(f5.element(7)) == "2"
        assert str(f5.element(-1)) == "4"

    def test_extension_multiplication(self, f4):
        """t^2 = t + 1 in F_4."""
        t = f4.gen()
        assert t * t == f4.element([1, 1])
        assert str(t * t) == "t+1"

    def test_every_nonzero_element_is_invertible(self, f4):
        """a * a^-1 = 1 over the whole field."""
        for a in f4.elements():
            if not a.is_zero():
                assert (a * a.inverse()).is_one()

    def test_division_by_zero(self, f3):
        """Inverting zero raises FieldError."""
        with pytest.raises(FieldError):
            f3.zero().inverse()

    def test_reducible_modulus_rejected(self):
        """t^2 + 1 = (t + 1)^2 over F_2 is not a field modulus."""
        with pytest.raises(ValidationError):
            FieldSpec(2, 2, (1, 0, 1))

    def test_missing_modulus_rejected(self):
        """d > 1 needs an explicit modulus."""
        with pytest.raises(ValidationError):
            FieldSpec(3, 2)

    def test_non_prime_characteristic(self):
        """p must be prime."""
        with pytest.raises(ValidationError):
            FieldSpec(6)

    def test_pth_root_inverts_frobenius(self, f4):
        """(a^{1/p})^p = a."""
        for a in f4.elements():
            assert a.pth_root().frobenius() == a

    def test_index_roundtrip(self, f4):
        """from_index and to_index are inverse."""
        for index in range(f4.q):
            assert f4.from_index(index).to_index() == index

    def test_enumeration_limit(self):
        """Fields above the enumeration limit refuse to enumerate."""
        big = FieldSpec(4099)
        with pytest.raises(FieldError):
            list(big.elements())


# Irreducible moduli (highest degree first) for every extension field with p^d <= 512
EXTENSION_MODULI = {
    (2, 2): (1, 1, 1),
    (2, 3): (1, 0, 1, 1),
    (2, 4): (1, 0, 0, 1, 1),
    (2, 5): (1, 0, 0, 1, 0, 1),
    (2, 6): (1, 0, 1, 1, 0, 1, 1),
    (2, 7): (1, 0, 0, 0, 0, 0, 1, 1),
    (2, 8): (1, 0, 0, 0, 1, 1, 1, 0, 1),
    (2, 9): (1, 0, 0, 0, 0, 1, 0, 0, 0, 1),
    (3, 2): (1, 2, 2),
    (3, 3): (1, 0, 2, 1),
    (3, 4): (1, 2, 0, 0, 2),
    (3, 5): (1, 0, 0, 0, 2, 1),
    (5, 2): (1, 4, 2),
    (5, 3): (1, 0, 3, 3),
    (7, 2): (1, 6, 3),
    (7, 3): (1, 6, 0, 4),
    (11, 2): (1, 7, 2),
    (13, 2): (1, 12, 2),
    (17, 2): (1, 16, 3),
    (19, 2): (1, 18, 2),
}
SMALL_FIELDS = [(p, 1) for p in primerange(2, 513)] + sorted(EXTENSION_MODULI)


def small_field(p, d):
    return FieldSpec(p, d, EXTENSION_MODULI.get((p, d)))


class TestFrobenius:
    """Frobenius on every F_q with q <= 512."""

    @pytest.mark.parametrize("p, d", SMALL_FIELDS, ids=lambda v: str(v))
    def test_field_automorphism(self, p, d):
        """a -> a^p is additive, multiplicative and bijective, inverted by pth_root."""
        spec = small_field(p, d)
        images = set()
        for a in spec.elements():
            image = a.frobenius()
            assert image.pth_root() == a
            images.add(image)
        assert len(images) == spec.q

        rng = random.Random(p * 1000 + d)
        if spec.q <= 32:
            pairs = [(a, b) for a in spec.elements() for b in spec.elements()]
        else:
            pairs = [(spec.random_element(rng), spec.random_element(rng)) for _ in range(200)]
        for a, b in pairs:
            assert (a + b).frobenius() == a.frobenius() + b.frobenius()
            assert (a * b).frobenius() == a.frobenius() * b.frobenius()


class TestGaloisRing:
    """Test GR(p^N, d)."""

    def test_p_adic_valuation(self):
        """v_2(12) = 2, v_3(5) = 0."""
        assert p_adic_valuation(12, 2) == 2
        assert p_adic_valuation(5, 3) == 0

    def test_teichmuller_is_fixed_by_q_power(self, f4):
        """[a]^q = [a] and [a] reduces to a."""
        ring = GaloisRing(f4, 3)
        for a in f4.elements():
            lifted = ring.teichmuller(a)
            assert lifted ** f4.q == lifted
            assert lifted.reduce() == a

    def test_teichmuller_is_multiplicative(self, f4):
        """[a][b] = [ab]."""
        ring = GaloisRing(f4, 2)
        elements = list(f4.elements())
        for a in elements:
            for b in elements:
                assert ring.teichmuller(a) * ring.teichmuller(b) == ring.teichmuller(a * b)

    def test_characteristic(self, f3):
        """GR(3^2, 1) = Z/9."""
        assert GaloisRing(f3, 2).characteristic == 9


class TestPolynomial:
    """Test univariate polynomials over a field."""

    def test_polynomials_carry_their_ring(self, f3):
        """Polynomials are built from a coefficient ring directly; no ring wrapper is exported."""
        import algebra
        from algebra import polynomial

        assert Polynomial.x(f3).ring == f3
        assert Polynomial.x(GaloisRing(f3, 2)).degree == 1
        assert "PolynomialRing" not in algebra.__all__
        assert not hasattr(polynomial, "PolynomialRing")

    def test_roots(self, f5):
        """x^2 - 1 has roots 1 and 4 over F_5."""
        x = Polynomial.x(f5)
        poly = x * x - Polynomial.constant(f5, 1)
        assert sorted(r.to_index() for r in poly.roots()) == [1, 4]

    def test_gcd_is_monic(self, f3):
        """gcd((x-1)(x+1), 2(x-1)) = x - 1."""
        x = Polynomial.x(f3)
        one = Polynomial.constant(f3, 1)
        a = (x - one) * (x + one)
        b = (x - one) * Polynomial.constant(f3, 2)
        assert a.gcd(b) == x - one

    def test_format(self, f3):
        """Descending degree, unit coefficients omitted."""
        x = Polynomial.x(f3)
        poly = x * x + x * Polynomial.constant(f3, 2) + Polynomial.constant(f3, 1)
        assert poly.format('u') == "u^2+2*u+1"


class TestRationalFunction:
    """Test canonical rational functions and orders."""

    def test_fraction_cancels_common_factors(self, f3):
        """(x^2 - 1)/(x - 1) = x + 1."""
        assert parse_rational("(x^2-1)/(x-1)", f3) == parse_rational("x+1", f3)

    def test_ord_at_points(self, f3):
        """x^2/(x - 1): order 2 at 0, -1 at 1, -1 at infinity."""
        f = parse_rational("x^2/(x-1)", f3)
        assert f.ord_at(PointOfP1.finite(f3.zero())) == 2
        assert f.ord_at(PointOfP1.finite(f3.one())) == -1
        assert f.ord_at(PointOfP1.infinity()) == -1

    def test_localize_at_infinity(self, f2):
        """1/x in the uniformizer u = 1/x is u."""
        x = RationalFunction.x(f2)
        assert x.inverse().localize(PointOfP1.infinity()) == x

    def test_zeros_and_poles(self, f5):
        """Divisor of x^2/(x - 1) with infinity included."""
        f = parse_rational("x^2/(x-1)", f5)
        divisor = {str(pt): n for pt, n in f.zeros_and_poles().items()}
        assert divisor == {"0": 2, "1": -1, "inf": -1}

    def test_non_rational_critical_points(self, f3):
        """x^2 + 1 has no root over F_3."""
        _, rational = parse_rational("x^2+1", f3).critical_points()
        assert rational is False

    def test_format_with_variable(self, f2):
        """Representatives print in the caller's variable."""
        assert parse_rational("1/x", f2).format('u') == "1/(u)"


class TestLaurentSeries:
    """Test truncated Laurent series."""

    def test_geometric_series(self, f3):
        """1/(1 - x) = 1 + u + u^2 + ... at 0."""
        series = laurent_expand(parse_rational("1/(1-x)", f3), PointOfP1.finite(f3.zero()), 5)
        assert series.valuation == 0
        assert series.absolute_precision == 5
        assert all(series.coefficient(k).is_one() for k in range(5))

    def test_expansion_at_infinity(self, f2):
        """x = u^-1 at infinity."""
        series = laurent_expand(RationalFunction.x(f2), PointOfP1.infinity(), 3)
        assert series.valuation == -1
        assert series.leading().is_one()

    def test_coefficient_beyond_precision(self, f2):
        """Reading past the known terms raises PrecisionError."""
        series = LaurentSeries.monomial(f2, 1, -1, 2)
        with pytest.raises(PrecisionError):
            series.coefficient(2)

    def test_residue(self, f5):
        """Res(3 u^-1 du) = 3."""
        assert LaurentSeries.monomial(f5, 3, -1, 4).residue() == f5.element(3)

    def test_residue_needs_precision(self, f5):
        """A series known only modulo u^-1 has no residue."""
        with pytest.raises(PrecisionError):
            LaurentSeries.zero(f5, -1).residue()

    def test_inverse(self, f3):
        """s * s^-1 = 1 to the known precision."""
        s = laurent_expand(parse_rational("(1+x)/x", f3), PointOfP1.finite(f3.zero()), 6)
        product = s * s.inverse()
        assert product.valuation == 0
        assert product.leading().is_one()
        assert all(product.coefficient(k).is_zero() for k in range(1, product.absolute_precision))

    def test_frobenius_in_characteristic_p(self, f3):
        """(1 + u)^3 = 1 + u^3."""
        s = laurent_expand(parse_rational("1+x", f3), PointOfP1.finite(f3.zero()), 4)
        cube = s.frobenius()
        assert cube.terms() == {0: f3.one(), 3: f3.one()}

    def test_principal_part(self, f2):
        """Principal part of 1/u^2 + 1 is {-2: 1}."""
        s = laurent_expand(parse_rational("1/x^2+1", f2), PointOfP1.finite(f2.zero()), 5)
        assert s.principal_part() == {-2: f2.one()}


class TestPrincipalUnit:
    """Test principal units at a level."""

    def test_square_in_characteristic_two(self, f2):
        """(1 + u)^2 = 1 + u^2 mod u^4."""
        v = PrincipalUnit.from_coefficients(f2, 4, [1])
        assert (v * v).coeffs == (f2.zero(), f2.one(), f2.zero())

    def test_inverse(self, f3):
        """v / v = 1."""
        v = PrincipalUnit.from_coefficients(f3, 5, [1, 2, 0, 1])
        assert (v / v).is_one()

    def test_truncate(self, f3):
        """Truncation keeps the first level - 1 coefficients."""
        v = PrincipalUnit.from_coefficients(f3, 5, [1, 2, 0, 1])
        assert v.truncate(3).coeffs == (f3.one(), f3.element(2))

    def test_wrong_coefficient_count(self, f3):
        """A level-n unit carries n - 1 coefficients."""
        with pytest.raises(ValidationError):
            PrincipalUnit(f3, 3, (f3.one(),))

    def test_from_series_needs_constant_one(self, f3):
        """Series with constant term 2 is not a principal unit."""
        series = laurent_expand(parse_rational("2+x", f3), PointOfP1.finite(f3.zero()), 4)
        with pytest.raises(ValidationError):
            PrincipalUnit.from_series(series, 3)


def random_polynomial(rng, spec, degree, monic=False):
    coeffs = [spec.random_element(rng) for _ in range(degree)]
    coeffs.append(spec.one() if monic else spec.random_element(rng, nonzero=True))
    return Polynomial.from_coeffs(spec, coeffs)


class TestLaurentInvariants:
    """Randomized properties of expansions."""

    @pytest.mark.parametrize("p", [2, 3, 5])
    def test_expansion_roundtrip(self, p, rng):
        """expand(N/D) * expand(D) = expand(N) to the known precision, at 0, 1 and infinity."""
        spec = FieldSpec(p)
        points = [PointOfP1.finite(spec.zero()), PointOfP1.finite(spec.one()), PointOfP1.infinity()]
        for _ in range(10):
            numerator = RationalFunction.from_polynomial(random_polynomial(rng, spec, rng.randint(0, 4)))
            denominator = RationalFunction.from_polynomial(random_polynomial(rng, spec, rng.randint(1, 4), monic=True))
            f = numerator / denominator
            for at in points:
                series = laurent_expand(f, at, 12)
                assert series.valuation == f.ord_at(at)
                assert series.precision == 12

                product = series * laurent_expand(denominator, at, 12)
                expected = laurent_expand(numerator, at, 12)
                for k in range(expected.valuation, min(product.absolute_precision, expected.absolute_precision)):
                    assert product.coefficient(k) == expected.coefficient(k)

    @pytest.mark.parametrize("p", [2, 3, 5, 7])
    def test_residue_of_derivative_vanishes(self, p, rng):
        """Res(df/du du) = 0 for random Laurent series f."""
        spec = FieldSpec(p)
        for _ in range(50):
            valuation = rng.randint(-12, 3)
            coeffs = [spec.random_element(rng, nonzero=True)]
            coeffs += [spec.random_element(rng) for _ in range(rng.randint(1, 20))]
            f = LaurentSeries.build(spec, valuation, coeffs)
            if f.derivative().absolute_precision <= -1:
                continue
            assert f.derivative().residue().is_zero()
