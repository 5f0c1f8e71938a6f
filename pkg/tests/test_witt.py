"""
Unit tests for truncated Witt vectors.
"""
import pytest
import sys
import threading
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent.parent / 'src'))

from algebra import Polynomial, RationalFunction
from witt import (
    WittDivisibilityError,
    WittDomainError,
    WittVector,
    build_witt_law,
    frobenius_kernel_contains,
    from_galois,
    law_cache,
    to_galois,
    unghost,
    universal_add,
    universal_mul,
)


def random_vector(spec, m, rng):
    return WittVector(spec.p, tuple(spec.random_element(rng) for _ in range(m)))


class TestIntegerWittVectors:
    """Test W_m(Z) through the universal polynomials."""

    def test_unghost(self):
        """Ghost (2, 2) comes from (2, -1)."""
        assert unghost([2, 2], 2).components == (2, -1)

    def test_ghost(self):
        """(1, 1) has ghost (1, 1 + 2) for p = 2."""
        assert WittVector(2, (1, 1)).ghost() == (1, 3)

    def test_addition(self):
        """[1] + [1] = (2, -1) in W_2(Z), p = 2."""
        one = WittVector(2, (1, 0))
        assert (one + one).components == (2, -1)

    def test_sum_matches_ghost_sum(self):
        """Addition is componentwise on ghost coordinates."""
        a = WittVector(3, (2, 5, -1))
        b = WittVector(3, (4, 0, 7))
        ghosts = tuple(x + y for x, y in zip(a.ghost(), b.ghost()))
        assert (a + b).ghost() == ghosts

    def test_product_matches_ghost_product(self):
        """Multiplication is componentwise on ghost coordinates."""
        a = WittVector(2, (3, 1, 2))
        b = WittVector(2, (-1, 4, 0))
        ghosts = tuple(x * y for x, y in zip(a.ghost(), b.ghost()))
        assert (a * b).ghost() == ghosts

    def test_negation(self):
        """a + (-a) = 0."""
        a = WittVector(2, (1, 2))
        assert (a + (-a)).is_zero()

    def test_non_divisible_ghost(self):
        """(1, 2) is not a ghost vector for p = 2."""
        with pytest.raises(WittDivisibilityError):
            unghost([1, 2], 2)

    def test_length_cap(self):
        """Universal polynomials stop at the configured cap."""
        a = WittVector(2, (1, 0, 0, 0, 0))
        with pytest.raises(WittDomainError):
            a + a

    def test_frobenius_needs_characteristic_p(self):
        """F is only defined over F_p-algebras here."""
        with pytest.raises(WittDomainError):
            WittVector(2, (1, 1)).frobenius()


class TestFieldWittVectors:
    """Test W_m(F_q) through the Galois ring."""

    def test_one_plus_one(self, f2):
        """[1] + [1] = (0, 1) in W_2(F_2) = Z/4."""
        one = WittVector(2, (f2.one(), f2.zero()))
        assert (one + one).components == (f2.zero(), f2.one())

    def test_galois_route_matches_universal_sum(self, f3, rng):
        """Both evaluation routes agree."""
        for _ in range(10):
            a, b = random_vector(f3, 2, rng), random_vector(f3, 2, rng)
            assert a + b == universal_add(a, b)
            assert a * b == universal_mul(a, b)

    def test_galois_route_matches_universal_over_extension(self, f4, rng):
        """Routes agree over F_4 at length 3."""
        for _ in range(5):
            a, b = random_vector(f4, 3, rng), random_vector(f4, 3, rng)
            assert a + b == universal_add(a, b)

    def test_galois_roundtrip(self, f4, rng):
        """from_galois inverts to_galois."""
        for _ in range(10):
            a = random_vector(f4, 3, rng)
            assert from_galois(to_galois(a), 3) == a

    def test_teichmuller_is_multiplicative(self, f4):
        """[x][y] = [xy]."""
        elements = list(f4.elements())
        for x in elements:
            for y in elements:
                product = WittVector.teichmuller(x, 3, 2) * WittVector.teichmuller(y, 3, 2)
                assert product == WittVector.teichmuller(x * y, 3, 2)

    def test_p_equals_verschiebung_frobenius(self, f4, rng):
        """p.a = V(F(a)) over F_p-algebras."""
        for _ in range(10):
            a = random_vector(f4, 3, rng)
            assert a.times(2) == a.frobenius().verschiebung()

    def test_verschiebung_keeps_length(self, f3):
        """V shifts right and drops the last component."""
        a = WittVector(3, (f3.one(), f3.element(2)))
        assert a.verschiebung().components == (f3.zero(), f3.one())

    def test_restrict(self, f3):
        """R drops the last component; length 1 cannot be restricted."""
        a = WittVector(3, (f3.one(), f3.element(2)))
        assert a.restrict().components == (f3.one(),)
        with pytest.raises(WittDomainError):
            a.restrict().restrict()

    def test_ghost_undefined_in_characteristic_p(self, f3):
        """Ghost components need a torsion-free domain."""
        with pytest.raises(WittDomainError):
            WittVector(3, (f3.one(), f3.one())).ghost()

    def test_long_vectors_use_galois_route(self, f2):
        """No length cap over a finite field."""
        one = WittVector.teichmuller(f2.one(), 6, 2)
        total = one.times(4)
        assert total.components[:2] == (f2.zero(), f2.zero())
        assert total.components[2] == f2.one()


class TestFunctionWittVectors:
    """Test Witt vectors over rational functions and polynomials."""

    def test_sum_of_teichmuller_lifts(self, f2):
        """(x, 0) + (x, 0) = (0, x^2) over F_2(x)."""
        x = RationalFunction.x(f2)
        zero = RationalFunction.zero(f2)
        a = WittVector(2, (x, zero))
        assert (a + a).components == (zero, x ** 2)

    def test_mixed_domains_rejected(self, f2):
        """Components must share one domain."""
        with pytest.raises(WittDomainError):
            WittVector(2, (1, f2.one()))

    def test_mismatched_lengths(self, f2):
        """W_1 and W_2 do not combine."""
        a = WittVector(2, (f2.one(),))
        b = WittVector(2, (f2.one(), f2.zero()))
        with pytest.raises(WittDomainError):
            a + b

    def test_frobenius_kernel_with_truncation(self, f2):
        """F(x, 0) vanishes in k[x]/(x^2) but not in k[x]/(x^3)."""
        a = WittVector(2, (Polynomial.x(f2), Polynomial.constant(f2, 0)))
        assert frobenius_kernel_contains(a, 1, truncation=2) is True
        assert frobenius_kernel_contains(a, 1, truncation=3) is False

    def test_frobenius_kernel_over_field(self, f3):
        """Over a field only zero lies in ker F^r."""
        assert frobenius_kernel_contains(WittVector.zero(3, 2, f3.zero()), 2)
        assert not frobenius_kernel_contains(WittVector(3, (f3.one(), f3.zero())), 2)


class TestWittLawCache:
    """Test the universal polynomial cache."""

    def test_law_shape(self):
        """One sum, product and negation polynomial per component."""
        law = build_witt_law(3, 2)
        assert len(law.sum) == len(law.product) == len(law.negation) == 2

    def test_concurrent_reads_share_one_law(self):
        """Concurrent first reads return the same object."""
        law_cache.clear()
        results = []

        def read():
            results.append(law_cache.get(2, 3))

        threads = [threading.Thread(target=read) for _ in range(4)]
        for thread in threads:
            thread.start()
        for thread in threads:
            thread.join()

        assert len(results) == 4
        assert all(law is results[0] for law in results)
