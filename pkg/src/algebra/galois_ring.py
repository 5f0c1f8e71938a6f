"""
Galois rings GR(p^N, d) = (Z/p^N)[t]/(M~(t)), the ring of length-N Witt vectors of F_{p^d}.

Every element records how many p-adic digits are known (its precision); digits
beyond the precision are zeroed so that equal values compare equal.
"""
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Tuple, Union

from sympy.polys.domains import ZZ
from sympy.polys.galoistools import gf_mul, gf_rem

from .finite_field import FieldElement, FieldError, FieldSpec


def p_adic_valuation(n: int, p: int) -> int:
    """v_p(n) for a nonzero integer n."""
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


@dataclass(frozen=True)
class GaloisRing:
    """GR(p^length, d) lifting the residue field `spec`."""

    spec: FieldSpec
    length: int

    def __post_init__(self):
        if self.length < 1:
            raise FieldError(f"Galois ring length must be >= 1, got {self.length}")

    @property
    def p(self) -> int:
        return self.spec.p

    @property
    def d(self) -> int:
        return self.spec.d

    @property
    def characteristic(self) -> int:
        return self.spec.p ** self.length

    @cached_property
    def _reducer(self) -> list:
        return list(self.spec.modulus) if self.spec.modulus is not None else [1, 0]

    def element(self, coeffs: Tuple[int, ...], precision: int = None) -> 'GaloisRingElement':
        """Element from integer coefficients of t^0, t^1, ... (lowest degree first)."""
        precision = self.length if precision is None else min(precision, self.length)
        modulus = self.p ** precision
        high_first = [int(c) for c in reversed(coeffs)] or [0]
        reduced = gf_rem(high_first, self._reducer, self.characteristic, ZZ)
        low_first = [int(c) % modulus for c in reversed(reduced)]
        low_first += [0] * (self.d - len(low_first))
        return GaloisRingElement(self, tuple(low_first), precision)

    def coerce(self, value: Union[int, 'GaloisRingElement']) -> 'GaloisRingElement':
        if isinstance(value, GaloisRingElement):
            return value
        return self.element((value,))

    def zero(self) -> 'GaloisRingElement':
        return self.element((0,))

    def one(self) -> 'GaloisRingElement':
        return self.element((1,))

    def lift(self, a: FieldElement) -> 'GaloisRingElement':
        """Naive lift: digits of the residue read as integers."""
        return self.element(a.lift())

    def teichmuller(self, a: FieldElement) -> 'GaloisRingElement':
        """The Teichmuller representative [a], the unique lift with [a]^q = [a]."""
        return _teichmuller(self, a)


@lru_cache(maxsize=65536)
def _teichmuller(ring: GaloisRing, a: FieldElement) -> 'GaloisRingElement':
    if a.spec != ring.spec:
        raise FieldError(f"cannot lift an element of {a.spec} to {ring}")
    x = ring.lift(a)
    if a.is_zero():
        return x
    # x -> x^q converges p-adically to the Teichmuller lift, one digit per step
    for _ in range(ring.length):
        x = x ** ring.spec.q
    return x


@dataclass(frozen=True)
class GaloisRingElement:
    ring: GaloisRing
    coeffs: Tuple[int, ...]
    precision: int

    @property
    def characteristic(self) -> int:
        return self.ring.characteristic

    def valuation(self) -> int:
        """p-adic valuation, equal to the precision for (known) zero."""
        nonzero = [c for c in self.coeffs if c]
        if not nonzero:
            return self.precision
        return min(min(p_adic_valuation(c, self.ring.p) for c in nonzero), self.precision)

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def is_unit(self) -> bool:
        return self.precision >= 1 and self.valuation() == 0

    def _other(self, other) -> 'GaloisRingElement':
        if isinstance(other, GaloisRingElement):
            if other.ring != self.ring:
                raise FieldError(f"cannot combine elements of {self.ring} and {other.ring}")
            return other
        if isinstance(other, int):
            return self.ring.coerce(other)
        return None

    def __add__(self, other):
        other = self._other(other)
        if other is None:
            return NotImplemented
        return self.ring.element(
            tuple(a + b for a, b in zip(self.coeffs, other.coeffs)),
            min(self.precision, other.precision),
        )

    __radd__ = __add__

    def __neg__(self):
        return self.ring.element(tuple(-a for a in self.coeffs), self.precision)

    def __sub__(self, other):
        other = self._other(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._other(other)
        if other is None:
            return NotImplemented
        return other - self

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        other = self._other(other)
        if other is None:
            return NotImplemented
        precision = min(
            self.precision + other.valuation(),
            other.precision + self.valuation(),
            self.ring.length,
        )
        product = gf_mul(
            list(reversed(self.coeffs)), list(reversed(other.coeffs)), self.ring.characteristic, ZZ
        )
        return self.ring.element(tuple(reversed(product)), precision)

    __rmul__ = __mul__

    def scale(self, n: int) -> 'GaloisRingElement':
        """Multiplication by an integer; a factor p^k adds k known digits."""
        if n == 0:
            return self.ring.zero()
        precision = min(self.precision + p_adic_valuation(n, self.ring.p), self.ring.length)
        return self.ring.element(tuple(n * c for c in self.coeffs), precision)

    def __pow__(self, exponent: int):
        if exponent < 0:
            return self.inverse() ** (-exponent)
        result = self.ring.one()
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            exponent >>= 1
            if exponent:
                base = base * base
        return result

    def inverse(self) -> 'GaloisRingElement':
        """Inverse of a unit by Newton iteration x <- x(2 - a x)."""
        if not self.is_unit():
            raise FieldError(f"{self} is not a unit of {self.ring}")
        x = self.ring.lift(self.reduce().inverse())
        known = 1
        while known < self.precision:
            x = x * (2 - self * x)
            known *= 2
        return self.ring.element(x.coeffs, self.precision)

    def __truediv__(self, other):
        other = self._other(other)
        if other is None:
            return NotImplemented
        return self * other.inverse()

    def divide_by_p_power(self, k: int) -> 'GaloisRingElement':
        """Exact division by p^k; loses k digits of precision."""
        if k == 0:
            return self
        if self.valuation() < k:
            raise FieldError(f"{self} is not divisible by {self.ring.p}^{k}")
        factor = self.ring.p ** k
        return self.ring.element(tuple(c // factor for c in self.coeffs), self.precision - k)

    def reduce(self) -> FieldElement:
        """Residue in F_{p^d}."""
        if self.precision < 1:
            raise FieldError("no residue digit is known for this element")
        p = self.ring.p
        return self.ring.spec.element([c % p for c in reversed(self.coeffs)])

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.ring.coerce(other)
        if not isinstance(other, GaloisRingElement):
            return NotImplemented
        if self.ring != other.ring:
            return False
        precision = min(self.precision, other.precision)
        modulus = self.ring.p ** precision
        return all((a - b) % modulus == 0 for a, b in zip(self.coeffs, other.coeffs))

    def __hash__(self):
        return hash((self.ring.p, self.ring.length, self.coeffs))

    def __str__(self) -> str:
        terms = [
            (str(c) if i == 0 else f"{c}*t" if i == 1 else f"{c}*t^{i}")
            for i, c in enumerate(self.coeffs) if c
        ]
        return ("+".join(reversed(terms)) or "0") + f" + O({self.ring.p}^{self.precision})"
