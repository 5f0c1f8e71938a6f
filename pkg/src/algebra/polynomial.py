"""
Dense univariate polynomials over an exact coefficient ring.

Coefficients are stored lowest degree first with trailing zeros stripped.
The coefficient ring is any object offering zero(), one(), coerce() and
characteristic (FieldSpec, GaloisRing).
"""
from dataclasses import dataclass
from typing import Any, Callable, Iterable, List, Optional, Tuple

from .finite_field import FieldError


def _strip(coeffs: Iterable) -> Tuple:
    coeffs = list(coeffs)
    while coeffs and coeffs[-1].is_zero():
        coeffs.pop()
    return tuple(coeffs)


@dataclass(frozen=True)
class Polynomial:
    ring: Any
    coeffs: Tuple = ()

    @classmethod
    def from_coeffs(cls, ring, coeffs: Iterable) -> 'Polynomial':
        return cls(ring, _strip(ring.coerce(c) for c in coeffs))

    @classmethod
    def constant(cls, ring, value) -> 'Polynomial':
        return cls.from_coeffs(ring, [value])

    @classmethod
    def monomial(cls, ring, value, degree: int) -> 'Polynomial':
        return cls.from_coeffs(ring, [ring.zero()] * degree + [value])

    @classmethod
    def x(cls, ring) -> 'Polynomial':
        return cls.monomial(ring, ring.one(), 1)

    @property
    def characteristic(self) -> int:
        return self.ring.characteristic

    @property
    def degree(self) -> int:
        """Degree, -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_constant(self) -> bool:
        return len(self.coeffs) <= 1

    def leading(self):
        return self.coeffs[-1] if self.coeffs else self.ring.zero()

    def coefficient(self, k: int):
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else self.ring.zero()

    def low_order(self) -> int:
        """Largest k with x^k dividing self (the order at x = 0)."""
        for k, c in enumerate(self.coeffs):
            if not c.is_zero():
                return k
        raise FieldError("order of the zero polynomial")

    def _other(self, other) -> Optional['Polynomial']:
        if isinstance(other, Polynomial):
            return other
        try:
            return Polynomial.constant(self.ring, other)
        except (TypeError, FieldError):
            return None

    def __add__(self, other):
        other = self._other(other)
        if other is None:
            return NotImplemented
        n = max(len(self.coeffs), len(other.coeffs))
        return Polynomial(self.ring, _strip(self.coefficient(k) + other.coefficient(k) for k in range(n)))

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(self.ring, tuple(-c for c in self.coeffs))

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
            return Polynomial(self.ring, _strip(c * other for c in self.coeffs))
        other = self._other(other)
        if other is None:
            return NotImplemented
        if self.is_zero() or other.is_zero():
            return Polynomial(self.ring, ())
        product = [self.ring.zero()] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a.is_zero():
                continue
            for j, b in enumerate(other.coeffs):
                product[i + j] = product[i + j] + a * b
        return Polynomial(self.ring, _strip(product))

    __rmul__ = __mul__

    def __pow__(self, exponent: int):
        if exponent < 0:
            raise FieldError("negative power of a polynomial")
        result = Polynomial.constant(self.ring, self.ring.one())
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            exponent >>= 1
            if exponent:
                base = base * base
        return result

    def shift(self, k: int) -> 'Polynomial':
        """Multiply by x^k (k >= 0) or divide exactly by x^{-k}."""
        if k >= 0:
            return Polynomial(self.ring, (self.ring.zero(),) * k + self.coeffs if self.coeffs else ())
        if any(not c.is_zero() for c in self.coeffs[:-k]):
            raise FieldError(f"polynomial is not divisible by x^{-k}")
        return Polynomial(self.ring, self.coeffs[-k:])

    def divmod(self, other: 'Polynomial') -> Tuple['Polynomial', 'Polynomial']:
        """Euclidean division; the divisor's leading coefficient must be invertible."""
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        inv = other.leading().inverse()
        remainder = list(self.coeffs)
        quotient = [self.ring.zero()] * max(len(remainder) - len(other.coeffs) + 1, 0)
        for k in range(len(quotient) - 1, -1, -1):
            c = remainder[k + other.degree] * inv
            quotient[k] = c
            if c.is_zero():
                continue
            for j, b in enumerate(other.coeffs):
                remainder[k + j] = remainder[k + j] - c * b
        return Polynomial(self.ring, _strip(quotient)), Polynomial(self.ring, _strip(remainder))

    def __floordiv__(self, other):
        return self.divmod(other)[0]

    def __mod__(self, other):
        return self.divmod(other)[1]

    def exact_divide(self, other: 'Polynomial') -> 'Polynomial':
        quotient, remainder = self.divmod(other)
        if not remainder.is_zero():
            raise FieldError("polynomial division is not exact")
        return quotient

    def monic(self) -> 'Polynomial':
        if self.is_zero():
            return self
        inv = self.leading().inverse()
        return Polynomial(self.ring, tuple(c * inv for c in self.coeffs))

    def gcd(self, other: 'Polynomial') -> 'Polynomial':
        """Monic greatest common divisor over a field."""
        a, b = self, other
        while not b.is_zero():
            a, b = b, a % b
        return a.monic()

    def derivative(self) -> 'Polynomial':
        return Polynomial(self.ring, _strip(c * k for k, c in enumerate(self.coeffs) if k > 0))

    def __call__(self, value):
        result = self.ring.zero()
        for c in reversed(self.coeffs):
            result = result * value + c
        return result

    evaluate = __call__

    def compose(self, other: 'Polynomial') -> 'Polynomial':
        result = Polynomial(self.ring, ())
        for c in reversed(self.coeffs):
            result = result * other + c
        return result

    def taylor_shift(self, a) -> 'Polynomial':
        """self(x + a)."""
        return self.compose(Polynomial.from_coeffs(self.ring, [a, self.ring.one()]))

    def reverse(self, n: Optional[int] = None) -> 'Polynomial':
        """x^n * self(1/x), with n = degree by default."""
        n = self.degree if n is None else n
        if n < self.degree:
            raise FieldError(f"cannot reverse a degree {self.degree} polynomial at {n}")
        padded = list(self.coeffs) + [self.ring.zero()] * (n + 1 - len(self.coeffs))
        return Polynomial(self.ring, _strip(reversed(padded)))

    def map_coeffs(self, fn: Callable, ring=None) -> 'Polynomial':
        ring = self.ring if ring is None else ring
        return Polynomial(ring, _strip(fn(c) for c in self.coeffs))

    def divide_by_p_power(self, k: int) -> 'Polynomial':
        return self.map_coeffs(lambda c: c.divide_by_p_power(k))

    def roots(self) -> List:
        """Roots in the (enumerable) coefficient field, without multiplicity."""
        if self.is_zero():
            raise FieldError("roots of the zero polynomial")
        return [a for a in self.ring.elements() if self(a).is_zero()]

    def __str__(self) -> str:
        return self.format('x')

    def format(self, var: str) -> str:
        terms = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[k]
            if c.is_zero():
                continue
            text = str(c)
            if k == 0:
                terms.append(text)
                continue
            monomial = var if k == 1 else f"{var}^{k}"
            if text == "1":
                terms.append(monomial)
            elif any(op in text for op in "+-*"):
                terms.append(f"({text})*{monomial}")
            else:
                terms.append(f"{text}*{monomial}")
        return "+".join(terms) if terms else "0"

