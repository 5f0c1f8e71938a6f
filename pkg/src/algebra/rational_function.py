"""
Rational functions in one variable over F_{p^d}, points of P^1, and their localizations.
"""
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

from .finite_field import FieldElement, FieldError, FieldSpec
from .polynomial import Polynomial


@dataclass(frozen=True)
class PointOfP1:
    """A k'-rational point of P^1: a finite point a, or infinity (value None)."""

    value: Optional[FieldElement] = None

    @classmethod
    def finite(cls, a: FieldElement) -> 'PointOfP1':
        return cls(a)

    @classmethod
    def infinity(cls) -> 'PointOfP1':
        return cls(None)

    @property
    def is_infinity(self) -> bool:
        return self.value is None

    def sort_key(self) -> Tuple[int, int]:
        """Finite points by field index, infinity last."""
        return (1, 0) if self.value is None else (0, self.value.to_index())

    def __str__(self) -> str:
        return "inf" if self.value is None else str(self.value)


@dataclass(frozen=True)
class RationalFunction:
    """
    numerator / denominator with monic denominator and gcd 1.

    Build through RationalFunction.fraction() or the arithmetic operators;
    the raw constructor does not normalize.
    """

    numerator: Polynomial
    denominator: Polynomial

    @property
    def spec(self) -> FieldSpec:
        return self.numerator.ring

    @property
    def characteristic(self) -> int:
        return self.spec.p

    @classmethod
    def fraction(cls, numerator: Polynomial, denominator: Polynomial) -> 'RationalFunction':
        if denominator.is_zero():
            raise FieldError("division by the zero polynomial")
        if numerator.is_zero():
            return cls.zero(numerator.ring)
        g = numerator.gcd(denominator)
        if g.degree > 0:
            numerator, denominator = numerator.exact_divide(g), denominator.exact_divide(g)
        lead = denominator.leading()
        if not lead.is_one():
            inv = lead.inverse()
            numerator, denominator = numerator * Polynomial.constant(numerator.ring, inv), denominator.monic()
        return cls(numerator, denominator)

    @classmethod
    def from_polynomial(cls, poly: Polynomial) -> 'RationalFunction':
        return cls(poly, Polynomial.constant(poly.ring, poly.ring.one()))

    @classmethod
    def constant(cls, spec: FieldSpec, value) -> 'RationalFunction':
        return cls.from_polynomial(Polynomial.constant(spec, value))

    @classmethod
    def zero(cls, spec: FieldSpec) -> 'RationalFunction':
        return cls.constant(spec, 0)

    @classmethod
    def one(cls, spec: FieldSpec) -> 'RationalFunction':
        return cls.constant(spec, 1)

    @classmethod
    def x(cls, spec: FieldSpec) -> 'RationalFunction':
        return cls.from_polynomial(Polynomial.x(spec))

    def is_zero(self) -> bool:
        return self.numerator.is_zero()

    def is_constant(self) -> bool:
        return self.numerator.is_constant() and self.denominator.is_constant()

    def is_polynomial(self) -> bool:
        return self.denominator.degree == 0

    @property
    def degree(self) -> int:
        """deg num - deg den (minus the order at infinity)."""
        if self.is_zero():
            raise FieldError("degree of the zero function")
        return self.numerator.degree - self.denominator.degree

    def _other(self, other) -> Optional['RationalFunction']:
        if isinstance(other, RationalFunction):
            return other
        if isinstance(other, Polynomial):
            return RationalFunction.from_polynomial(other)
        if isinstance(other, (int, FieldElement)):
            return RationalFunction.constant(self.spec, other)
        return None

    def __add__(self, other):
        other = self._other(other)
        if other is None:
            return NotImplemented
        if self.denominator == other.denominator:
            return RationalFunction.fraction(self.numerator + other.numerator, self.denominator)
        return RationalFunction.fraction(
            self.numerator * other.denominator + other.numerator * self.denominator,
            self.denominator * other.denominator,
        )

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(-self.numerator, self.denominator)

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
            return RationalFunction.fraction(self.numerator * other, self.denominator)
        other = self._other(other)
        if other is None:
            return NotImplemented
        return RationalFunction.fraction(
            self.numerator * other.numerator, self.denominator * other.denominator
        )

    __rmul__ = __mul__

    def inverse(self) -> 'RationalFunction':
        if self.is_zero():
            raise FieldError("inverse of the zero function")
        return RationalFunction.fraction(self.denominator, self.numerator)

    def __truediv__(self, other):
        other = self._other(other)
        if other is None:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._other(other)
        if other is None:
            return NotImplemented
        return other * self.inverse()

    def __pow__(self, exponent: int):
        if exponent < 0:
            return self.inverse() ** (-exponent)
        return RationalFunction(self.numerator ** exponent, self.denominator ** exponent)

    def derivative(self) -> 'RationalFunction':
        """Formal derivative d/dx."""
        num, den = self.numerator, self.denominator
        return RationalFunction.fraction(
            num.derivative() * den - num * den.derivative(), den * den
        )

    def evaluate(self, a: FieldElement) -> FieldElement:
        value = self.denominator(a)
        if value.is_zero():
            raise FieldError(f"function has a pole at {a}")
        return self.numerator(a) / value

    def map_coeffs(self, fn) -> 'RationalFunction':
        """Apply a field automorphism to every coefficient."""
        return RationalFunction.fraction(self.numerator.map_coeffs(fn), self.denominator.map_coeffs(fn))

    def localize(self, at: PointOfP1) -> 'RationalFunction':
        """
        The same function in the uniformizer u at `at`: u = x - a, or u = 1/x at infinity.
        """
        if at.is_infinity:
            n, d = self.numerator, self.denominator
            if n.is_zero():
                return self
            top = max(n.degree, d.degree)
            return RationalFunction.fraction(n.reverse(top), d.reverse(top))
        return RationalFunction.fraction(
            self.numerator.taylor_shift(at.value), self.denominator.taylor_shift(at.value)
        )

    def ord_at(self, at: PointOfP1) -> int:
        """Order of vanishing at a point (negative for poles)."""
        if self.is_zero():
            raise FieldError("order of the zero function")
        if at.is_infinity:
            return -self.degree
        local = self.localize(at)
        return local.numerator.low_order() - local.denominator.low_order()

    def critical_points(self) -> Tuple[List[PointOfP1], bool]:
        """
        Points where the function has a zero or a pole, infinity included.

        Returns:
            (points, rational) where `rational` is False if some zero or pole is
            not defined over the working field
        """
        points = set()
        rational = True
        for poly in (self.numerator, self.denominator):
            if poly.degree <= 0:
                continue
            roots = poly.roots()
            points.update(PointOfP1.finite(a) for a in roots)
            residual = poly
            for a in roots:
                linear = Polynomial.from_coeffs(poly.ring, [-a, 1])
                while (residual % linear).is_zero():
                    residual = residual // linear
            if residual.degree > 0:
                rational = False
        if not self.is_zero() and self.degree != 0:
            points.add(PointOfP1.infinity())
        return sorted(points, key=PointOfP1.sort_key), rational

    def zeros_and_poles(self) -> Dict[PointOfP1, int]:
        """Nonzero orders at rational points (the divisor, when all points are rational)."""
        points, _ = self.critical_points()
        orders = {pt: self.ord_at(pt) for pt in points}
        return {pt: n for pt, n in orders.items() if n != 0}

    def format(self, var: str) -> str:
        num = self.numerator.format(var)
        if self.denominator.degree == 0:
            return num
        den = self.denominator.format(var)
        num = f"({num})" if "+" in num else num
        return f"{num}/({den})"

    def __str__(self) -> str:
        return self.format('x')
