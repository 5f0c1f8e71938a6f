"""
Truncated Laurent series c_v u^v + ... + c_{v+N-1} u^{v+N-1} + O(u^{v+N}).

Precision is tracked, never guessed: `precision` is the number of known terms
starting at the valuation, and every operation propagates it pessimistically.
The zero series is O(u^E), stored with valuation E and no coefficients.
"""
from dataclasses import dataclass
from typing import Any, Callable, Dict, Iterable, Tuple

from utils.validation import RamificationError

from .finite_field import FieldElement, FieldError
from .polynomial import Polynomial
from .rational_function import PointOfP1, RationalFunction


class PrecisionError(RamificationError):
    """A requested coefficient lies beyond the known precision."""
    pass


@dataclass(frozen=True)
class LaurentSeries:
    ring: Any
    valuation: int
    coeffs: Tuple = ()

    @property
    def precision(self) -> int:
        """Number of known terms from the valuation on."""
        return len(self.coeffs)

    @property
    def absolute_precision(self) -> int:
        """E such that the series is known modulo u^E."""
        return self.valuation + len(self.coeffs)

    @property
    def characteristic(self) -> int:
        return self.ring.characteristic

    @classmethod
    def build(cls, ring, start: int, coeffs: Iterable) -> 'LaurentSeries':
        """Series with coefficients of u^start, u^{start+1}, ...; leading zeros are absorbed."""
        coeffs = list(coeffs)
        k = 0
        while k < len(coeffs) and coeffs[k].is_zero():
            k += 1
        return cls(ring, start + k, tuple(coeffs[k:]))

    @classmethod
    def zero(cls, ring, absolute_precision: int) -> 'LaurentSeries':
        return cls(ring, absolute_precision, ())

    @classmethod
    def monomial(cls, ring, coefficient, exponent: int, absolute_precision: int) -> 'LaurentSeries':
        """c u^e + O(u^E)."""
        if absolute_precision <= exponent:
            return cls.zero(ring, absolute_precision)
        coefficient = ring.coerce(coefficient)
        tail = [ring.zero()] * (absolute_precision - exponent - 1)
        return cls.build(ring, exponent, [coefficient] + tail)

    @classmethod
    def from_polynomial(cls, poly: Polynomial, absolute_precision: int, shift: int = 0) -> 'LaurentSeries':
        """u^shift * poly(u) + O(u^E)."""
        size = max(absolute_precision - shift, 0)
        coeffs = [poly.coefficient(k) for k in range(size)]
        return cls.build(poly.ring, shift, coeffs)

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_integral(self) -> bool:
        """v >= 0, certified (a zero series must be known to order 0)."""
        return self.valuation >= 0

    def coefficient(self, k: int):
        if k >= self.absolute_precision:
            raise PrecisionError(
                f"coefficient of u^{k} requested, series known only modulo u^{self.absolute_precision}"
            )
        if k < self.valuation:
            return self.ring.zero()
        return self.coeffs[k - self.valuation]

    def leading(self):
        if not self.coeffs:
            raise PrecisionError("leading coefficient of a zero series")
        return self.coeffs[0]

    def truncate(self, absolute_precision: int) -> 'LaurentSeries':
        """Forget terms from u^E on."""
        if absolute_precision >= self.absolute_precision:
            return self
        if absolute_precision <= self.valuation:
            return LaurentSeries.zero(self.ring, absolute_precision)
        return LaurentSeries(self.ring, self.valuation, self.coeffs[:absolute_precision - self.valuation])

    def terms(self) -> Dict[int, Any]:
        """Known nonzero terms {exponent: coefficient}."""
        return {self.valuation + k: c for k, c in enumerate(self.coeffs) if not c.is_zero()}

    def principal_part(self) -> Dict[int, Any]:
        """Nonzero terms with negative exponent; requires precision through u^{-1}."""
        if self.absolute_precision < 0:
            raise PrecisionError("principal part needs the series known modulo u^0")
        return {e: c for e, c in self.terms().items() if e < 0}

    def integral_part(self) -> 'LaurentSeries':
        """The series with its principal part removed."""
        if self.valuation >= 0:
            return self
        if self.absolute_precision <= 0:
            return LaurentSeries.zero(self.ring, self.absolute_precision)
        return LaurentSeries.build(self.ring, 0, self.coeffs[-self.valuation:])

    def residue(self):
        """Coefficient of u^{-1} of the differential self * du."""
        if self.absolute_precision <= -1:
            raise PrecisionError(
                f"residue needs the series modulo u^0, known only modulo u^{self.absolute_precision}"
            )
        return self.coefficient(-1)

    def _other(self, other) -> 'LaurentSeries':
        if isinstance(other, LaurentSeries):
            if other.ring != self.ring:
                raise FieldError(f"cannot combine series over {self.ring} and {other.ring}")
            return other
        return None

    def __add__(self, other):
        if not isinstance(other, LaurentSeries):
            if isinstance(other, int) or getattr(other, 'is_zero', None):
                other = LaurentSeries.monomial(self.ring, other, 0, max(self.absolute_precision, 1))
            else:
                return NotImplemented
        other = self._other(other)
        top = min(self.absolute_precision, other.absolute_precision)
        start = min(self.valuation, other.valuation, top)
        coeffs = [self.coefficient(k) + other.coefficient(k) for k in range(start, top)]
        return LaurentSeries.build(self.ring, start, coeffs)

    __radd__ = __add__

    def __neg__(self):
        return LaurentSeries(self.ring, self.valuation, tuple(-c for c in self.coeffs))

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, scalar) -> 'LaurentSeries':
        """Multiply every coefficient by a ring element or integer."""
        return LaurentSeries.build(self.ring, self.valuation, [c * scalar for c in self.coeffs]) \
            if self.coeffs else self

    def __mul__(self, other):
        if not isinstance(other, LaurentSeries):
            if isinstance(other, int) or getattr(other, 'is_zero', None):
                return self.scale(other)
            return NotImplemented
        other = self._other(other)
        if self.is_zero() or other.is_zero():
            # O(u^a) * (b u^v + ...) is O(u^{a + v})
            return LaurentSeries.zero(self.ring, self.valuation + other.valuation)
        n = min(self.precision, other.precision)
        product = [self.ring.zero()] * n
        for i in range(n):
            a = self.coeffs[i]
            if a.is_zero():
                continue
            for j in range(n - i):
                product[i + j] = product[i + j] + a * other.coeffs[j]
        return LaurentSeries.build(self.ring, self.valuation + other.valuation, product)

    __rmul__ = __mul__

    def inverse(self) -> 'LaurentSeries':
        """1/self; the leading coefficient must be a unit."""
        if self.is_zero():
            raise PrecisionError("cannot invert a series with no known nonzero term")
        lead_inv = self.coeffs[0].inverse()
        n = self.precision
        inv = [lead_inv] + [self.ring.zero()] * (n - 1)
        for k in range(1, n):
            total = self.ring.zero()
            for j in range(1, k + 1):
                total = total + self.coeffs[j] * inv[k - j]
            inv[k] = -(total * lead_inv)
        return LaurentSeries(self.ring, -self.valuation, tuple(inv))

    def __truediv__(self, other):
        if isinstance(other, LaurentSeries):
            return self * other.inverse()
        return self.scale(self.ring.coerce(other).inverse())

    def __pow__(self, exponent: int):
        if exponent < 0:
            return self.inverse() ** (-exponent)
        if exponent == 0:
            return LaurentSeries.monomial(self.ring, self.ring.one(), 0, max(self.precision, 1))
        if self.characteristic == self.ring_prime() and exponent % self.characteristic == 0:
            return self.frobenius() ** (exponent // self.characteristic)
        result = None
        base = self
        while exponent:
            if exponent & 1:
                result = base if result is None else result * base
            exponent >>= 1
            if exponent:
                base = base * base
        return result

    def ring_prime(self) -> int:
        return getattr(self.ring, 'p', 0)

    def frobenius(self) -> 'LaurentSeries':
        """self^p in characteristic p: coefficients raised to p, exponents scaled by p."""
        p = self.characteristic
        if p != self.ring_prime():
            raise FieldError("frobenius of a series needs a characteristic-p coefficient field")
        if self.is_zero():
            return LaurentSeries.zero(self.ring, p * self.valuation)
        coeffs = [self.ring.zero()] * (p * self.precision)
        for k, c in enumerate(self.coeffs):
            coeffs[p * k] = c ** p
        return LaurentSeries.build(self.ring, p * self.valuation, coeffs)

    def derivative(self) -> 'LaurentSeries':
        """d/du; the absolute precision drops by one."""
        if self.is_zero():
            return LaurentSeries.zero(self.ring, self.valuation - 1)
        coeffs = [c * (self.valuation + k) for k, c in enumerate(self.coeffs)]
        return LaurentSeries.build(self.ring, self.valuation - 1, coeffs)

    def logarithmic_derivative(self) -> 'LaurentSeries':
        """(d self/du) / self."""
        return self.derivative() * self.inverse()

    def map_coeffs(self, fn: Callable, ring=None) -> 'LaurentSeries':
        ring = self.ring if ring is None else ring
        return LaurentSeries.build(ring, self.valuation, [fn(c) for c in self.coeffs])

    def divide_by_p_power(self, k: int) -> 'LaurentSeries':
        return self.map_coeffs(lambda c: c.divide_by_p_power(k))

    def teichmuller_lift(self, galois_ring) -> 'LaurentSeries':
        """Coefficientwise Teichmuller lift to a Galois ring."""
        return self.map_coeffs(galois_ring.teichmuller, galois_ring)

    def reduce(self, spec) -> 'LaurentSeries':
        """Coefficientwise reduction of a series over a Galois ring."""
        return self.map_coeffs(lambda c: c.reduce(), spec)

    def __eq__(self, other):
        if not isinstance(other, LaurentSeries):
            return NotImplemented
        return (self.ring, self.valuation, self.coeffs) == (other.ring, other.valuation, other.coeffs)

    def __hash__(self):
        return hash((self.valuation, self.coeffs))

    def __str__(self) -> str:
        terms = []
        for e, c in self.terms().items():
            text = str(c)
            text = f"({text})" if any(op in text for op in "+-*") else text
            if e == 0:
                terms.append(text)
            else:
                monomial = "u" if e == 1 else f"u^{e}"
                terms.append(monomial if text == "1" else f"{text}*{monomial}")
        terms.append(f"O(u^{self.absolute_precision})")
        return " + ".join(terms)


def power_series_quotient(numerator: Polynomial, denominator: Polynomial, n: int) -> list:
    """First n coefficients of numerator/denominator at 0, denominator(0) invertible."""
    d0_inv = denominator.coefficient(0).inverse()
    out = []
    for k in range(n):
        total = numerator.coefficient(k)
        for j in range(1, min(k, denominator.degree) + 1):
            total = total - denominator.coefficient(j) * out[k - j]
        out.append(total * d0_inv)
    return out


def laurent_expand(f: RationalFunction, at: PointOfP1, precision: int) -> LaurentSeries:
    """
    Expansion of f in the uniformizer u at `at` (u = x - a, or u = 1/x at infinity).

    Args:
        f: Rational function (the zero function gives the zero series O(u^precision))
        at: Point of P^1
        precision: Number of correct terms N counted from the valuation

    Returns:
        LaurentSeries with valuation ord_at(f) and N known terms

    Example:
        >>> laurent_expand(one / x, PointOfP1.infinity(), 5)   # u + O(u^6)
    """
    spec = f.spec
    if f.is_zero():
        return LaurentSeries.zero(spec, precision)
    local = f.localize(at)
    a = local.numerator.low_order()
    b = local.denominator.low_order()
    num = local.numerator.shift(-a)
    den = local.denominator.shift(-b)
    return LaurentSeries(spec, a - b, tuple(power_series_quotient(num, den, precision)))
