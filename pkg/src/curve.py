"""
Global geometry on X = P^1: points, moduli, differentials f dx, orders, d and the Cartier operator.
"""
from dataclasses import dataclass
from typing import Dict, Iterable, List, Mapping, Tuple

from algebra import FieldSpec, PointOfP1, Polynomial, RationalFunction, parse_rational
from utils.logging_config import get_logger
from utils.validation import RamificationError, ValidationError, raise_for_result, validate_modulus_literal

logger = get_logger(__name__)


class NonRationalPointError(RamificationError):
    """A zero or pole is not defined over the working field."""
    pass


class ZeroFormError(RamificationError):
    """An order was requested for the zero differential."""
    pass


def parse_point(text: str, spec: FieldSpec) -> PointOfP1:
    """Parse "inf" or a constant expression (a field element)."""
    text = text.strip()
    if text.lower() in ("inf", "infinity", "∞"):
        return PointOfP1.infinity()
    value = parse_rational(text, spec)
    if not value.is_constant():
        raise ValidationError(f"point {text!r} is not a field element")
    return PointOfP1.finite(value.numerator.coefficient(0))


def parse_points(text: str, spec: FieldSpec) -> List[PointOfP1]:
    """Comma-separated point list, e.g. "0,1,inf"."""
    points = [parse_point(part, spec) for part in text.split(",") if part.strip()]
    if len(set(points)) != len(points):
        raise ValidationError(f"repeated point in {text!r}")
    return sorted(points, key=PointOfP1.sort_key)


@dataclass(frozen=True)
class Modulus:
    """An effective divisor sum n_x x on P^1, stored in canonical point order."""

    support: Tuple[Tuple[PointOfP1, int], ...] = ()

    @classmethod
    def from_dict(cls, multiplicities: Mapping[PointOfP1, int]) -> 'Modulus':
        for point, n in multiplicities.items():
            if n < 0:
                raise ValidationError(f"negative multiplicity {n} at {point}")
        items = sorted(((pt, n) for pt, n in multiplicities.items() if n > 0), key=lambda e: e[0].sort_key())
        return cls(tuple(items))

    @classmethod
    def parse(cls, text: str, spec: FieldSpec) -> 'Modulus':
        """Parse "pt:mult,pt:mult,..." (empty string: the zero modulus)."""
        raise_for_result(validate_modulus_literal(text))
        multiplicities = {}
        for entry in (e.strip() for e in text.split(",") if e.strip()):
            point, _, mult = entry.rpartition(":")
            multiplicities[parse_point(point, spec)] = int(mult)
        return cls.from_dict(multiplicities)

    def as_dict(self) -> Dict[PointOfP1, int]:
        return dict(self.support)

    def multiplicity(self, point: PointOfP1) -> int:
        return self.as_dict().get(point, 0)

    @property
    def points(self) -> List[PointOfP1]:
        return [pt for pt, _ in self.support]

    @property
    def degree(self) -> int:
        return sum(n for _, n in self.support)

    def is_zero(self) -> bool:
        return not self.support

    def inf(self, other: 'Modulus') -> 'Modulus':
        """Pointwise minimum."""
        mine, theirs = self.as_dict(), other.as_dict()
        return Modulus.from_dict({pt: min(n, theirs.get(pt, 0)) for pt, n in mine.items()})

    def sup(self, other: 'Modulus') -> 'Modulus':
        """Pointwise maximum."""
        merged = self.as_dict()
        for pt, n in other.support:
            merged[pt] = max(merged.get(pt, 0), n)
        return Modulus.from_dict(merged)

    def __le__(self, other: 'Modulus') -> bool:
        theirs = other.as_dict()
        return all(n <= theirs.get(pt, 0) for pt, n in self.support)

    def __lt__(self, other: 'Modulus') -> bool:
        return self <= other and self != other

    def reduced(self) -> 'Modulus':
        """m_red: every multiplicity set to 1."""
        return Modulus.from_dict({pt: 1 for pt in self.points})

    def to_list(self) -> List[dict]:
        return [{"point": str(pt), "multiplicity": n} for pt, n in self.support]

    def __str__(self) -> str:
        return ",".join(f"{pt}:{n}" for pt, n in self.support)


@dataclass(frozen=True)
class DifferentialForm:
    """The form f dx."""

    coefficient: RationalFunction

    @property
    def spec(self) -> FieldSpec:
        return self.coefficient.spec

    def is_zero(self) -> bool:
        return self.coefficient.is_zero()

    def __add__(self, other: 'DifferentialForm') -> 'DifferentialForm':
        return DifferentialForm(self.coefficient + other.coefficient)

    def __sub__(self, other: 'DifferentialForm') -> 'DifferentialForm':
        return DifferentialForm(self.coefficient - other.coefficient)

    def scale(self, h: RationalFunction) -> 'DifferentialForm':
        """h * omega."""
        return DifferentialForm(self.coefficient * h)

    def ord_at(self, point: PointOfP1) -> int:
        return ord_at(self, point)

    def divisor(self) -> Dict[PointOfP1, int]:
        """(omega) as {point: order}; every zero and pole must be k'-rational."""
        if self.is_zero():
            raise ZeroFormError("the zero form has no divisor")
        points, rational = self.coefficient.critical_points()
        if not rational:
            raise NonRationalPointError(
                f"{self} has a zero or pole outside {self.spec}; enlarge d"
            )
        points = set(points) | {PointOfP1.infinity()}
        orders = {pt: ord_at(self, pt) for pt in sorted(points, key=PointOfP1.sort_key)}
        return {pt: n for pt, n in orders.items() if n != 0}

    def degree(self) -> int:
        return sum(self.divisor().values())

    def __str__(self) -> str:
        return f"({self.coefficient})*dx"


def ord_at(omega: DifferentialForm, point: PointOfP1) -> int:
    """
    Order of f dx at a point: ord_a(f) at a finite point, ord_inf(f) - 2 at
    infinity (dx = -u^-2 du for u = 1/x).

    Raises:
        ZeroFormError: for the zero form
    """
    if omega.is_zero():
        raise ZeroFormError("order of the zero form")
    order = omega.coefficient.ord_at(point)
    return order - 2 if point.is_infinity else order


def d(f: RationalFunction) -> DifferentialForm:
    """The exterior derivative df = f' dx."""
    return DifferentialForm(f.derivative())


def _pth_root_part(poly: Polynomial, residue: int, p: int) -> Polynomial:
    """P_i with P = sum_i P_i(x)^p x^i: take the exponents = i mod p and p-th roots of their coefficients."""
    coeffs = [c.pth_root() for k, c in enumerate(poly.coeffs) if k % p == residue]
    return Polynomial.from_coeffs(poly.ring, coeffs)


def cartier(omega: DifferentialForm) -> DifferentialForm:
    """
    The Cartier operator: if f = sum_{i<p} g_i^p x^i then C(f dx) = g_{p-1} dx.

    Writing f = N/D = (N D^{p-1}) / D^p and splitting N D^{p-1} by exponent
    residue gives g_{p-1} = (N D^{p-1})_{p-1}^{1/p} / D over any denominator.
    """
    f = omega.coefficient
    if f.is_zero():
        return omega
    p = f.spec.p
    numerator = f.numerator * f.denominator ** (p - 1)
    top = _pth_root_part(numerator, p - 1, p)
    return DifferentialForm(RationalFunction.fraction(top, f.denominator))


def is_alpha_p_form(omega: DifferentialForm) -> bool:
    """Membership in the kernel of the Cartier operator."""
    return cartier(omega).is_zero()
