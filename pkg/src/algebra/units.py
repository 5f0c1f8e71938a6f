"""
Principal units (1 + u k'[[u]])^x / (1 + u^n k'[[u]])^x.
"""
from dataclasses import dataclass
from typing import Sequence

from utils.validation import ValidationError

from .finite_field import FieldElement, FieldSpec
from .laurent import LaurentSeries


@dataclass(frozen=True)
class PrincipalUnit:
    """A unit 1 + c_1 u + ... + c_{n-1} u^{n-1} at level n (terms from u^n on discarded)."""

    spec: FieldSpec
    level: int
    coeffs: tuple  # c_1, ..., c_{n-1}

    def __post_init__(self):
        if self.level < 1:
            raise ValidationError(f"unit level must be >= 1, got {self.level}")
        if len(self.coeffs) != self.level - 1:
            raise ValidationError(f"a level-{self.level} unit has {self.level - 1} free coefficients")

    @classmethod
    def one(cls, spec: FieldSpec, level: int) -> 'PrincipalUnit':
        return cls(spec, level, (spec.zero(),) * (level - 1))

    @classmethod
    def from_coefficients(cls, spec: FieldSpec, level: int, coeffs: Sequence) -> 'PrincipalUnit':
        """Coefficients of u^1, u^2, ...; missing ones are zero, extra ones discarded."""
        values = [spec.element(c) for c in list(coeffs)[:level - 1]]
        values += [spec.zero()] * (level - 1 - len(values))
        return cls(spec, level, tuple(values))

    @classmethod
    def from_series(cls, series: LaurentSeries, level: int) -> 'PrincipalUnit':
        """Reduce a series with constant term 1 modulo u^level."""
        if series.valuation != 0 or not series.coeffs[0].is_one():
            raise ValidationError("a principal unit needs valuation 0 and constant term 1")
        if series.absolute_precision < level:
            raise ValidationError(
                f"series known modulo u^{series.absolute_precision}, level {level} requested"
            )
        return cls(series.ring, level, tuple(series.coefficient(k) for k in range(1, level)))

    def to_series(self) -> LaurentSeries:
        return LaurentSeries.build(self.spec, 0, (self.spec.one(),) + self.coeffs)

    def coefficient(self, k: int) -> FieldElement:
        if k == 0:
            return self.spec.one()
        return self.coeffs[k - 1]

    def is_one(self) -> bool:
        return all(c.is_zero() for c in self.coeffs)

    def lowest_term(self) -> int:
        """Least j >= 1 with c_j != 0, or the level if the unit is 1."""
        for k, c in enumerate(self.coeffs, start=1):
            if not c.is_zero():
                return k
        return self.level

    def truncate(self, level: int) -> 'PrincipalUnit':
        if level > self.level:
            raise ValidationError(f"cannot raise a unit from level {self.level} to {level}")
        return PrincipalUnit(self.spec, level, self.coeffs[:level - 1])

    def __mul__(self, other: 'PrincipalUnit') -> 'PrincipalUnit':
        if not isinstance(other, PrincipalUnit):
            return NotImplemented
        if other.level != self.level or other.spec != self.spec:
            raise ValidationError("units of different levels or fields")
        product = self.to_series() * other.to_series()
        return PrincipalUnit.from_series(product, self.level)

    def inverse(self) -> 'PrincipalUnit':
        return PrincipalUnit.from_series(self.to_series().inverse(), self.level)

    def __truediv__(self, other: 'PrincipalUnit') -> 'PrincipalUnit':
        return self * other.inverse()

    def __str__(self) -> str:
        terms = ["1"]
        for k, c in enumerate(self.coeffs, start=1):
            if c.is_zero():
                continue
            monomial = "u" if k == 1 else f"u^{k}"
            terms.append(monomial if c.is_one() else f"{c}*{monomial}")
        return " + ".join(terms) + f" mod u^{self.level}"
