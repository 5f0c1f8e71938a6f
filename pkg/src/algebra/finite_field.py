"""
Finite fields k' = F_{p^d} = F_p[t]/(M(t)).

Elements are stored as dense residue polynomials in the galoistools layout
(coefficient lists, highest degree first, leading zeros stripped).
"""
import itertools
import random
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterator, Optional, Sequence, Tuple, Union

from sympy import isprime
from sympy.polys.domains import ZZ
from sympy.polys.galoistools import (
    gf_add,
    gf_from_int_poly,
    gf_gcdex,
    gf_mul,
    gf_neg,
    gf_pow_mod,
    gf_rem,
    gf_strip,
    gf_sub,
)

from config import get_config
from utils.validation import RamificationError, ValidationError


class FieldError(RamificationError):
    """Arithmetic error inside a finite field or Galois ring (division by zero, mismatch)."""
    pass


def _irreducible_by_search(modulus: Sequence[int], p: int) -> bool:
    """True if no monic polynomial of degree 1..deg/2 divides `modulus` over F_p."""
    degree = len(modulus) - 1
    for k in range(1, degree // 2 + 1):
        for tail in itertools.product(range(p), repeat=k):
            if not gf_rem(list(modulus), [1, *tail], p, ZZ):
                return False
    return True


@dataclass(frozen=True)
class FieldSpec:
    """
    The working field F_{p^d}.

    Args:
        p: Prime characteristic
        d: Extension degree
        modulus: Monic irreducible polynomial of degree d over F_p, coefficients
            highest degree first; required iff d > 1
    """

    p: int
    d: int = 1
    modulus: Optional[Tuple[int, ...]] = None

    def __post_init__(self):
        if not isinstance(self.p, int) or not isprime(self.p):
            raise ValidationError(f"p must be prime, got {self.p!r}")
        if self.d < 1:
            raise ValidationError(f"extension degree must be >= 1, got {self.d}")
        if self.d == 1:
            if self.modulus is not None and len(self.modulus) != 2:
                raise ValidationError("a degree-1 field takes no extension modulus")
            object.__setattr__(self, 'modulus', None)
            return
        if self.modulus is None:
            raise ValidationError(f"an extension modulus of degree {self.d} is required")
        modulus = tuple(int(c) % self.p for c in self.modulus)
        if len(modulus) != self.d + 1 or modulus[0] != 1:
            raise ValidationError(f"extension modulus must be monic of degree {self.d}")
        if not _irreducible_by_search(modulus, self.p):
            raise ValidationError(f"extension modulus {modulus} is reducible over F_{self.p}")
        object.__setattr__(self, 'modulus', modulus)

    @property
    def q(self) -> int:
        return self.p ** self.d

    @property
    def characteristic(self) -> int:
        return self.p

    @cached_property
    def _reducer(self) -> list:
        # Degree-1 fields reduce modulo t, which keeps only the constant term.
        return list(self.modulus) if self.modulus is not None else [1, 0]

    def element(self, value: Union[int, 'FieldElement', Sequence[int]]) -> 'FieldElement':
        """Coerce an integer, a coefficient list (highest degree first) or an element."""
        if isinstance(value, FieldElement):
            if value.spec != self:
                raise FieldError(f"element of {value.spec} used in {self}")
            return value
        if isinstance(value, int):
            return FieldElement(self, _normalize([value], self))
        return FieldElement(self, _normalize(list(value), self))

    coerce = element

    def zero(self) -> 'FieldElement':
        return FieldElement(self, ())

    def one(self) -> 'FieldElement':
        return FieldElement(self, (1,))

    def gen(self) -> 'FieldElement':
        """The residue class t of the extension modulus (equals 0 when d = 1)."""
        return self.element([1, 0])

    def from_index(self, index: int) -> 'FieldElement':
        """Element whose base-p digits (lowest first) are the coefficients t^0, t^1, ..."""
        digits = []
        for _ in range(self.d):
            index, digit = divmod(index, self.p)
            digits.append(digit)
        return self.element(list(reversed(digits)))

    def elements(self) -> Iterator['FieldElement']:
        """Enumerate the field (refuses fields above the configured enumeration limit)."""
        limit = get_config().field.enumeration_limit
        if self.q > limit:
            raise FieldError(f"F_{self.q} exceeds the enumeration limit {limit}")
        for index in range(self.q):
            yield self.from_index(index)

    def basis(self) -> Tuple['FieldElement', ...]:
        """F_p-basis 1, t, ..., t^{d-1}."""
        return tuple(self.element([1] + [0] * i) for i in range(self.d))

    def random_element(self, rng: random.Random, nonzero: bool = False) -> 'FieldElement':
        while True:
            value = self.from_index(rng.randrange(self.q))
            if not (nonzero and value.is_zero()):
                return value

    def __str__(self) -> str:
        if self.d == 1:
            return f"F_{self.p}"
        return f"F_{self.p}^{self.d}[{_format_poly(self.modulus, 't')}]"


def _normalize(coeffs: list, spec: FieldSpec) -> Tuple[int, ...]:
    reduced = gf_rem(gf_from_int_poly(coeffs, spec.p), spec._reducer, spec.p, ZZ)
    return tuple(int(c) for c in reduced)


def _format_poly(coeffs: Sequence[int], var: str) -> str:
    degree = len(coeffs) - 1
    terms = []
    for i, c in enumerate(coeffs):
        if c == 0:
            continue
        power = degree - i
        if power == 0:
            terms.append(str(c))
        else:
            monomial = var if power == 1 else f"{var}^{power}"
            terms.append(monomial if c == 1 else f"{c}*{monomial}")
    return "+".join(terms) if terms else "0"


@dataclass(frozen=True)
class FieldElement:
    """An element of F_{p^d}: a residue polynomial in t of degree < d."""

    spec: FieldSpec
    coeffs: Tuple[int, ...] = field(default=())

    @property
    def characteristic(self) -> int:
        return self.spec.p

    def _other(self, other) -> Optional['FieldElement']:
        if isinstance(other, FieldElement):
            if other.spec != self.spec:
                raise FieldError(f"cannot combine elements of {self.spec} and {other.spec}")
            return other
        if isinstance(other, int):
            return self.spec.element(other)
        return None

    def __add__(self, other):
        other = self._other(other)
        if other is None:
            return NotImplemented
        return FieldElement(self.spec, tuple(gf_add(list(self.coeffs), list(other.coeffs), self.spec.p, ZZ)))

    __radd__ = __add__

    def __neg__(self):
        return FieldElement(self.spec, tuple(gf_neg(list(self.coeffs), self.spec.p, ZZ)))

    def __sub__(self, other):
        other = self._other(other)
        if other is None:
            return NotImplemented
        return FieldElement(self.spec, tuple(gf_sub(list(self.coeffs), list(other.coeffs), self.spec.p, ZZ)))

    def __rsub__(self, other):
        other = self._other(other)
        if other is None:
            return NotImplemented
        return other - self

    def __mul__(self, other):
        other = self._other(other)
        if other is None:
            return NotImplemented
        product = gf_mul(list(self.coeffs), list(other.coeffs), self.spec.p, ZZ)
        return FieldElement(self.spec, tuple(gf_rem(product, self.spec._reducer, self.spec.p, ZZ)))

    __rmul__ = __mul__

    def inverse(self) -> 'FieldElement':
        if self.is_zero():
            raise FieldError("division by zero in a finite field")
        s, _, h = gf_gcdex(list(self.coeffs), self.spec._reducer, self.spec.p, ZZ)
        # h is the monic gcd, equal to 1 because the modulus is irreducible
        return FieldElement(self.spec, tuple(gf_strip(s)))

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
        if exponent == 0:
            return self.spec.one()
        if self.is_zero():
            return self
        powered = gf_pow_mod(list(self.coeffs), exponent, self.spec._reducer, self.spec.p, ZZ)
        return FieldElement(self.spec, tuple(powered))

    def __eq__(self, other):
        if isinstance(other, int):
            return self.coeffs == self.spec.element(other).coeffs
        if isinstance(other, FieldElement):
            return self.spec == other.spec and self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self):
        return hash((self.spec.p, self.spec.d, self.coeffs))

    def __bool__(self):
        return bool(self.coeffs)

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_one(self) -> bool:
        return self.coeffs == (1,)

    def frobenius(self) -> 'FieldElement':
        """The absolute Frobenius a -> a^p."""
        return self ** self.spec.p

    def pth_root(self, times: int = 1) -> 'FieldElement':
        """The unique a^{p^{-times}}: Frobenius has order d, so this is a^{p^{d - times mod d}}."""
        shift = (-times) % self.spec.d
        return self ** (self.spec.p ** shift)

    def to_index(self) -> int:
        """Inverse of FieldSpec.from_index."""
        index = 0
        for c in self.coeffs:
            index = index * self.spec.p + c
        return index

    def lift(self) -> Tuple[int, ...]:
        """Integer coefficients of t^0, ..., t^{d-1} (lowest degree first, padded)."""
        padded = (0,) * (self.spec.d - len(self.coeffs)) + self.coeffs
        return tuple(reversed(padded))

    def __str__(self) -> str:
        if self.spec.d == 1:
            return str(self.coeffs[0]) if self.coeffs else "0"
        return _format_poly(self.coeffs, 't')

    def __repr__(self) -> str:
        return f"FieldElement({self}, {self.spec})"
