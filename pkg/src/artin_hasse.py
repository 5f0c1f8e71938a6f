"""
The Artin-Hasse series F(u) = exp(-sum_s u^{p^s}/p^s) and the splitting

    prod_{i < n, p does not divide i} W_{r_i}(k')  ->  V_(n) = (1 + u k'[[u]])^x / (1 + u^n k'[[u]])^x,
    (a_i)_i  ->  prod_i E(a_i u^i),   E(a u^i) = F(a_0 u^i) F(a_1 u^{ip}) F(a_2 u^{ip^2}) ...

with its greedy inverse.
"""
import threading
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Tuple

from sympy import mobius

from algebra import FieldElement, FieldSpec, PrincipalUnit, p_adic_valuation
from utils.logging_config import get_logger
from utils.validation import RamificationError, ValidationError, require_positive, require_prime
from witt import WittVector

logger = get_logger(__name__)


class ArtinHasseError(RamificationError):
    """A coefficient of F(u) had a denominator divisible by p."""
    pass


_series_cache: Dict[Tuple[int, int], Tuple[int, ...]] = {}
_series_lock = threading.Lock()


def _reduce_mod_p(value: Fraction, p: int, index: int) -> int:
    if value.denominator % p == 0:
        raise ArtinHasseError(
            f"coefficient {index} of F(u) has denominator {value.denominator} divisible by {p}"
        )
    return value.numerator * pow(value.denominator, -1, p) % p


def artin_hasse_rational(p: int, N: int) -> List[Fraction]:
    """First N coefficients of F(u) over Q, via n e_n = sum_k k a_k e_{n-k} with a = -sum u^{p^s}/p^s."""
    log_coeffs = [Fraction(0)] * N
    power = 1
    while power < N:
        log_coeffs[power] = Fraction(-1, power)
        power *= p
    exp_coeffs = [Fraction(1)] + [Fraction(0)] * (N - 1)
    for n in range(1, N):
        total = Fraction(0)
        power = 1
        while power <= n:
            total += power * log_coeffs[power] * exp_coeffs[n - power]
            power *= p
        exp_coeffs[n] = total / n
    return exp_coeffs[:N]


def artin_hasse_F(p: int, N: int) -> Tuple[int, ...]:
    """
    First N coefficients of F(u) reduced mod p (integers in [0, p)).

    Computed once per (p, N) over exact rationals.

    Raises:
        ArtinHasseError: if a denominator divisible by p appears
    """
    require_prime(p)
    require_positive(N, "N")
    key = (p, N)
    with _series_lock:
        cached = _series_cache.get(key)
        if cached is None:
            rational = artin_hasse_rational(p, N)
            cached = tuple(_reduce_mod_p(c, p, k) for k, c in enumerate(rational))
            _series_cache[key] = cached
        return cached


def _binomial_series(alpha: Fraction, step: int, N: int) -> List[Fraction]:
    """(1 - u^step)^alpha to N terms."""
    out = [Fraction(0)] * N
    coeff = Fraction(1)
    k = 0
    while k * step < N:
        out[k * step] = coeff * (-1) ** k
        coeff = coeff * (alpha - k) / (k + 1)
        k += 1
    return out


def mobius_product_series(p: int, N: int) -> Tuple[int, ...]:
    """
    F(u) as prod_{(n, p) = 1} (1 - u^n)^{mu(n)/n}, to N terms, reduced mod p.

    An independent route used to cross-check artin_hasse_F.
    """
    product = [Fraction(1)] + [Fraction(0)] * (N - 1)
    for n in range(1, N):
        if n % p == 0:
            continue
        mu = int(mobius(n))
        if mu == 0:
            continue
        factor = _binomial_series(Fraction(mu, n), n, N)
        product = [
            sum((product[i] * factor[k - i] for i in range(k + 1) if factor[k - i]), Fraction(0))
            for k in range(N)
        ]
    return tuple(_reduce_mod_p(c, p, k) for k, c in enumerate(product))


def slot_length(i: int, n: int, p: int) -> int:
    """r_i: the least r with p^r * i >= n."""
    r = 0
    while p ** r * i < n:
        r += 1
    return r


def slot_indices(n: int, p: int) -> List[int]:
    """All i with 1 <= i < n and p not dividing i."""
    return [i for i in range(1, n) if i % p]


def _F_of_monomial(spec: FieldSpec, b: FieldElement, j: int, level: int) -> PrincipalUnit:
    """F(b u^j) modulo u^level."""
    coeffs = [spec.zero()] * (level - 1)
    if b.is_zero():
        return PrincipalUnit(spec, level, tuple(coeffs))
    terms = (level - 1) // j + 1
    series = artin_hasse_F(spec.p, terms)
    power = spec.one()
    for k in range(1, terms):
        power = power * b
        if series[k]:
            coeffs[k * j - 1] = power * series[k]
    return PrincipalUnit(spec, level, tuple(coeffs))


def unit_from_witt(a: WittVector, i: int, n: int) -> PrincipalUnit:
    """
    E(a u^i) = prod_s F(a_s u^{i p^s}) modulo u^n.

    Args:
        a: Witt vector of length r_i over the working field
        i: Exponent, 1 <= i < n, not divisible by p
        n: Level

    Raises:
        ValidationError: if p divides i, i is out of range, or a has the wrong length
    """
    p = a.p
    if i % p == 0:
        raise ValidationError(f"slot index {i} is divisible by p = {p}")
    if not 1 <= i < n:
        raise ValidationError(f"slot index {i} outside 1..{n - 1}")
    expected = slot_length(i, n, p)
    if a.length != expected:
        raise ValidationError(f"slot {i} at level {n} needs a Witt vector of length {expected}, got {a.length}")
    spec = a.components[0].spec
    unit = PrincipalUnit.one(spec, n)
    for s, component in enumerate(a.components):
        unit = unit * _F_of_monomial(spec, component, i * p ** s, n)
    return unit


@dataclass(frozen=True)
class UnitDecomposition:
    """Slot vectors (i -> a_i in W_{r_i}) of a principal unit at level n; zero slots are omitted."""

    spec: FieldSpec
    level: int
    slots: Dict[int, WittVector] = field(default_factory=dict)

    @property
    def p(self) -> int:
        return self.spec.p

    def slot(self, i: int) -> WittVector:
        if i in self.slots:
            return self.slots[i]
        return WittVector.zero(self.p, slot_length(i, self.level, self.p), self.spec.zero())

    def slot_lengths(self) -> Dict[int, int]:
        return {i: slot_length(i, self.level, self.p) for i in slot_indices(self.level, self.p)}

    def to_dict(self) -> dict:
        return {
            "level": self.level,
            "slots": [
                {"i": i, "witt": [str(c) for c in self.slots[i].components]}
                for i in sorted(self.slots)
            ],
        }


def decompose_unit(v: PrincipalUnit) -> UnitDecomposition:
    """
    Greedy inverse of the splitting: peel F(b u^j) off at the lowest nonzero index j.

    Each j factors uniquely as i p^s with p not dividing i; b fills component s of slot i.
    """
    spec, n, p = v.spec, v.level, v.spec.p
    components: Dict[int, List[FieldElement]] = {}
    remaining = v
    while True:
        j = remaining.lowest_term()
        if j >= n:
            break
        b = -remaining.coefficient(j)
        s = p_adic_valuation(j, p)
        i = j // p ** s
        slot = components.setdefault(i, [spec.zero()] * slot_length(i, n, p))
        slot[s] = b
        remaining = remaining / _F_of_monomial(spec, b, j, n)
    return UnitDecomposition(
        spec=spec,
        level=n,
        slots={i: WittVector(p, tuple(c)) for i, c in sorted(components.items())},
    )


def reassemble(decomposition: UnitDecomposition) -> PrincipalUnit:
    """prod_i E(a_i u^i) at the decomposition's level."""
    unit = PrincipalUnit.one(decomposition.spec, decomposition.level)
    for i, a in decomposition.slots.items():
        unit = unit * unit_from_witt(a, i, decomposition.level)
    return unit


def add_decompositions(first: UnitDecomposition, second: UnitDecomposition) -> UnitDecomposition:
    """Slotwise Witt addition (the group law transported from V_(n))."""
    if first.level != second.level or first.spec != second.spec:
        raise ValidationError("decompositions of different levels or fields")
    slots = {}
    for i in sorted(set(first.slots) | set(second.slots)):
        total = first.slot(i) + second.slot(i)
        if not total.is_zero():
            slots[i] = total
    return UnitDecomposition(first.spec, first.level, slots)


def transition(decomposition: UnitDecomposition, level: int) -> UnitDecomposition:
    """
    The projection V_(N) -> V_(level) on slot vectors: keep slots i < level and
    restrict each to its length at the new level.
    """
    if level > decomposition.level:
        raise ValidationError(f"cannot move from level {decomposition.level} up to {level}")
    p = decomposition.p
    slots = {}
    for i, a in decomposition.slots.items():
        if i >= level:
            continue
        restricted = a.restrict_to(slot_length(i, level, p))
        if not restricted.is_zero():
            slots[i] = restricted
    return UnitDecomposition(decomposition.spec, level, slots)
