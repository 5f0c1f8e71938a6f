"""
Truncated p-typical Witt vectors over an arbitrary coefficient domain.

Two evaluation routes share one interface:
    - universal sum / product / negation polynomials over Z, built by the
      ghost recursion and cached per (p, m); valid over any commutative domain
      (integers, rational functions, Laurent series, ...), lengths up to the
      configured cap;
    - for components in F_{p^d}, the ring isomorphism W_m(F_q) = GR(p^m, d),
      (a_0, a_1, ...) -> sum p^i [a_i^{p^-i}], which has no length cap.
"""
import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from sympy import Poly, symbols
from sympy.polys.domains import ZZ

from algebra import (
    FieldElement,
    FieldError,
    GaloisRing,
    GaloisRingElement,
    LaurentSeries,
    Polynomial,
    RationalFunction,
)
from config import get_config
from utils.logging_config import OperationLogger, get_logger
from utils.validation import RamificationError

logger = get_logger(__name__)


class WittDomainError(RamificationError):
    """Operation undefined on the given coefficient domain (or mismatched operands)."""
    pass


class WittDivisibilityError(RamificationError):
    """Ghost inversion met a value that is not divisible by the required power of p."""
    pass


Terms = Tuple[Tuple[int, Tuple[int, ...]], ...]


@dataclass(frozen=True)
class WittLaw:
    """Universal polynomials for W_m, as (coefficient, exponent vector) term lists.

    Exponent vectors index X_0..X_{m-1} then Y_0..Y_{m-1}.
    """

    p: int
    m: int
    sum: Tuple[Terms, ...]
    product: Tuple[Terms, ...]
    negation: Tuple[Terms, ...]


def _ghost_polys(p: int, vector: Sequence[Poly], n: int) -> Poly:
    return sum((p ** i * vector[i] ** (p ** (n - i)) for i in range(1, n + 1)), vector[0] ** (p ** n))


def _invert_ghost(p: int, m: int, targets: Callable[[int], Poly], verify: bool) -> List[Poly]:
    components: List[Poly] = []
    for n in range(m):
        lower = [p ** i * components[i] ** (p ** (n - i)) for i in range(n)]
        accumulated = sum(lower[1:], lower[0]) if lower else None
        target = targets(n)
        remainder = target - accumulated if accumulated is not None else target
        component = remainder.exquo_ground(p ** n)
        if verify:
            rebuilt = p ** n * component + accumulated if accumulated is not None else component
            if rebuilt != target:
                raise WittDomainError(f"ghost identity failed for component {n} (p={p}, m={m})")
        components.append(component)
    return components


def _to_terms(poly: Poly) -> Terms:
    return tuple((int(coeff), tuple(monom)) for monom, coeff in poly.terms())


def build_witt_law(p: int, m: int) -> WittLaw:
    """Compute the universal polynomials for W_m over Z by the ghost recursion."""
    xs = symbols(f'X0:{m}')
    ys = symbols(f'Y0:{m}')
    gens = xs + ys
    X = [Poly(v, *gens, domain=ZZ) for v in xs]
    Y = [Poly(v, *gens, domain=ZZ) for v in ys]
    verify = get_config().witt.verify_laws and m <= 4

    with OperationLogger(logger, "build_witt_law", p=p, m=m):
        sums = _invert_ghost(p, m, lambda n: _ghost_polys(p, X, n) + _ghost_polys(p, Y, n), verify)
        products = _invert_ghost(p, m, lambda n: _ghost_polys(p, X, n) * _ghost_polys(p, Y, n), verify)
        negations = _invert_ghost(p, m, lambda n: -_ghost_polys(p, X, n), verify)

    return WittLaw(
        p=p,
        m=m,
        sum=tuple(_to_terms(s) for s in sums),
        product=tuple(_to_terms(s) for s in products),
        negation=tuple(_to_terms(s) for s in negations),
    )


class WittLawCache:
    """Write-once, read-many store of WittLaw objects keyed by (p, m)."""

    def __init__(self):
        self._laws: Dict[Tuple[int, int], WittLaw] = {}
        self._lock = threading.Lock()

    def get(self, p: int, m: int) -> WittLaw:
        with self._lock:
            law = self._laws.get((p, m))
            if law is None:
                law = build_witt_law(p, m)
                self._laws[(p, m)] = law
            return law

    def clear(self):
        with self._lock:
            self._laws.clear()


law_cache = WittLawCache()


def _domain_key(x) -> tuple:
    if isinstance(x, bool):
        return ('bool',)
    if isinstance(x, int):
        return ('Z',)
    if isinstance(x, Fraction):
        return ('Q',)
    if isinstance(x, FieldElement):
        return ('F', x.spec)
    if isinstance(x, GaloisRingElement):
        return ('GR', x.ring)
    if isinstance(x, LaurentSeries):
        return ('L', x.ring)
    if isinstance(x, RationalFunction):
        return ('R', x.spec)
    if isinstance(x, Polynomial):
        return ('P', x.ring)
    return (type(x).__name__,)


def _is_zero(x) -> bool:
    if isinstance(x, (int, Fraction)):
        return x == 0
    return x.is_zero()


def _evaluate(terms: Terms, values: Sequence, p: int, char_p: bool, zero):
    result = None
    powers: Dict[Tuple[int, int], object] = {}
    for coeff, monom in terms:
        if char_p:
            coeff %= p
            if coeff == 0:
                continue
        term = None
        for var, e in enumerate(monom):
            if not e:
                continue
            key = (var, e)
            if key not in powers:
                powers[key] = values[var] ** e
            term = powers[key] if term is None else term * powers[key]
        if term is None:
            term = zero + coeff
        elif coeff != 1:
            term = term * coeff
        result = term if result is None else result + term
    return zero if result is None else result


@dataclass(frozen=True)
class WittVector:
    """
    A length-m Witt vector (a_0, ..., a_{m-1}).

    Args:
        p: The prime
        components: Coefficients, all from one domain
    """

    p: int
    components: Tuple

    def __post_init__(self):
        components = tuple(self.components)
        object.__setattr__(self, 'components', components)
        if not components:
            raise WittDomainError("a Witt vector needs length >= 1")
        keys = {_domain_key(c) for c in components}
        if len(keys) != 1:
            raise WittDomainError(f"components from different domains: {sorted(k[0] for k in keys)}")

    @property
    def length(self) -> int:
        return len(self.components)

    @property
    def domain(self) -> tuple:
        return _domain_key(self.components[0])

    @property
    def characteristic(self) -> int:
        return getattr(self.components[0], 'characteristic', 0)

    @property
    def in_characteristic_p(self) -> bool:
        return self.characteristic == self.p

    def _zero_component(self):
        return self.components[0] * 0

    @classmethod
    def zero(cls, p: int, m: int, zero_element=0) -> 'WittVector':
        return cls(p, (zero_element,) * m)

    @classmethod
    def teichmuller(cls, x, m: int, p: int) -> 'WittVector':
        """[x] = (x, 0, ..., 0)."""
        return cls(p, (x,) + (x * 0,) * (m - 1))

    def is_zero(self) -> bool:
        return all(_is_zero(c) for c in self.components)

    def map(self, fn: Callable) -> 'WittVector':
        """Apply a ring homomorphism to every component."""
        return WittVector(self.p, tuple(fn(c) for c in self.components))

    def _check(self, other: 'WittVector'):
        if not isinstance(other, WittVector):
            raise WittDomainError(f"cannot combine a Witt vector with {type(other).__name__}")
        if other.p != self.p or other.length != self.length:
            raise WittDomainError(
                f"length/prime mismatch: W_{self.length} (p={self.p}) vs W_{other.length} (p={other.p})"
            )
        if other.domain != self.domain:
            raise WittDomainError("coefficient domains differ")

    def _law(self) -> WittLaw:
        cap = get_config().witt.max_length_cap
        if self.length > cap:
            raise WittDomainError(
                f"length {self.length} exceeds the universal-polynomial cap {cap} for this domain"
            )
        return law_cache.get(self.p, self.length)

    @property
    def _uses_field_route(self) -> bool:
        return self.domain[0] == 'F'

    def _apply(self, laws: Tuple[Terms, ...], values: Sequence) -> 'WittVector':
        zero = self._zero_component()
        char_p = self.in_characteristic_p
        return WittVector(
            self.p, tuple(_evaluate(terms, values, self.p, char_p, zero) for terms in laws)
        )

    def __add__(self, other: 'WittVector') -> 'WittVector':
        self._check(other)
        if self._uses_field_route:
            return from_galois(to_galois(self) + to_galois(other), self.length)
        return self._apply(self._law().sum, self.components + other.components)

    def __neg__(self) -> 'WittVector':
        if self._uses_field_route:
            return from_galois(-to_galois(self), self.length)
        if self.p != 2 and self.in_characteristic_p:
            return WittVector(self.p, tuple(-c for c in self.components))
        padded = self.components + (self._zero_component(),) * self.length
        return self._apply(self._law().negation, padded)

    def __sub__(self, other: 'WittVector') -> 'WittVector':
        self._check(other)
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            return self.times(other)
        self._check(other)
        if self._uses_field_route:
            return from_galois(to_galois(self) * to_galois(other), self.length)
        return self._apply(self._law().product, self.components + other.components)

    __rmul__ = __mul__

    def times(self, n: int) -> 'WittVector':
        """The integer multiple n.a."""
        if self._uses_field_route:
            return from_galois(to_galois(self).scale(n), self.length)
        if n < 0:
            return (-self).times(-n)
        result = WittVector.zero(self.p, self.length, self._zero_component())
        base = self
        while n:
            if n & 1:
                result = result + base
            n >>= 1
            if n:
                base = base + base
        return result

    def frobenius(self) -> 'WittVector':
        """F(a) = (a_0^p, a_1^p, ...), defined over F_p-algebras only."""
        if not self.in_characteristic_p:
            raise WittDomainError(
                "frobenius is only defined here for components in a characteristic-p domain"
            )
        return WittVector(self.p, tuple(_frobenius_component(c, self.p) for c in self.components))

    def frobenius_power(self, r: int) -> 'WittVector':
        result = self
        for _ in range(r):
            result = result.frobenius()
        return result

    def verschiebung(self) -> 'WittVector':
        """V(a) = (0, a_0, ..., a_{m-2})."""
        return WittVector(self.p, (self._zero_component(),) + self.components[:-1])

    def verschiebung_power(self, s: int) -> 'WittVector':
        result = self
        for _ in range(s):
            result = result.verschiebung()
        return result

    def restrict(self) -> 'WittVector':
        """R(a) = (a_0, ..., a_{m-2})."""
        if self.length == 1:
            raise WittDomainError("cannot restrict a length-1 Witt vector")
        return WittVector(self.p, self.components[:-1])

    def restrict_to(self, length: int) -> 'WittVector':
        return WittVector(self.p, self.components[:length])

    def extend(self, length: int) -> 'WittVector':
        """Pad with zero components up to `length`."""
        return WittVector(self.p, self.components + (self._zero_component(),) * (length - self.length))

    def ghost(self) -> Tuple:
        """Ghost components w_n = sum_{i<=n} p^i a_i^{p^{n-i}}."""
        if self.in_characteristic_p:
            raise WittDomainError("ghost components need a torsion-free coefficient domain")
        return ghost_components(self.components, self.p)

    def __str__(self) -> str:
        return "[" + ", ".join(str(c) for c in self.components) + "]"


def _frobenius_component(c, p: int):
    if isinstance(c, FieldElement):
        return c.frobenius()
    if isinstance(c, LaurentSeries):
        return c.frobenius()
    return c ** p


def ghost_components(components: Sequence, p: int) -> Tuple:
    ghosts = []
    for n in range(len(components)):
        total = components[0] ** (p ** n)
        for i in range(1, n + 1):
            total = total + components[i] ** (p ** (n - i)) * (p ** i)
        ghosts.append(total)
    return tuple(ghosts)


def _divide_exact(x, k: int, p: int, index: int):
    if k == 0:
        return x
    if isinstance(x, int):
        q, r = divmod(x, p ** k)
        if r:
            raise WittDivisibilityError(f"ghost inversion: component {index}: {x} is not divisible by {p}^{k}")
        return q
    if isinstance(x, Fraction):
        return x / p ** k
    try:
        return x.divide_by_p_power(k)
    except FieldError as exc:
        raise WittDivisibilityError(f"ghost inversion: component {index}: {exc}") from exc


def unghost(ghosts: Sequence, p: int) -> WittVector:
    """
    Invert the ghost map: a_n = (w_n - sum_{i<n} p^i a_i^{p^{n-i}}) / p^n, exactly.

    Raises:
        WittDivisibilityError: if a division is not exact (never rounds)

    Example:
        >>> unghost([2, 2], 2).components
        (2, -1)
    """
    components = []
    for n, w in enumerate(ghosts):
        remainder = w
        for i in range(n):
            remainder = remainder - components[i] ** (p ** (n - i)) * (p ** i)
        components.append(_divide_exact(remainder, n, p, n))
    return WittVector(p, tuple(components))


def to_galois(a: WittVector) -> GaloisRingElement:
    """(a_0, ..., a_{m-1}) over F_q -> sum p^i [a_i^{p^-i}] in GR(p^m, d)."""
    spec = a.components[0].spec
    ring = GaloisRing(spec, a.length)
    total = ring.zero()
    for i, c in enumerate(a.components):
        total = total + ring.teichmuller(c.pth_root(i)).scale(a.p ** i)
    return total


def from_galois(x: GaloisRingElement, m: int) -> WittVector:
    """Inverse of to_galois: peel Teichmuller digits."""
    ring = x.ring
    p = ring.p
    components = []
    for i in range(m):
        digit = x.reduce()
        components.append(digit ** (p ** i))
        if i < m - 1:
            x = (x - ring.teichmuller(digit)).divide_by_p_power(1)
    return WittVector(p, tuple(components))


def universal_add(a: WittVector, b: WittVector) -> WittVector:
    """Sum through the universal polynomials, whatever the domain (used to cross-check routes)."""
    a._check(b)
    return a._apply(a._law().sum, a.components + b.components)


def universal_mul(a: WittVector, b: WittVector) -> WittVector:
    a._check(b)
    return a._apply(a._law().product, a.components + b.components)


def witt_add(a: WittVector, b: WittVector) -> WittVector:
    return a + b


def witt_mul(a: WittVector, b: WittVector) -> WittVector:
    return a * b


def frobenius(a: WittVector) -> WittVector:
    return a.frobenius()


def verschiebung(a: WittVector) -> WittVector:
    return a.verschiebung()


def restrict(a: WittVector) -> WittVector:
    return a.restrict()


def ghost(a: WittVector) -> Tuple:
    return a.ghost()


def frobenius_kernel_contains(a: WittVector, r: int, truncation: Optional[int] = None) -> bool:
    """
    Whether F^r(a) = 0.

    Over a field this holds only for a = 0. With `truncation` N, polynomial
    components are read in k'[x]/(x^N), where a_i^{p^r} vanishes iff
    p^r * ord_0(a_i) >= N.
    """
    if truncation is None:
        return a.frobenius_power(r).is_zero()
    if not a.in_characteristic_p:
        raise WittDomainError("frobenius kernel needs a characteristic-p domain")
    for c in a.components:
        if not isinstance(c, Polynomial):
            raise WittDomainError("truncated kernel test needs polynomial components")
        if not c.is_zero() and a.p ** r * c.low_order() < truncation:
            return False
    return True
