"""
Conductors of torsors over a local field L = k'((u)).

Supported groups and their resolutions:

    W_m[F^r]   0 -> W_m[F^r] -> W_m --F^r--> W_m -> 0     (alpha_{p^r} = W_1[F^r])
    Z/p^m      0 -> Z/p^m    -> W_m --F-1--> W_m -> 0
    mu_n       Kummer classes g in L^x / (L^x)^n

A class is stored through global data (Witt vectors of rational functions)
together with the point whose completion is L. Reduction subtracts exact
monomials b pi^e with pi the uniformizer at that point, so representatives
stay rational and the only truncated series are the expansions used by
the filtration test.
"""
import itertools
import random
import re
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from algebra import (
    FieldElement,
    FieldSpec,
    PointOfP1,
    PrecisionError,
    RationalFunction,
    laurent_expand,
    parse_rational,
    parse_witt_literal,
)
from config import get_config
from localsym import LocalWittElement, ZeroFunctionError, fil_level
from utils.logging_config import OperationLogger, get_logger
from utils.validation import (
    GROUP_PATTERNS,
    RamificationError,
    ValidationError,
    raise_for_result,
    require_prime,
    validate_group_literal,
)
from witt import WittVector

logger = get_logger(__name__)

LOCAL_LOCAL = "local-local"
ETALE_ASW = "etale-asw"
KUMMER = "kummer"


class ReductionError(RamificationError):
    """Greedy class reduction did not terminate within the step limit."""
    pass


class UnsupportedGroupError(RamificationError):
    """The group is well formed but not one of the supported group schemes for this p."""
    pass


@dataclass(frozen=True)
class GroupSpec:
    """
    A finite group scheme of supported shape.

    Args:
        variant: LOCAL_LOCAL, ETALE_ASW or KUMMER
        p: The prime
        factors: (m_j, r_j) for each factor W_{m_j}[F^{r_j}] (local-local only)
        m: Witt length of Z/p^m (etale only)
        n: Exponent of mu_n (Kummer only)
    """

    variant: str
    p: int
    factors: Tuple[Tuple[int, int], ...] = ()
    m: int = 0
    n: int = 0

    def __post_init__(self):
        require_prime(self.p)
        cap = get_config().witt.max_length_cap
        if self.variant == LOCAL_LOCAL:
            if not self.factors:
                raise ValidationError("a local-local group needs at least one factor")
            for m, r in self.factors:
                if m < 1 or r < 1:
                    raise ValidationError(f"W{m}[F^{r}] needs m >= 1 and r >= 1")
                if m > cap:
                    raise ValidationError(f"W{m}[F^{r}] exceeds the Witt length cap {cap}")
        elif self.variant == ETALE_ASW:
            if not 1 <= self.m <= cap:
                raise ValidationError(f"Z/p^m needs 1 <= m <= {cap}, got m = {self.m}")
        elif self.variant == KUMMER:
            if self.n < 2:
                raise ValidationError(f"mu_n needs n >= 2, got {self.n}")
        else:
            raise ValidationError(f"unknown group variant {self.variant!r}")

    @property
    def lengths(self) -> Tuple[int, ...]:
        """Witt length of each factor's representative."""
        if self.variant == LOCAL_LOCAL:
            return tuple(m for m, _ in self.factors)
        if self.variant == ETALE_ASW:
            return (self.m,)
        return ()

    def resolutions(self) -> List['ResolutionSpec']:
        if self.variant == LOCAL_LOCAL:
            return [ResolutionSpec(self.p, m, r) for m, r in self.factors]
        if self.variant == ETALE_ASW:
            return [ResolutionSpec(self.p, self.m, 0)]
        return []

    def __str__(self) -> str:
        if self.variant == LOCAL_LOCAL:
            return "x".join(f"W{m}[F^{r}]" for m, r in self.factors)
        if self.variant == ETALE_ASW:
            return f"Z/p^{self.m}"
        return f"mu_{self.n}"


def parse_group(text: str, p: int) -> GroupSpec:
    """
    Parse "W2[F^1]", "alpha_p", "alpha_p^2", products joined by "x",
    "Z/p^m" (or "Z/4" for p^m = 4) and "mu_n".
    """
    raise_for_result(validate_group_literal(text))
    w_pattern, alpha_pattern, z_pattern, mu_pattern = GROUP_PATTERNS
    factors = []
    for part in (piece.strip() for piece in text.split("x")):
        if match := w_pattern.match(part):
            factors.append((int(match.group(1)), int(match.group(2))))
        elif match := alpha_pattern.match(part):
            factors.append((1, int(match.group(1) or 1)))
        elif match := z_pattern.match(part):
            if match.group(1) is not None:
                m = int(match.group(1))
            else:
                order = int(match.group(2))
                m = 0
                while p ** m < order:
                    m += 1
                if p ** m != order or m == 0:
                    raise UnsupportedGroupError(f"Z/{order} is not Z/p^m for p = {p}")
            return GroupSpec(ETALE_ASW, p, m=m)
        elif match := mu_pattern.match(part):
            return GroupSpec(KUMMER, p, n=int(match.group(1)))
    return GroupSpec(LOCAL_LOCAL, p, factors=tuple(factors))


@dataclass(frozen=True)
class ResolutionSpec:
    """
    0 -> G -> W_m -> W_m -> 0 with the map F^r (r >= 1), or F - 1 when r = 0.

    The admissibility of these resolutions is taken as known and not recomputed.
    """

    p: int
    m: int
    r: int

    @property
    def is_artin_schreier(self) -> bool:
        return self.r == 0

    def apply(self, h: WittVector) -> WittVector:
        """F^r(h), or F(h) - h for the Artin-Schreier-Witt resolution."""
        if self.is_artin_schreier:
            return h.frobenius() - h
        return h.frobenius_power(self.r)

    def apply_diagonal(self, a: WittVector, b: WittVector) -> Tuple[WittVector, WittVector]:
        """The composite resolution W_m^2 -> W_m^2, (a, b) -> (F^r a, b - a)."""
        return self.apply(a), b - a

    def __str__(self) -> str:
        if self.is_artin_schreier:
            return f"W{self.m} --F-1--> W{self.m}"
        return f"W{self.m} --F^{self.r}--> W{self.m}"


def uniformizer_power(spec: FieldSpec, at: PointOfP1, e: int) -> RationalFunction:
    """pi^e for pi = x - a at a finite point and pi = 1/x at infinity."""
    x = RationalFunction.x(spec)
    if at.is_infinity:
        return x ** (-e)
    return (x - RationalFunction.constant(spec, at.value)) ** e


def principal_terms(f: RationalFunction, at: PointOfP1) -> Dict[int, FieldElement]:
    """Exact principal part of f at a point, {e: coefficient} with e < 0."""
    if f.is_zero():
        return {}
    order = f.ord_at(at)
    if order >= 0:
        return {}
    return laurent_expand(f, at, -order).terms()


def pole_order(f: RationalFunction, at: PointOfP1) -> int:
    return 0 if f.is_zero() else max(0, -f.ord_at(at))


@dataclass(frozen=True)
class LocalTorsorClass:
    """
    A class in H^1(L, G) for L the completion at `at`.

    Args:
        group: The group
        at: The point of P^1 whose completion is L
        representatives: One Witt vector of rational functions per factor
            (local-local and etale groups)
        unit: The Kummer representative g (mu_n only)
        variable: Name used when printing representatives ("u" for local input)
    """

    group: GroupSpec
    at: PointOfP1
    representatives: Tuple[WittVector, ...] = ()
    unit: Optional[RationalFunction] = None
    variable: str = field(default="x", compare=False)

    def __post_init__(self):
        if self.group.variant == KUMMER:
            if self.unit is None or self.unit.is_zero():
                raise ZeroFunctionError("a Kummer class needs a nonzero function")
            return
        lengths = tuple(v.length for v in self.representatives)
        if lengths != self.group.lengths:
            raise ValidationError(
                f"group {self.group} needs representatives of lengths {self.group.lengths}, got {lengths}"
            )

    @classmethod
    def from_functions(
        cls,
        group: GroupSpec,
        data: Sequence[Sequence[RationalFunction]],
        at: PointOfP1,
        variable: str = "x",
    ) -> 'LocalTorsorClass':
        vectors = tuple(WittVector(group.p, tuple(components)) for components in data)
        return cls(group, at, vectors, variable=variable)

    @classmethod
    def kummer(cls, group: GroupSpec, g: RationalFunction, at: PointOfP1, variable: str = "x") -> 'LocalTorsorClass':
        return cls(group, at, unit=g, variable=variable)

    @property
    def spec(self) -> FieldSpec:
        if self.unit is not None:
            return self.unit.spec
        return self.representatives[0].components[0].spec

    def local(self, index: int = 0) -> LocalWittElement:
        """Expansion of one factor's representative at the point."""
        return LocalWittElement.from_rational(self.group.p, self.representatives[index].components, self.at)

    def is_integral(self) -> bool:
        return all(
            pole_order(f, self.at) == 0 for v in self.representatives for f in v.components
        )

    def with_representatives(self, representatives: Sequence[WittVector]) -> 'LocalTorsorClass':
        return LocalTorsorClass(self.group, self.at, tuple(representatives), self.unit, self.variable)

    def __add__(self, other: 'LocalTorsorClass') -> 'LocalTorsorClass':
        if (self.group, self.at) != (other.group, other.at):
            raise ValidationError("classes of different groups or points")
        if self.group.variant == KUMMER:
            return LocalTorsorClass(self.group, self.at, unit=self.unit * other.unit, variable=self.variable)
        return self.with_representatives(
            [a + b for a, b in zip(self.representatives, other.representatives)]
        )

    def __sub__(self, other: 'LocalTorsorClass') -> 'LocalTorsorClass':
        if (self.group, self.at) != (other.group, other.at):
            raise ValidationError("classes of different groups or points")
        if self.group.variant == KUMMER:
            return LocalTorsorClass(self.group, self.at, unit=self.unit / other.unit, variable=self.variable)
        return self.with_representatives(
            [a - b for a, b in zip(self.representatives, other.representatives)]
        )

    def format_representatives(self) -> List[List[str]]:
        if self.unit is not None:
            return [[self.unit.format(self.variable)]]
        return [[f.format(self.variable) for f in v.components] for v in self.representatives]


def _monomial_vector(spec: FieldSpec, p: int, m: int, i: int, b: FieldElement, e: int, at: PointOfP1) -> WittVector:
    """V^i [b pi^e] in W_m."""
    zero = RationalFunction.zero(spec)
    components = [zero] * m
    components[i] = uniformizer_power(spec, at, e) * RationalFunction.constant(spec, b)
    return WittVector(p, tuple(components))


def greedy_reduce(vector: WittVector, at: PointOfP1, resolution: ResolutionSpec) -> Tuple[WittVector, List[WittVector]]:
    """
    Remove every principal term b pi^e that is an image of the resolution map.

    Components are cleared in ascending order, most negative exponent first:
    F^r moves need p^r | e and subtract F^r(V^i[b^{1/p^r} pi^{e/p^r}]); F - 1
    moves need p | e and subtract F(h) - h for h = V^i[b^{1/p} pi^{e/p}].
    A move changes component i only at exponent e (and at e/p for F - 1)
    and never touches earlier components.

    Returns:
        (reduced vector, the list of h subtracted through the resolution)

    Raises:
        ReductionError: if the step limit is exceeded
    """
    p, m = vector.p, vector.length
    spec = vector.components[0].spec
    power = p if resolution.is_artin_schreier else p ** resolution.r
    roots = 1 if resolution.is_artin_schreier else resolution.r
    limit = get_config().conductor.max_reduction_steps
    moves: List[WittVector] = []
    i = 0
    while i < m:
        terms = principal_terms(vector.components[i], at)
        reducible = sorted(e for e in terms if e % power == 0)
        if not reducible:
            i += 1
            continue
        e = reducible[0]
        h = _monomial_vector(spec, p, m, i, terms[e].pth_root(roots), e // power, at)
        vector = vector - resolution.apply(h)
        moves.append(h)
        if len(moves) > limit:
            raise ReductionError(f"class reduction exceeded {limit} steps at {at}")
    return vector, moves


def reduce_class(c: LocalTorsorClass) -> LocalTorsorClass:
    """
    Greedy pole reduction of each factor's representative.

    Raises:
        ValidationError: for Kummer classes
    """
    if c.group.variant == KUMMER:
        raise ValidationError("reduce_class applies to local-local and etale classes")
    with OperationLogger(logger, "reduce_class", p=c.group.p):
        reduced = [
            greedy_reduce(vector, c.at, resolution)[0]
            for vector, resolution in zip(c.representatives, c.group.resolutions())
        ]
    return c.with_representatives(reduced)


def kummer_local_conductor(g: RationalFunction, n: int, at: PointOfP1) -> int:
    """1 if n does not divide ord_x(g), else 0."""
    if g.is_zero():
        raise ZeroFunctionError("a Kummer class needs a nonzero function")
    return 0 if g.ord_at(at) % n == 0 else 1


def _asw_formula(vector: WittVector, at: PointOfP1) -> int:
    p, m = vector.p, vector.length
    poles = [pole_order(f, at) for f in vector.components]
    if not any(poles):
        return 0
    return 1 + max(p ** (m - 1 - i) * d for i, d in enumerate(poles))


def asw_conductor(c: LocalTorsorClass) -> int:
    """
    The Artin-Schreier-Witt conductor: 0 if unramified, else 1 + max_i p^{m-1-i} d_i
    over the reduced representative.
    """
    if c.group.variant != ETALE_ASW:
        raise ValidationError(f"asw_conductor needs a Z/p^m class, got {c.group}")
    reduced = reduce_class(c)
    return _asw_formula(reduced.representatives[0], c.at)


def _fil_level_of(vector: WittVector, at: PointOfP1) -> int:
    """fil_level of the expansion at a point, doubling the precision on a shortfall."""
    cfg = get_config()
    factor = cfg.symbol.precision_factor
    for attempt in range(cfg.conductor.precision_retries + 1):
        try:
            if attempt == 0:
                return fil_level(LocalWittElement.from_rational(vector.p, vector.components, at))
            with cfg.override("symbol", precision_factor=factor):
                return fil_level(LocalWittElement.from_rational(vector.p, vector.components, at))
        except PrecisionError:
            if attempt == cfg.conductor.precision_retries:
                raise
            logger.info(f"fil_level at {at}: precision factor {factor} too small, doubling")
            factor *= 2


def local_conductor(c: LocalTorsorClass) -> int:
    """
    The least n with the class in fil_n H^1(L, G).

    Local-local groups: reduce, then the maximum over factors of fil_level of
    the reduced representative. Etale and Kummer groups use their classical
    formulas.
    """
    if c.group.variant == KUMMER:
        return kummer_local_conductor(c.unit, c.group.n, c.at)
    if c.group.variant == ETALE_ASW:
        return asw_conductor(c)
    reduced = reduce_class(c)
    with OperationLogger(logger, "local_conductor", p=c.group.p):
        return max(_fil_level_of(v, c.at) for v in reduced.representatives)


def conductor_via_resolution(c: LocalTorsorClass) -> int:
    """fil_level of the reduced representative; for Z/p^m this cross-checks asw_conductor."""
    if c.group.variant == KUMMER:
        raise ValidationError("Kummer classes have no Witt resolution here")
    reduced = reduce_class(c)
    return max(_fil_level_of(v, c.at) for v in reduced.representatives)


def pushforward_conductor(c: LocalTorsorClass) -> int:
    """
    Conductor of the pushforward along W_m[F^r] -> W_m[F^{r+1}]: representative
    F(f), computed through the resolution F^{r+1}.
    """
    if c.group.variant != LOCAL_LOCAL:
        raise ValidationError(f"pushforward_conductor needs a local-local class, got {c.group}")
    group = GroupSpec(LOCAL_LOCAL, c.group.p, tuple((m, r + 1) for m, r in c.group.factors))
    pushed = LocalTorsorClass(
        group, c.at, tuple(v.frobenius() for v in c.representatives), variable=c.variable
    )
    return local_conductor(pushed)


def diagonal_resolution_conductor(
    c: LocalTorsorClass, rng: Optional[random.Random] = None, max_pole: int = 3
) -> int:
    """
    Conductor through 0 -> G -> W_m^2 -> W_m^2, (a, b) -> (F^r a, b - a).

    The class of f is (f, 0) modulo the image. The representative
    (f, 0) + (F^r a, b - a), with random a and b of poles <= max_pole when an
    rng is given, is carried to W_m / F^r W_m along (x, y) -> x + F^r y, which
    identifies the two cokernels. The resulting representative f + F^r b is
    reduced and measured on its own, so a reduction that depends on the
    starting representative shows up as a disagreement with local_conductor.
    """
    if c.group.variant != LOCAL_LOCAL:
        raise ValidationError(f"diagonal_resolution_conductor needs a local-local class, got {c.group}")
    levels = []
    for vector, resolution in zip(c.representatives, c.group.resolutions()):
        zero = WittVector.zero(vector.p, vector.length, RationalFunction.zero(c.spec))
        if rng is None:
            a, b = zero, zero
        else:
            a = _random_principal_vector(rng, c.spec, vector.p, vector.length, c.at, max_pole)
            b = _random_principal_vector(rng, c.spec, vector.p, vector.length, c.at, max_pole)
        image_a, image_b = resolution.apply_diagonal(a, b)
        first, second = vector + image_a, zero + image_b
        collapsed = first + resolution.apply(second)
        reduced, _ = greedy_reduce(collapsed, c.at, resolution)
        levels.append(_fil_level_of(reduced, c.at))
    return max(levels)


def exhaustive_local_conductor(f: RationalFunction, at: PointOfP1, r: int, pole_bound: int) -> int:
    """
    Brute-force conductor of the alpha_{p^r} class of f: the minimum of fil_level(f + h^{p^r})
    over every h = sum_{k <= bound} c_k pi^{-k} with coefficients in k'.

    Raises:
        ValidationError: if the search space exceeds the enumeration limit
    """
    spec = f.spec
    p = spec.p
    size = spec.q ** pole_bound
    limit = get_config().field.enumeration_limit
    if size > limit:
        raise ValidationError(f"exhaustive search over {size} candidates exceeds the limit {limit}")
    basis = [uniformizer_power(spec, at, -k) for k in range(1, pole_bound + 1)]
    elements = list(spec.elements())
    best = None
    with OperationLogger(logger, "exhaustive_local_conductor", p=p):
        for coefficients in itertools.product(elements, repeat=pole_bound):
            h = RationalFunction.zero(spec)
            for c, monomial in zip(coefficients, basis):
                if not c.is_zero():
                    h = h + monomial * RationalFunction.constant(spec, c)
            candidate = f + h ** (p ** r)
            level = _fil_level_of(WittVector(p, (candidate,)), at)
            best = level if best is None else min(best, level)
    return best


def classes_equal(first: LocalTorsorClass, second: LocalTorsorClass) -> bool:
    """Equality of classes modulo the resolution image and integral representatives."""
    if first.group.variant == KUMMER:
        raise ValidationError("classes_equal applies to local-local and etale classes")
    difference = first - second
    return reduce_class(difference).is_integral()


def _random_principal_part(rng, spec: FieldSpec, at: PointOfP1, max_pole: int) -> RationalFunction:
    f = RationalFunction.zero(spec)
    for k in range(1, max_pole + 1):
        c = spec.random_element(rng)
        if not c.is_zero():
            f = f + uniformizer_power(spec, at, -k) * RationalFunction.constant(spec, c)
    return f


def _random_principal_vector(rng, spec: FieldSpec, p: int, m: int, at: PointOfP1, max_pole: int) -> WittVector:
    return WittVector(p, tuple(_random_principal_part(rng, spec, at, max_pole) for _ in range(m)))


def random_local_class(rng, group: GroupSpec, spec: FieldSpec, at: PointOfP1, max_pole: int) -> LocalTorsorClass:
    """A random class whose components are principal parts with poles <= max_pole."""
    data = [[_random_principal_part(rng, spec, at, max_pole) for _ in range(m)] for m in group.lengths]
    return LocalTorsorClass.from_functions(group, data, at)


def parse_class(text: str, group: GroupSpec, spec: FieldSpec, at: PointOfP1) -> LocalTorsorClass:
    """
    Parse the representative of a class: Witt literals per factor separated by ';'
    (a bare expression stands for a length-1 vector), or one expression for mu_n.
    """
    variable = "u" if re.search(r"u", text) else "x"
    if group.variant == KUMMER:
        return LocalTorsorClass.kummer(group, parse_rational(text, spec), at, variable)
    parts = [part.strip() for part in text.split(";")]
    if len(parts) != len(group.lengths):
        raise ValidationError(f"group {group} needs {len(group.lengths)} representatives, got {len(parts)}")
    data = [
        parse_witt_literal(part, spec) if part.startswith("[") else [parse_rational(part, spec)]
        for part in parts
    ]
    return LocalTorsorClass.from_functions(group, data, at, variable)
