"""
Global torsor classes over U = P^1 - S and their minimal moduli.

Routes:
    alpha_p        differential: n_x = max(0, -ord_x(df))
    local-local    n_x = local conductor of the class at x
    Z/p^m          n_x = Artin-Schreier-Witt conductor at x
    mu_n           n_x = 1 iff n does not divide ord_x(g)

H^1(U, W_m[F^r]) is represented by Witt vectors of functions regular on U
modulo F^r, and H^1(U, Z/p^m) modulo F - 1 (coherent cohomology of the
affine U vanishes).
"""
import itertools
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple, Union

from algebra import FieldSpec, PointOfP1, RationalFunction
from conductor import (
    ETALE_ASW,
    KUMMER,
    LOCAL_LOCAL,
    GroupSpec,
    LocalTorsorClass,
    asw_conductor,
    kummer_local_conductor,
    local_conductor,
    uniformizer_power,
)
from curve import Modulus, d
from localsym import ZeroFunctionError
from utils.logging_config import OperationLogger, get_logger
from utils.validation import RamificationError, ValidationError, require_positive
from witt import WittVector

logger = get_logger(__name__)


class RegularityError(RamificationError):
    """Global data has a pole (or a zero, for Kummer data) outside S."""
    pass


def _bad_points(f: RationalFunction, S: Sequence[PointOfP1], zeros_too: bool) -> List[str]:
    """Points off S where f has a pole (and a zero when asked); "non-rational" for unsplit factors."""
    bad = []
    polys = [f.denominator, f.numerator] if zeros_too else [f.denominator]
    for poly in polys:
        if poly.degree <= 0:
            continue
        points, rational = RationalFunction.from_polynomial(poly).critical_points()
        if not rational:
            bad.append("non-rational")
        bad.extend(str(pt) for pt in points if not pt.is_infinity and pt not in S)
    infinity = PointOfP1.infinity()
    if infinity not in S and not f.is_zero():
        order = f.ord_at(infinity)
        if order < 0 or (zeros_too and order > 0):
            bad.append(str(infinity))
    return bad


@dataclass(frozen=True)
class GlobalTorsorClass:
    """
    A class in H^1_fppf(U, G) for U = P^1 - S.

    Args:
        group: The group
        S: The removed points, in canonical order
        data: Witt vectors of rational functions regular on U, one per factor
        unit: A function invertible on U (mu_n only)

    Raises:
        RegularityError: if the data is not regular (resp. invertible) on U
    """

    group: GroupSpec
    S: Tuple[PointOfP1, ...]
    data: Tuple[WittVector, ...] = ()
    unit: Optional[RationalFunction] = None

    def __post_init__(self):
        object.__setattr__(self, 'S', tuple(sorted(set(self.S), key=PointOfP1.sort_key)))
        if self.group.variant == KUMMER:
            if self.unit is None or self.unit.is_zero():
                raise ZeroFunctionError("a Kummer class needs a nonzero function")
            bad = _bad_points(self.unit, self.S, zeros_too=True)
            if bad:
                raise RegularityError(f"{self.unit} has zeros or poles off S at {', '.join(bad)}")
            return
        lengths = tuple(v.length for v in self.data)
        if lengths != self.group.lengths:
            raise ValidationError(f"group {self.group} needs data of lengths {self.group.lengths}, got {lengths}")
        for vector in self.data:
            for f in vector.components:
                bad = _bad_points(f, self.S, zeros_too=False)
                if bad:
                    raise RegularityError(f"{f} is not regular on U: poles at {', '.join(bad)}")

    @classmethod
    def from_functions(
        cls, group: GroupSpec, S: Sequence[PointOfP1], data: Sequence[Sequence[RationalFunction]]
    ) -> 'GlobalTorsorClass':
        return cls(group, tuple(S), tuple(WittVector(group.p, tuple(c)) for c in data))

    @classmethod
    def kummer(cls, group: GroupSpec, S: Sequence[PointOfP1], g: RationalFunction) -> 'GlobalTorsorClass':
        return cls(group, tuple(S), unit=g)

    @property
    def spec(self) -> FieldSpec:
        if self.unit is not None:
            return self.unit.spec
        return self.data[0].components[0].spec

    def local_class(self, point: PointOfP1) -> LocalTorsorClass:
        """The restriction to the completion at a point."""
        if self.group.variant == KUMMER:
            return LocalTorsorClass.kummer(self.group, self.unit, point)
        return LocalTorsorClass(self.group, point, self.data)

    def with_points(self, S: Sequence[PointOfP1]) -> 'GlobalTorsorClass':
        return GlobalTorsorClass(self.group, tuple(S), self.data, self.unit)


@dataclass(frozen=True)
class ModulusResult:
    modulus: Modulus
    trivial: bool = False

    def to_dict(self) -> dict:
        return {"modulus": self.modulus.to_list(), "trivial": self.trivial}


def _is_alpha_p(group: GroupSpec) -> bool:
    return group.variant == LOCAL_LOCAL and group.factors == ((1, 1),)


def alpha_p_modulus(P: GlobalTorsorClass) -> ModulusResult:
    """
    Minimal modulus of an alpha_p-torsor f from its differential:
    sum over x in S of max(0, -ord_x(df)) x. df = 0 means f is a p-th power
    and the class is trivial.
    """
    if not _is_alpha_p(P.group):
        raise ValidationError(f"alpha_p_modulus needs an alpha_p class, got {P.group}")
    omega = d(P.data[0].components[0])
    if omega.is_zero():
        return ModulusResult(Modulus(), trivial=True)
    return ModulusResult(Modulus.from_dict({x: max(0, -omega.ord_at(x)) for x in P.S}))


def local_local_modulus(P: GlobalTorsorClass) -> ModulusResult:
    """sum over x in S of the local conductor at x."""
    if P.group.variant != LOCAL_LOCAL:
        raise ValidationError(f"local_local_modulus needs a local-local class, got {P.group}")
    with OperationLogger(logger, "local_local_modulus", p=P.group.p):
        modulus = Modulus.from_dict({x: local_conductor(P.local_class(x)) for x in P.S})
    return ModulusResult(modulus, trivial=modulus.is_zero())


def kummer_modulus(P: GlobalTorsorClass) -> ModulusResult:
    """sum over x in S with n not dividing ord_x(g); always <= m_red."""
    if P.group.variant != KUMMER:
        raise ValidationError(f"kummer_modulus needs a mu_n class, got {P.group}")
    modulus = Modulus.from_dict({x: kummer_local_conductor(P.unit, P.group.n, x) for x in P.S})
    return ModulusResult(modulus, trivial=modulus.is_zero())


def asw_modulus(P: GlobalTorsorClass) -> ModulusResult:
    if P.group.variant != ETALE_ASW:
        raise ValidationError(f"asw_modulus needs a Z/p^m class, got {P.group}")
    modulus = Modulus.from_dict({x: asw_conductor(P.local_class(x)) for x in P.S})
    return ModulusResult(modulus, trivial=modulus.is_zero())


def minimal_modulus(P: Union[GlobalTorsorClass, Sequence[GlobalTorsorClass]]) -> ModulusResult:
    """
    The least modulus of a class, by the route matching its group. A sequence
    of classes (one per factor of a mixed group) gets the pointwise sup.
    """
    if not isinstance(P, GlobalTorsorClass):
        results = [minimal_modulus(part) for part in P]
        if not results:
            raise ValidationError("a mixed class needs at least one factor")
        modulus = Modulus()
        for result in results:
            modulus = modulus.sup(result.modulus)
        return ModulusResult(modulus, trivial=all(r.trivial for r in results))
    if P.group.variant == KUMMER:
        return kummer_modulus(P)
    if P.group.variant == ETALE_ASW:
        return asw_modulus(P)
    if _is_alpha_p(P.group):
        return alpha_p_modulus(P)
    return local_local_modulus(P)


def filtration_member(P: Union[GlobalTorsorClass, Sequence[GlobalTorsorClass]], modulus: Modulus) -> bool:
    """P in F_m H^1 iff m >= m(P) pointwise; m must be supported on S."""
    classes = [P] if isinstance(P, GlobalTorsorClass) else list(P)
    S = set(classes[0].S)
    outside = [str(pt) for pt in modulus.points if pt not in S]
    if outside:
        raise ValidationError(f"modulus is not supported on S: {', '.join(outside)}")
    return minimal_modulus(P).modulus <= modulus


def mu_rank(p: int, n: int, num_points: int, p_rank: int) -> int:
    """Rank of H^1(U, mu_{p^n}) over Z/p^n: f_X + #S - 1."""
    require_positive(num_points, "#S")
    require_positive(n, "n")
    require_positive(p_rank, "f_X", minimum=0)
    return p_rank + num_points - 1


def mu_rank_bruteforce(spec: FieldSpec, S: Sequence[PointOfP1], n: int) -> int:
    """
    Rank of {g invertible on U}/(n-th powers) on P^1 by enumeration.

    Builds g = prod (x - a)^{e_a} over the finite points of S (exponents mod n,
    degree balanced at infinity or, without infinity in S, by a multiple of n),
    reads the order vector of each g on S and counts distinct vectors mod n.
    """
    require_positive(n, "n", minimum=2)
    points = sorted(set(S), key=PointOfP1.sort_key)
    if not points:
        raise ValidationError("S must be nonempty")
    finite = [pt for pt in points if not pt.is_infinity]
    x = RationalFunction.x(spec)
    classes = set()
    for exponents in itertools.product(range(n), repeat=len(finite)):
        if PointOfP1.infinity() not in points:
            if sum(exponents) % n:
                continue
            exponents = list(exponents)
            if exponents:
                exponents[-1] -= sum(exponents)
        g = RationalFunction.one(spec)
        for pt, e in zip(finite, exponents):
            g = g * (x - RationalFunction.constant(spec, pt.value)) ** e
        classes.add(tuple(g.ord_at(pt) % n for pt in points))
    count = len(classes)
    rank = 0
    while n ** rank < count:
        rank += 1
    if n ** rank != count:
        raise RamificationError(f"{count} classes do not form a free Z/{n}-module")
    return rank


def random_global_class(rng, group: GroupSpec, spec: FieldSpec, S: Sequence[PointOfP1], max_pole: int) -> GlobalTorsorClass:
    """Random data regular on U: sums of principal parts at the points of S."""
    if group.variant == KUMMER:
        x = RationalFunction.x(spec)
        g = RationalFunction.one(spec)
        for pt in S:
            if pt.is_infinity:
                continue
            e = rng.randint(-max_pole, max_pole)
            g = g * (x - RationalFunction.constant(spec, pt.value)) ** e
        if PointOfP1.infinity() not in S and g.degree != 0:
            # absorb the degree at a finite point of S
            anchor = next(pt for pt in S if not pt.is_infinity)
            g = g * (x - RationalFunction.constant(spec, anchor.value)) ** (-g.degree)
        return GlobalTorsorClass.kummer(group, S, g * RationalFunction.constant(spec, spec.random_element(rng, nonzero=True)))
    data = []
    for m in group.lengths:
        components = []
        for _ in range(m):
            f = RationalFunction.zero(spec)
            for pt in S:
                for k in range(1, max_pole + 1):
                    c = spec.random_element(rng)
                    if not c.is_zero():
                        f = f + uniformizer_power(spec, pt, -k) * RationalFunction.constant(spec, c)
            components.append(f)
        data.append(components)
    return GlobalTorsorClass.from_functions(group, S, data)
