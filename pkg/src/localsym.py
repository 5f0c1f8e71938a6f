"""
Local symbols over L = k'((u)).

    (f, g) for H = G_a    : Res(f dg/g)
    (f, g) for H = W_m    : lift the coefficients of f and g to the Witt ring
                            W_{m+delta}(k') by Teichmuller representatives, take
                            w_t = Res(ghost_t(f~) dlog g~) for t < m, invert the
                            ghost map over W_{m+delta}(k') and reduce mod p.

The residue vector always lies in the image of the ghost map (the Dwork
congruences hold for any lift), so the ghost inversion is exact; a
divisibility failure means the lift slack was too small.

The Rosenlicht-Serre filtration fil_n is decided with the generator families
1 - c u^j, c a formal parameter: the symbol is computed as a Witt vector of
polynomials in c, which vanishes for every c in an algebraic closure iff all
its component polynomials are zero.
"""
from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence, Tuple

from algebra import (
    FieldElement,
    FieldSpec,
    GaloisRing,
    LaurentSeries,
    PointOfP1,
    Polynomial,
    PrecisionError,
    RationalFunction,
    laurent_expand,
)
from config import get_config
from curve import NonRationalPointError
from utils.logging_config import OperationLogger, get_logger
from utils.validation import RamificationError, ValidationError
from witt import WittDivisibilityError, WittVector, ghost_components, unghost

logger = get_logger(__name__)


class ZeroFunctionError(RamificationError):
    """A local symbol or a Kummer class was given the zero function."""
    pass


@dataclass(frozen=True)
class LocalWittElement:
    """A Witt vector of Laurent series over k' (an element of W_m(L))."""

    witt: WittVector

    def __post_init__(self):
        if not all(isinstance(c, LaurentSeries) for c in self.witt.components):
            raise ValidationError("a local Witt element needs Laurent series components")

    @classmethod
    def from_series(cls, p: int, series: Sequence[LaurentSeries]) -> 'LocalWittElement':
        return cls(WittVector(p, tuple(series)))

    @classmethod
    def from_rational(
        cls,
        p: int,
        functions: Sequence[RationalFunction],
        at: PointOfP1,
        extra: int = 0,
    ) -> 'LocalWittElement':
        """
        Expand global components at a point, each known far enough for the
        local symbol (and `extra` further terms).
        """
        m = len(functions)
        poles = [0 if f.is_zero() else max(0, -f.ord_at(at)) for f in functions]
        targets = symbol_precisions(p, poles)
        series = []
        for f, target in zip(functions, targets):
            target += extra
            if f.is_zero():
                series.append(LaurentSeries.zero(f.spec, target))
            else:
                series.append(laurent_expand(f, at, max(target - f.ord_at(at), 1)))
        return cls.from_series(p, series)

    @property
    def p(self) -> int:
        return self.witt.p

    @property
    def m(self) -> int:
        return self.witt.length

    @property
    def components(self) -> Tuple[LaurentSeries, ...]:
        return self.witt.components

    @property
    def spec(self) -> FieldSpec:
        return self.components[0].ring

    def pole_orders(self) -> Tuple[int, ...]:
        """d_i = max(0, -v(f_i)); a zero component known below u^0 counts as integral."""
        return tuple(
            0 if c.is_zero() else max(0, -c.valuation) for c in self.components
        )

    def pole_bound(self) -> int:
        """B(f) = max_i p^{m-1-i} d_i."""
        return max(self.p ** (self.m - 1 - i) * d for i, d in enumerate(self.pole_orders()))

    def conductor_bound(self) -> int:
        """J(f) = 1 + B(f): generators 1 - c u^j with j > J(f) pair trivially with f."""
        return 1 + self.pole_bound()

    def is_integral(self) -> bool:
        return all(c.is_zero() or c.valuation >= 0 for c in self.components)

    def __add__(self, other: 'LocalWittElement') -> 'LocalWittElement':
        return LocalWittElement(self.witt + other.witt)

    def __sub__(self, other: 'LocalWittElement') -> 'LocalWittElement':
        return LocalWittElement(self.witt - other.witt)

    def __neg__(self) -> 'LocalWittElement':
        return LocalWittElement(-self.witt)

    def verschiebung(self) -> 'LocalWittElement':
        return LocalWittElement(self.witt.verschiebung())

    def frobenius(self) -> 'LocalWittElement':
        return LocalWittElement(self.witt.frobenius())

    def __str__(self) -> str:
        return str(self.witt)


def symbol_precisions(p: int, poles: Sequence[int]) -> List[int]:
    """
    Absolute precision of each component for a symbol computation:
    factor * (1 + (p^{m-1-i} - 1) d_i) + margin.
    """
    cfg = get_config().symbol
    m = len(poles)
    return [
        cfg.precision_factor * (1 + (p ** (m - 1 - i) - 1) * d) + cfg.precision_margin
        for i, d in enumerate(poles)
    ]


def unit_precision(pole_bound: int) -> int:
    """Relative precision of the second argument: factor * (B + 2) + margin."""
    cfg = get_config().symbol
    return cfg.precision_factor * (pole_bound + 2) + cfg.precision_margin


def _default_slack(m: int) -> int:
    slack = get_config().symbol.lift_slack
    return m if slack is None else slack


def _with_slack_retries(m: int, compute: Callable[[int], WittVector], operation: str) -> WittVector:
    delta = _default_slack(m)
    retries = get_config().symbol.max_slack_retries
    for attempt in range(retries + 1):
        try:
            return compute(delta)
        except WittDivisibilityError as exc:
            if attempt == retries:
                raise WittDivisibilityError(
                    f"{operation}: ghost inversion failed with lift slack {delta}: {exc}"
                ) from exc
            logger.info(f"{operation}: raising lift slack from {delta} to {delta + 1}")
            delta += 1


def symbol_ga(f: LaurentSeries, g: LaurentSeries) -> FieldElement:
    """
    The additive local symbol Res(f dg/g).

    Raises:
        PrecisionError: if the inputs do not determine the residue
    """
    if g.is_zero():
        raise ZeroFunctionError("the second argument of a local symbol must be nonzero")
    return (f * g.logarithmic_derivative()).residue()


def _lifted_ghosts(f: LocalWittElement, ring: GaloisRing) -> Tuple[LaurentSeries, ...]:
    lifted = [c.teichmuller_lift(ring) for c in f.components]
    return ghost_components(lifted, f.p)


def schmid_witt_symbol(f: LocalWittElement, g: LaurentSeries) -> WittVector:
    """
    The local symbol (f, g) in W_m(k') by the ghost-lift residue formula.

    Args:
        f: Element of W_m(L)
        g: Nonzero element of L

    Returns:
        WittVector of length m over k'

    Raises:
        PrecisionError: if the series precision does not determine a residue
        WittDivisibilityError: if the ghost inversion fails after the slack retries
    """
    if g.is_zero():
        raise ZeroFunctionError("the second argument of a local symbol must be nonzero")
    p, m, spec = f.p, f.m, f.spec

    def compute(delta: int) -> WittVector:
        ring = GaloisRing(spec, m + delta)
        dlog = g.teichmuller_lift(ring).logarithmic_derivative()
        residues = [(w * dlog).residue() for w in _lifted_ghosts(f, ring)]
        return unghost(residues, p).map(lambda x: x.reduce())

    with OperationLogger(logger, "schmid_witt_symbol", p=p, m=m):
        return _with_slack_retries(m, compute, "schmid_witt_symbol")


def generator_symbol(f: LocalWittElement, j: int) -> WittVector:
    """
    (f, 1 - c u^j) as a Witt vector of polynomials in the formal parameter c.

    With dlog(1 - c u^j) = -j sum_k c^{k+1} u^{j(k+1)-1} du, the ghost residues are
    w_t(c) = -j sum_k c^{k+1} [u^{-j(k+1)}] ghost_t(f~). Only principal parts enter.
    """
    if j < 1:
        raise ValidationError(f"generator index must be >= 1, got {j}")
    p, m, spec = f.p, f.m, f.spec

    def compute(delta: int) -> WittVector:
        ring = GaloisRing(spec, m + delta)
        residues = []
        for w in _lifted_ghosts(f, ring):
            coeffs = [ring.zero()]
            k = 1
            while -j * k >= w.valuation:
                coeffs.append(w.coefficient(-j * k).scale(-j))
                k += 1
            if w.absolute_precision <= -j:
                raise PrecisionError(
                    f"generator symbol at j={j} needs ghost components known modulo u^{1 - j}"
                )
            residues.append(Polynomial.from_coeffs(ring, coeffs))
        vector = unghost(residues, p)
        return vector.map(lambda poly: poly.map_coeffs(lambda x: x.reduce(), spec))

    return _with_slack_retries(m, compute, "generator_symbol")


def specialize(symbol: WittVector, c: FieldElement) -> WittVector:
    """Evaluate a generator symbol at c in k'."""
    return symbol.map(lambda poly: poly(c))


def fil_membership(f: LocalWittElement, n: int) -> bool:
    """
    Whether f lies in fil_n W_m(L).

    n = 0: integrality of the representative as given. n >= 1: (f, 1 - c u^j)
    vanishes for all c and all j from n up to J(f).

    The parameter c is lifted by its Teichmuller representative, so the
    families cover the Teichmuller-coefficient units 1 - [c] u^j. These
    generate U^(n) modulo U^(J(f)+1), on which every symbol of f vanishes:
    U^(j)/U^(j+1) is k' through 1 - c u^j -> c.
    """
    if n < 0:
        raise ValidationError(f"filtration level must be >= 0, got {n}")
    if f.is_integral():
        return True
    if n == 0:
        return False
    for j in range(n, f.conductor_bound() + 1):
        if not generator_symbol(f, j).is_zero():
            return False
    return True


def fil_level(f: LocalWittElement) -> int:
    """
    The least n with f in fil_n: 0 for integral f, otherwise one more than the
    largest j with a nonzero generator symbol (1 when there is none).
    """
    if f.is_integral():
        return 0
    with OperationLogger(logger, "fil_level", p=f.p, m=f.m):
        for j in range(f.conductor_bound(), 0, -1):
            if not generator_symbol(f, j).is_zero():
                return j + 1
    return 1


def _expand_unit(g: RationalFunction, at: PointOfP1, pole_bound: int) -> LaurentSeries:
    return laurent_expand(g, at, unit_precision(pole_bound))


def symbol_at(functions: Sequence[RationalFunction], g: RationalFunction, at: PointOfP1, p: int) -> WittVector:
    """The local symbol at a point of P^1 of global data f (Witt components) and g."""
    if g.is_zero():
        raise ZeroFunctionError("the second argument of a local symbol must be nonzero")
    local = LocalWittElement.from_rational(p, functions, at)
    return schmid_witt_symbol(local, _expand_unit(g, at, local.pole_bound()))


def _critical_points(functions: Sequence[RationalFunction], g: RationalFunction) -> List[PointOfP1]:
    points = set()
    for f in functions:
        if f.is_zero():
            continue
        candidates, rational = RationalFunction.from_polynomial(f.denominator).critical_points()
        if not rational:
            raise NonRationalPointError(f"a pole of {f} is not rational over {f.spec}")
        points.update(candidates)
    candidates, rational = g.critical_points()
    if not rational:
        raise NonRationalPointError(f"a zero or pole of {g} is not rational over {g.spec}")
    points.update(candidates)
    points.add(PointOfP1.infinity())
    return sorted(points, key=PointOfP1.sort_key)


def reciprocity_sum(functions: Sequence[RationalFunction], g: RationalFunction, p: int) -> WittVector:
    """
    Sum over all points of P^1 of the local symbols (f, g)_x; zero for principal data.

    Only poles of f, zeros and poles of g, and infinity can contribute.

    Raises:
        NonRationalPointError: if a critical point is not defined over k'
    """
    spec = g.spec
    total = WittVector.zero(p, len(functions), spec.zero())
    if all(f.is_zero() for f in functions):
        return total
    for point in _critical_points(functions, g):
        total = total + symbol_at(functions, g, point, p)
    return total


def symbol_is_stable(functions: Sequence[RationalFunction], g: RationalFunction, at: PointOfP1, p: int) -> bool:
    """Recompute at doubled precision and lift slack + 2; the values must agree."""
    cfg = get_config()
    baseline = symbol_at(functions, g, at, p)
    slack = _default_slack(len(functions)) + 2
    with cfg.override("symbol", precision_factor=2 * cfg.symbol.precision_factor, lift_slack=slack):
        doubled = symbol_at(functions, g, at, p)
    return baseline == doubled


def fil_level_is_stable(f: LocalWittElement, functions: Sequence[RationalFunction], at: PointOfP1) -> bool:
    """fil_level of global data at a point, recomputed with doubled precision and slack + 2."""
    cfg = get_config()
    baseline = fil_level(f)
    slack = _default_slack(f.m) + 2
    with cfg.override("symbol", precision_factor=2 * cfg.symbol.precision_factor, lift_slack=slack):
        doubled = fil_level(LocalWittElement.from_rational(f.p, functions, at))
    return baseline == doubled
