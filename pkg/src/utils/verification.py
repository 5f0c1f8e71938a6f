"""
Built-in property suites run by `ramify verify`.

Each suite draws its cases from a seeded random.Random, so a (suite, cases,
seed) triple always checks the same inputs. Suites are independent and run
on a thread pool; results are reported in suite-name order.
"""
import random
import time
from concurrent.futures import ThreadPoolExecutor
from contextvars import copy_context
from dataclasses import dataclass, field
from itertools import product
from typing import Callable, Dict, List, Optional, Sequence

from config import get_config
from utils.logging_config import OperationLogger, get_logger
from utils.validation import ValidationError

logger = get_logger(__name__)

MAX_REPORTED_FAILURES = 5

# Field route: pair counts checked exhaustively, and the sample size above that
FIELD_PAIR_LIMIT = 1024
FIELD_SAMPLE = 50


@dataclass
class SuiteResult:
    """Outcome of one property suite."""

    name: str
    cases: int = 0
    failures: List[str] = field(default_factory=list)
    duration_ms: float = 0.0
    error: Optional[str] = None

    @property
    def passed(self) -> bool:
        return self.error is None and not self.failures

    def check(self, condition: bool, description: str):
        self.cases += 1
        if not condition:
            self.failures.append(description)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "passed": self.passed,
            "cases": self.cases,
            "failed": len(self.failures),
            "failures": self.failures[:MAX_REPORTED_FAILURES],
            "error": self.error,
        }


def _field_vector(rng: random.Random, spec, p: int, m: int):
    from witt import WittVector

    return WittVector(p, tuple(spec.random_element(rng) for _ in range(m)))


# ============================================================
# Witt vectors and Artin-Hasse
# ============================================================

# Irreducible quadratics t^2 + t + 1 over F_2 and t^2 + 1 over F_3
QUADRATIC_MODULI = {2: (1, 1, 1), 3: (1, 0, 1)}


def _quadratic_extension(p: int):
    from algebra import FieldSpec

    return FieldSpec(p, 2, QUADRATIC_MODULI[p])


def _all_field_vectors(spec, m: int):
    from witt import WittVector

    return [WittVector(spec.p, comps) for comps in product(spec.elements(), repeat=m)]


def suite_witt_laws(result: SuiteResult, cases: int, rng: random.Random):
    """
    Ghost additivity and multiplicativity over Z; field route against universal polynomials.

    With cases = 0 the integer grid is checked exhaustively, and the field route
    exhaustively over F_p and F_{p^2} whenever the pairs number at most
    FIELD_PAIR_LIMIT. A positive `cases` caps both at that many sampled pairs.
    """
    from algebra import FieldSpec
    from witt import WittVector, universal_add, universal_mul

    bound = get_config().verify.witt_component_range
    values = range(-bound, bound + 1)
    for p, m in product((2, 3), (1, 2, 3)):
        pairs = list(product(product(values, repeat=m), repeat=2))
        if cases and len(pairs) > cases:
            pairs = rng.sample(pairs, cases)
        for a_comp, b_comp in pairs:
            a, b = WittVector(p, a_comp), WittVector(p, b_comp)
            ga, gb = a.ghost(), b.ghost()
            result.check(
                (a + b).ghost() == tuple(x + y for x, y in zip(ga, gb)),
                f"ghost(a+b) p={p} a={a_comp} b={b_comp}",
            )
            result.check(
                (a * b).ghost() == tuple(x * y for x, y in zip(ga, gb)),
                f"ghost(a*b) p={p} a={a_comp} b={b_comp}",
            )
        for spec in (FieldSpec(p), _quadratic_extension(p)):
            if not cases and spec.q ** (2 * m) <= FIELD_PAIR_LIMIT:
                vectors = _all_field_vectors(spec, m)
                field_pairs = list(product(vectors, repeat=2))
            else:
                field_pairs = [
                    (_field_vector(rng, spec, p, m), _field_vector(rng, spec, p, m))
                    for _ in range(min(cases or FIELD_SAMPLE, FIELD_SAMPLE))
                ]
            for a, b in field_pairs:
                result.check(a + b == universal_add(a, b), f"field route sum q={spec.q} a={a} b={b}")
                result.check(a * b == universal_mul(a, b), f"field route product q={spec.q} a={a} b={b}")


def suite_artin_hasse(result: SuiteResult, cases: int, rng: random.Random):
    """F(u) against the Mobius-product oracle."""
    from artin_hasse import artin_hasse_F, mobius_product_series

    terms = get_config().verify.artin_hasse_terms
    for p in (2, 3, 5):
        result.check(
            artin_hasse_F(p, terms) == mobius_product_series(p, terms),
            f"F(u) disagrees with the Mobius product for p={p}",
        )


def suite_units(result: SuiteResult, cases: int, rng: random.Random):
    """Decomposition roundtrip, homomorphism law and level transition, `cases` units per (p, n)."""
    from algebra import FieldSpec, PrincipalUnit
    from artin_hasse import add_decompositions, decompose_unit, reassemble, transition

    max_level = get_config().verify.unit_max_level
    for p, n in product((2, 3, 5), range(2, max_level + 1)):
        spec = FieldSpec(p)
        for _ in range(cases):
            v = PrincipalUnit(spec, n, tuple(spec.random_element(rng) for _ in range(n - 1)))
            w = PrincipalUnit(spec, n, tuple(spec.random_element(rng) for _ in range(n - 1)))
            dv, dw = decompose_unit(v), decompose_unit(w)
            result.check(reassemble(dv) == v, f"roundtrip p={p} n={n} v={v}")
            result.check(
                decompose_unit(v * w) == add_decompositions(dv, dw),
                f"homomorphism p={p} n={n} v={v} w={w}",
            )
            lower = rng.randint(1, n)
            result.check(
                transition(dv, lower) == decompose_unit(v.truncate(lower)),
                f"transition p={p} {n}->{lower} v={v}",
            )


def suite_dimensions(result: SuiteResult, cases: int, rng: random.Random):
    """sum_{i<n, p does not divide i} r_i = n - 1."""
    from structure import decompose_local_unipotent

    top = get_config().verify.dimension_max_level
    for p in (2, 3, 5, 7):
        for n in range(1, top + 1):
            total = sum(r for _, r in decompose_local_unipotent(n, p))
            result.check(total == n - 1, f"dimension identity p={p} n={n}: {total}")


# ============================================================
# Local symbols and the filtration
# ============================================================

def _random_laurent(rng, spec, low: int, high: int, precision: int):
    from algebra import LaurentSeries

    coeffs = [spec.random_element(rng) for _ in range(high - low + 1)]
    coeffs[0] = spec.random_element(rng, nonzero=True)
    coeffs += [spec.zero()] * max(precision - len(coeffs), 0)
    return LaurentSeries.build(spec, low, coeffs)


def _random_unit_series(rng, spec, precision: int, valuation: int = 0):
    from algebra import LaurentSeries

    coeffs = [spec.random_element(rng, nonzero=True)] + [spec.random_element(rng) for _ in range(precision - 1)]
    return LaurentSeries.build(spec, valuation, coeffs)


def suite_symbols(result: SuiteResult, cases: int, rng: random.Random):
    """m = 1 against the plain residue; bilinearity; compatibility with V and F."""
    from algebra import FieldSpec
    from localsym import LocalWittElement, schmid_witt_symbol, symbol_ga, unit_precision

    for _ in range(cases):
        p = rng.choice((2, 3))
        spec = FieldSpec(p)
        d = rng.randint(1, 6)
        f = _random_laurent(rng, spec, -d, 0, 2 * d + 4)
        g = _random_unit_series(rng, spec, unit_precision(d) + 2, rng.randint(-2, 2))
        local = LocalWittElement.from_series(p, [f])
        result.check(
            schmid_witt_symbol(local, g).components[0] == symbol_ga(f, g),
            f"m=1 symbol vs residue p={p} f={f} g={g}",
        )

    for _ in range(max(cases // 30, 1)):
        for m in (1, 2, 3):
            p = rng.choice((2, 3))
            spec = FieldSpec(p)
            d = rng.randint(1, 3)
            size = p ** m * (d + 2) + 4

            def element():
                return LocalWittElement.from_series(p, [_random_laurent(rng, spec, -d, 0, size) for _ in range(m)])

            f1, f2 = element(), element()
            g1 = _random_unit_series(rng, spec, size * 2, rng.randint(-1, 1))
            g2 = _random_unit_series(rng, spec, size * 2)
            left = schmid_witt_symbol(f1 + f2, g1)
            right = schmid_witt_symbol(f1, g1) + schmid_witt_symbol(f2, g1)
            result.check(left == right, f"additivity in f p={p} m={m}")
            left = schmid_witt_symbol(f1, g1 * g2)
            right = schmid_witt_symbol(f1, g1) + schmid_witt_symbol(f1, g2)
            result.check(left == right, f"multiplicativity in g p={p} m={m}")
            if m > 1:
                result.check(
                    schmid_witt_symbol(f1.verschiebung(), g1) == schmid_witt_symbol(f1, g1).verschiebung(),
                    f"V-compatibility p={p} m={m}",
                )
            result.check(
                schmid_witt_symbol(f1.frobenius(), g1) == schmid_witt_symbol(f1, g1).frobenius(),
                f"F-compatibility p={p} m={m}",
            )


def _random_global_witt(rng, spec, p: int, m: int, points, max_pole: int):
    from algebra import RationalFunction
    from conductor import uniformizer_power

    components = []
    for _ in range(m):
        f = RationalFunction.constant(spec, spec.random_element(rng))
        for pt in points:
            for k in range(1, max_pole + 1):
                c = spec.random_element(rng)
                if not c.is_zero():
                    f = f + uniformizer_power(spec, pt, -k) * RationalFunction.constant(spec, c)
        components.append(f)
    return components


def suite_reciprocity(result: SuiteResult, cases: int, rng: random.Random):
    """The sum of local symbols of principal data vanishes."""
    from algebra import FieldSpec, PointOfP1, RationalFunction
    from localsym import reciprocity_sum

    for p, m in product((2, 3), (1, 2, 3)):
        spec = FieldSpec(p)
        x = RationalFunction.x(spec)
        candidates = [PointOfP1.finite(spec.zero()), PointOfP1.finite(spec.one()), PointOfP1.infinity()]
        for _ in range(cases):
            points = rng.sample(candidates, rng.randint(1, 2))
            f = _random_global_witt(rng, spec, p, m, points, 2 if m < 3 else 1)
            a = spec.random_element(rng, nonzero=True)
            g = (x - 1) * x ** rng.randint(-2, 2) * RationalFunction.constant(spec, a)
            total = reciprocity_sum(f, g, p)
            result.check(total.is_zero(), f"reciprocity p={p} m={m} f={[str(c) for c in f]} g={g}: {total}")


def suite_filtration(result: SuiteResult, cases: int, rng: random.Random):
    """fil_n G_a(L) = {v >= 1 - n} on monomials u^{-d}, p not dividing d; fil_0 is integrality."""
    from algebra import FieldSpec, LaurentSeries
    from localsym import LocalWittElement, fil_level, fil_membership

    for p in (2, 3):
        spec = FieldSpec(p)
        for d in range(0, 11):
            f = LaurentSeries.monomial(spec, 1, -d, 3)
            local = LocalWittElement.from_series(p, [f])
            level = fil_level(local)
            expected = 0 if d == 0 else (d + 1 if d % p else 1 + d // p ** _valuation(d, p))
            result.check(level == expected, f"fil_level(u^-{d}) p={p}: {level} != {expected}")
            if d % p:
                for n in range(0, d + 3):
                    member = fil_membership(local, n)
                    result.check(member == (-d >= min(0, 1 - n)), f"fil_{n} membership of u^-{d} p={p}")


def _valuation(n: int, p: int) -> int:
    from algebra import p_adic_valuation

    return p_adic_valuation(n, p)


def suite_stability(result: SuiteResult, cases: int, rng: random.Random):
    """Symbols and fil levels recomputed at doubled precision and lift slack + 2 agree."""
    from algebra import FieldSpec, PointOfP1, RationalFunction
    from localsym import LocalWittElement, fil_level_is_stable, symbol_is_stable

    for _ in range(max(cases // 10, 1)):
        p = rng.choice((2, 3))
        m = rng.randint(1, 2)
        spec = FieldSpec(p)
        at = PointOfP1.finite(spec.zero())
        f = _random_global_witt(rng, spec, p, m, [at], 2)
        x = RationalFunction.x(spec)
        g = (x + 1) * x ** rng.randint(-1, 1)
        result.check(symbol_is_stable(f, g, at, p), f"symbol stability p={p} m={m}")
        local = LocalWittElement.from_rational(p, f, at)
        result.check(fil_level_is_stable(local, f, at), f"fil_level stability p={p} m={m}")


# ============================================================
# Conductors and moduli
# ============================================================

def suite_conductor(result: SuiteResult, cases: int, rng: random.Random):
    """Resolution independence, monotonicity, and greedy against exhaustive minimization."""
    from algebra import FieldSpec, PointOfP1, RationalFunction
    from conductor import (
        LOCAL_LOCAL,
        GroupSpec,
        diagonal_resolution_conductor,
        exhaustive_local_conductor,
        local_conductor,
        pushforward_conductor,
        random_local_class,
        reduce_class,
        uniformizer_power,
    )

    for _ in range(cases):
        p = rng.choice((2, 3))
        m, r = rng.randint(1, 2), rng.randint(1, 2)
        spec = FieldSpec(p)
        group = GroupSpec(LOCAL_LOCAL, p, factors=((m, r),))
        at = rng.choice([PointOfP1.finite(spec.zero()), PointOfP1.infinity()])
        c1 = random_local_class(rng, group, spec, at, 3)
        c2 = random_local_class(rng, group, spec, at, 3)
        base = local_conductor(c1)
        result.check(pushforward_conductor(c1) == base, f"pushforward W{m}[F^{r}] p={p}")
        result.check(
            diagonal_resolution_conductor(c1, rng, max_pole=2) == base,
            f"composite resolution W{m}[F^{r}] p={p} base={base}",
        )
        if m == 1:
            exhaustive = exhaustive_local_conductor(c1.representatives[0].components[0], at, r, 2)
            result.check(exhaustive == base, f"greedy {base} vs exhaustive {exhaustive} alpha_(p^{r}) p={p}")
        result.check(
            local_conductor(c1 + c2) <= max(base, local_conductor(c2)),
            f"monotonicity W{m}[F^{r}] p={p}",
        )
        result.check((base == 0) == reduce_class(c1).is_integral(), f"zero conductor iff integral p={p}")

    spec = FieldSpec(2)
    at = PointOfP1.finite(spec.zero())
    group = GroupSpec(LOCAL_LOCAL, 2, factors=((1, 1),))
    from conductor import LocalTorsorClass

    for coefficients in product((0, 1), repeat=4):
        f = RationalFunction.zero(spec)
        for k, c in enumerate(coefficients, start=1):
            if c:
                f = f + uniformizer_power(spec, at, -k)
        greedy = local_conductor(LocalTorsorClass.from_functions(group, [[f]], at))
        exhaustive = exhaustive_local_conductor(f, at, 1, 4)
        result.check(greedy == exhaustive, f"greedy {greedy} vs exhaustive {exhaustive} for f={f}")


def suite_modulus(result: SuiteResult, cases: int, rng: random.Random):
    """Differential route against the local-conductor route for alpha_p classes."""
    from algebra import FieldSpec, PointOfP1
    from conductor import LOCAL_LOCAL, GroupSpec
    from modulus import alpha_p_modulus, local_local_modulus, random_global_class

    for p in (2, 3, 5):
        spec = FieldSpec(p)
        group = GroupSpec(LOCAL_LOCAL, p, factors=((1, 1),))
        candidates = [PointOfP1.finite(spec.zero()), PointOfP1.finite(spec.one()), PointOfP1.infinity()]
        for _ in range(cases):
            S = rng.sample(candidates, rng.randint(1, 3))
            P = random_global_class(rng, group, spec, S, 6)
            differential = alpha_p_modulus(P).modulus
            conductors = local_local_modulus(P).modulus
            result.check(differential == conductors, f"alpha_p p={p}: {differential} vs {conductors}")


def suite_kummer(result: SuiteResult, cases: int, rng: random.Random):
    """kummer_modulus <= m_red; brute-force rank of H^1(U, mu_2) for S = {0, 1, inf}."""
    from algebra import FieldSpec, PointOfP1
    from conductor import KUMMER, GroupSpec
    from curve import Modulus
    from modulus import kummer_modulus, mu_rank, mu_rank_bruteforce, random_global_class

    for _ in range(cases):
        p = rng.choice((2, 3, 5))
        n = rng.choice((2, 3, 4, p))
        spec = FieldSpec(p)
        candidates = [PointOfP1.finite(spec.zero()), PointOfP1.finite(spec.one()), PointOfP1.infinity()]
        S = rng.sample(candidates, rng.randint(1, 3))
        P = random_global_class(rng, GroupSpec(KUMMER, p, n=n), spec, S, 5)
        bound = Modulus.from_dict({x: 1 for x in P.S})
        result.check(kummer_modulus(P).modulus <= bound, f"Kummer bound p={p} n={n} g={P.unit}")

    spec = FieldSpec(2)
    S = [PointOfP1.finite(spec.zero()), PointOfP1.finite(spec.one()), PointOfP1.infinity()]
    result.check(mu_rank_bruteforce(spec, S, 2) == mu_rank(2, 1, 3, 0) == 2, "mu rank on P^1 minus 3 points")


def suite_lattice(result: SuiteResult, cases: int, rng: random.Random):
    """member(P, inf(m, m')) = member(P, m) and member(P, m')."""
    from algebra import FieldSpec, PointOfP1
    from conductor import LOCAL_LOCAL, GroupSpec
    from curve import Modulus
    from modulus import filtration_member, minimal_modulus, random_global_class

    for _ in range(cases):
        p = rng.choice((2, 3))
        spec = FieldSpec(p)
        group = GroupSpec(LOCAL_LOCAL, p, factors=((1, 1),))
        candidates = [PointOfP1.finite(spec.zero()), PointOfP1.finite(spec.one()), PointOfP1.infinity()]
        S = rng.sample(candidates, rng.randint(1, 3))
        P = random_global_class(rng, group, spec, S, 4)
        minimal = minimal_modulus(P).modulus
        first = Modulus.from_dict({x: rng.randint(0, 6) for x in P.S})
        second = Modulus.from_dict({x: rng.randint(0, 6) for x in P.S})
        meet = filtration_member(P, first.inf(second))
        result.check(
            meet == (filtration_member(P, first) and filtration_member(P, second)),
            f"lattice law p={p} m(P)={minimal} m={first} m'={second}",
        )
        result.check(filtration_member(P, minimal), f"minimality p={p} m(P)={minimal}")


def suite_structure(result: SuiteResult, cases: int, rng: random.Random):
    """Dimension identity and the pinned factor lists."""
    from algebra import FieldSpec
    from curve import Modulus
    from structure import frobenius_kernel_exponent, jacobian_report, uni_ab_factors

    spec = FieldSpec(2)
    modulus = Modulus.parse("0:4,inf:7", spec)
    result.check(jacobian_report(2, 0, 0, modulus).dim_total == 10, "dim J for 4*0 + 7*inf")
    result.check(frobenius_kernel_exponent(2, 0, modulus, 2) == 20, "Frobenius kernel exponent")
    result.check(
        uni_ab_factors(2, Modulus.parse("0:4,1:1", spec)) == ["Z_p^1", "W[F^2]", "W[F^1]"],
        "uni_ab factors for 4*0 + 1*1",
    )
    for _ in range(cases):
        p = rng.choice((2, 3, 5))
        spec = FieldSpec(p)
        genus = rng.randint(0, 3)
        points = rng.sample(["0", "1", "inf"], rng.randint(1, 3))
        modulus = Modulus.parse(",".join(f"{pt}:{rng.randint(1, 12)}" for pt in points), spec)
        report = jacobian_report(p, genus, 0, modulus)
        result.check(report.dim_total == genus + modulus.degree - 1, f"dimension identity for {modulus}")


SUITES: Dict[str, Callable[[SuiteResult, int, random.Random], None]] = {
    "artin_hasse": suite_artin_hasse,
    "conductor": suite_conductor,
    "dimensions": suite_dimensions,
    "filtration": suite_filtration,
    "kummer": suite_kummer,
    "lattice": suite_lattice,
    "modulus": suite_modulus,
    "reciprocity": suite_reciprocity,
    "stability": suite_stability,
    "structure": suite_structure,
    "symbols": suite_symbols,
    "units": suite_units,
    "witt_laws": suite_witt_laws,
}

DEFAULT_CASES = {
    "artin_hasse": 1,
    "conductor": "conductor_cases",
    "dimensions": 1,
    "filtration": 1,
    "kummer": "kummer_cases",
    "lattice": "lattice_cases",
    "modulus": "modulus_cases",
    "reciprocity": "reciprocity_cases",
    "stability": "symbol_pairs",
    "structure": "lattice_cases",
    "symbols": "symbol_pairs",
    "units": "unit_cases",
    "witt_laws": 0,
}


def default_cases(name: str) -> int:
    value = DEFAULT_CASES[name]
    return value if isinstance(value, int) else getattr(get_config().verify, value)


def run_suite(name: str, cases: Optional[int] = None, seed: int = 0) -> SuiteResult:
    """Run one suite; domain errors are recorded on the result, not raised."""
    if name not in SUITES:
        raise ValidationError(f"unknown suite {name!r}; choose from {', '.join(sorted(SUITES))}")
    cases = default_cases(name) if cases is None else cases
    result = SuiteResult(name)
    rng = random.Random(f"{seed}:{name}")
    start = time.perf_counter()
    try:
        with OperationLogger(logger, "verify", suite=name):
            SUITES[name](result, cases, rng)
    except Exception as exc:
        result.error = f"{type(exc).__name__}: {exc}"
        logger.error(f"suite {name} aborted: {result.error}", extra={'suite': name})
    result.duration_ms = (time.perf_counter() - start) * 1000
    return result


def run_suites(
    names: Optional[Sequence[str]] = None,
    cases: Optional[int] = None,
    seed: int = 0,
    max_workers: Optional[int] = None,
) -> List[SuiteResult]:
    """
    Run suites concurrently; the returned list is ordered by suite name.

    Each worker runs in its own copy of the caller's context, so configuration
    overrides active here apply to every suite while overrides a suite makes
    stay local to it.
    """
    names = sorted(set(names or SUITES))
    for name in names:
        if name not in SUITES:
            raise ValidationError(f"unknown suite {name!r}; choose from {', '.join(sorted(SUITES))}")
    workers = max_workers or get_config().verify.max_workers
    with ThreadPoolExecutor(max_workers=workers) as executor:
        futures = [executor.submit(copy_context().run, run_suite, name, cases, seed) for name in names]
        results = [future.result() for future in futures]
    return sorted(results, key=lambda r: r.name)
