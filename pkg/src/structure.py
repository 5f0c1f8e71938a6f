"""
Structure reports for generalized Jacobians and abelian fundamental groups of U = X - S.

    J_{X,m}  extension of J_X by L_m = G_m^{#S-1} x prod_x V_(n_x),
             V_(n) = prod_{i<n, p does not divide i} W_{r_i}
    pi^ab(U) unipotent part: Z_p^{#S-1} x prod_{x,i} W[F^{r_{x,i}}]

Group schemes are reported as validated factor strings and integer ranks.
"""
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from artin_hasse import slot_indices, slot_length
from curve import Modulus
from utils.logging_config import get_logger
from utils.validation import ValidationError, require_positive, require_prime

logger = get_logger(__name__)


@dataclass
class StructureReport:
    """
    Ranks and factor lists of J_{X,m} (and of related objects through `notes`).

    unipotent_factors maps a point's canonical string to its (i, r_i) list;
    dim_total = abelian_dim + torus_rank + sum of all r_i. p_rank is the p-rank
    f_X of J_X and discrete_corank the corank of a divisible discrete part; neither
    contributes to the dimension.
    """

    torus_rank: int = 0
    abelian_dim: int = 0
    unipotent_factors: Dict[str, List[Tuple[int, int]]] = field(default_factory=dict)
    dim_total: int = 0
    p_rank: int = 0
    discrete_corank: int = 0
    notes: List[str] = field(default_factory=list)

    @property
    def unipotent_dim(self) -> int:
        return sum(r for pairs in self.unipotent_factors.values() for _, r in pairs)

    def is_consistent(self) -> bool:
        return self.dim_total == self.abelian_dim + self.torus_rank + self.unipotent_dim

    def to_dict(self) -> dict:
        return {
            "torus_rank": self.torus_rank,
            "abelian_dim": self.abelian_dim,
            "p_rank": self.p_rank,
            "unipotent_factors": {
                point: [list(pair) for pair in pairs] for point, pairs in self.unipotent_factors.items()
            },
            "dim_total": self.dim_total,
            "discrete_corank": self.discrete_corank,
            "notes": list(self.notes),
        }


def decompose_local_unipotent(n: int, p: int) -> List[Tuple[int, int]]:
    """
    V_(n) = U^(1)/U^(n) as a product of Witt groups: every i < n prime to p with
    the least r_i such that p^{r_i} i >= n.

    Example:
        >>> decompose_local_unipotent(4, 2)
        [(1, 2), (3, 1)]
    """
    require_prime(p)
    require_positive(n, "n")
    return [(i, slot_length(i, n, p)) for i in slot_indices(n, p)]


def _witt_factor(r: int) -> str:
    return f"W_{r}"


def jacobian_report(p: int, genus: int, p_rank: int, modulus: Modulus) -> StructureReport:
    """
    Decomposition of J_{X,m}: torus rank #S - 1, abelian part J_X, unipotent
    part prod_x V_(n_x); dim = g + deg m - 1 when S is nonempty.
    """
    require_prime(p)
    require_positive(genus, "genus", minimum=0)
    if not 0 <= p_rank <= genus:
        raise ValidationError(f"p-rank must lie in [0, g] = [0, {genus}], got {p_rank}")
    points = modulus.points
    torus_rank = len(points) - 1 if points else 0
    factors = {str(pt): decompose_local_unipotent(n, p) for pt, n in modulus.support}
    factors = {pt: pairs for pt, pairs in factors.items() if pairs}
    dim_total = genus + (modulus.degree - 1 if points else 0)
    logger.debug(f"jacobian report: p={p} g={genus} modulus={modulus} dim={dim_total}")

    notes = []
    if genus:
        notes.append(f"J_X (dim {genus}, p-rank {p_rank})")
    if torus_rank:
        notes.append(f"G_m^{torus_rank}")
    for pt, n in modulus.support:
        pairs = factors.get(str(pt))
        if pairs:
            notes.append(f"V_({n}) at {pt} = " + " x ".join(_witt_factor(r) for _, r in pairs))
    return StructureReport(
        torus_rank=torus_rank,
        abelian_dim=genus,
        unipotent_factors=factors,
        dim_total=dim_total,
        p_rank=p_rank,
        notes=notes,
    )


def uni_ab_factors(p: int, modulus: Modulus) -> List[str]:
    """
    [Z_p^{#S-1}] followed by W[F^{r_{x,i}}] for each x in S and 1 <= i <= n_x - 1 prime to p.

    Example:
        >>> uni_ab_factors(2, Modulus.parse("0:4,1:1", FieldSpec(2)))
        ['Z_p^1', 'W[F^2]', 'W[F^1]']
    """
    if modulus.is_zero():
        raise ValidationError("uni_ab_factors needs a modulus supported on a nonempty S")
    factors = [f"Z_p^{len(modulus.points) - 1}"]
    for _, n in modulus.support:
        factors.extend(f"W[F^{r}]" for _, r in decompose_local_unipotent(n, p))
    return factors


def mult_part_report(num_points: int, torsion: Optional[str] = None) -> StructureReport:
    """
    The multiplicative part Diag(J_X(k)_tor x ker(sum: (Q/Z)^S -> Q/Z)); only #S and the
    caller's torsion descriptor enter.
    """
    require_positive(num_points, "#S", minimum=0)
    kernel_rank = max(num_points - 1, 0)
    parts = []
    if torsion and torsion.strip() not in ("", "0", "trivial"):
        parts.append(torsion.strip())
    if kernel_rank:
        parts.append(f"ker(sum: (Q/Z)^{num_points} -> Q/Z)")
    note = f"Diag({' x '.join(parts)})" if parts else "trivial"
    return StructureReport(discrete_corank=kernel_rank, notes=[note])


def frobenius_kernel_exponent(p: int, genus: int, modulus: Modulus, n: int) -> int:
    """e with |J_{X,m}[F^n]| = p^e, i.e. n dim J_{X,m}."""
    require_positive(n, "n", minimum=0)
    if n == 0:
        return 0
    return n * jacobian_report(p, genus, 0, modulus).dim_total


def pro_p_report(p: int, modulus: Modulus, n: int, p_rank: int) -> StructureReport:
    """
    Finite level n of the maximal pro-p quotient: (Z/p^n)^{f_X} and, per point,
    the dual of U^(1)/U^(min(p^n, n_x)) through its Witt slots.
    """
    require_prime(p)
    require_positive(n, "n")
    require_positive(p_rank, "p-rank", minimum=0)
    notes = [f"(Z/p^{n})^{p_rank}"] if p_rank else []
    factors = {}
    for pt, n_x in modulus.support:
        level = min(p ** n, n_x)
        slots = decompose_local_unipotent(level, p)
        if slots:
            factors[str(pt)] = slots
            notes.append(
                f"Hom(U^(1)/U^({level}), Q_p/Z_p) at {pt}: level {level}, slots "
                + ", ".join(f"({i},{r})" for i, r in slots)
            )
    report = StructureReport(unipotent_factors=factors, p_rank=p_rank, notes=notes)
    report.dim_total = report.unipotent_dim
    return report


def connected_part_report(p: int, genus: int, modulus: Modulus, n: int) -> StructureReport:
    """
    The finite level J_{X,m}[F^n] of the connected part. The ranks are those of
    J_{X,m}; the notes give the order exponent and, per point, the slots
    W_{r_i}[F^n] = W_{min(r_i, n)}.
    """
    require_positive(n, "n")
    base = jacobian_report(p, genus, 0, modulus)
    exponent = frobenius_kernel_exponent(p, genus, modulus, n)
    notes = [f"|J_X,m[F^{n}]| = p^{exponent}"]
    for pt, pairs in base.unipotent_factors.items():
        notes.append(f"[F^{n}] at {pt}: " + ", ".join(f"({i},{min(r, n)})" for i, r in pairs))
    return StructureReport(
        torus_rank=base.torus_rank,
        abelian_dim=genus,
        unipotent_factors=base.unipotent_factors,
        dim_total=base.dim_total,
        notes=notes,
    )


def local_level_transition(n: int, p: int) -> List[Tuple[int, int, int]]:
    """
    (i, r_i at level n p, r_i at level n) for the slots of V_(n); passing from
    V_(np) to V_(n) restricts each slot by one Witt component.
    """
    require_positive(n, "n")
    return [(i, slot_length(i, n * p, p), slot_length(i, n, p)) for i in slot_indices(n, p)]
