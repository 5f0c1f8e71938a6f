"""
Command-line front end.

Every subcommand prints one JSON document on stdout (sorted keys, compact
separators, "schema": "1"), or a table with --pretty. Logs go to stderr.

Exit codes: 0 success, 1 domain error (or failed verify suites), 2 usage error.

Usage:
    python ramify.py symbol --p 2 --m 1 --f "[1/u]" --g "1-u"
    python ramify.py modulus --p 3 --type alpha_p --data "x^2" --S "inf"
    python ramify.py jacobian --p 2 --genus 0 --prank 0 --modulus "0:4,inf:7"
    python ramify.py verify --suite witt_laws --suite units --cases 50 --seed 1
"""
import argparse
import json
import re
import sys
from typing import Callable, Dict, List, Optional, Sequence

from sympy import Poly, Symbol, SympifyError, sympify
from tabulate import tabulate

from algebra import FieldSpec, PointOfP1, PrincipalUnit, laurent_expand, parse_rational, parse_witt_literal
from artin_hasse import decompose_unit
from conductor import (
    ETALE_ASW,
    KUMMER,
    LOCAL_LOCAL,
    GroupSpec,
    local_conductor,
    parse_class,
    parse_group,
    reduce_class,
)
from config import SCHEMA_VERSION, get_config
from curve import Modulus, parse_point, parse_points
from localsym import LocalWittElement, fil_level, symbol_at
from modulus import GlobalTorsorClass, minimal_modulus
from structure import connected_part_report, jacobian_report, pro_p_report, uni_ab_factors
from utils.logging_config import get_logger, set_level
from utils.validation import RamificationError, ValidationError, raise_for_result, validate_cli_flags
from utils.verification import SUITES, run_suites
from witt import WittVector

logger = get_logger(__name__)

WITT_OPS = ("add", "sub", "mul", "neg", "frobenius", "verschiebung", "restrict", "ghost", "teichmuller")
MODULUS_TYPES = ("alpha_p", "local-local", "asw", "kummer")


# ============================================================
# Shared flag handling
# ============================================================

def _field_spec(args) -> FieldSpec:
    """The working field from --p, --d and --field-modulus (a polynomial in t)."""
    for warning in raise_for_result(
        validate_cli_flags(args.p, args.d, args.field_modulus, getattr(args, 'm', None), getattr(args, 'n', None),
                           cap=get_config().witt.max_length_cap)
    ):
        logger.warning(warning)
    if args.d == 1:
        return FieldSpec(args.p)
    t = Symbol('t')
    try:
        poly = Poly(sympify(args.field_modulus, locals={'t': t}), t)
    except (SympifyError, TypeError, ValueError) as exc:
        raise ValidationError(f"--field-modulus {args.field_modulus!r} is not a polynomial in t") from exc
    coeffs = tuple(int(c) % args.p for c in poly.all_coeffs())
    return FieldSpec(args.p, args.d, coeffs)


def _uses_local_variable(*texts: Optional[str]) -> bool:
    return any(text and re.search(r"u", text) for text in texts)


def _local_point(args, spec: FieldSpec, *texts: str) -> PointOfP1:
    """--at, defaulting to 0; expressions in u are read at the point 0."""
    at = parse_point(args.at, spec) if args.at else PointOfP1.finite(spec.zero())
    if _uses_local_variable(*texts) and at != PointOfP1.finite(spec.zero()):
        raise ValidationError("expressions in the local variable u are read at the point 0; use x with --at")
    return at


def _parse_field_witt(text: str, spec: FieldSpec) -> WittVector:
    components = parse_witt_literal(text, spec)
    values = []
    for c in components:
        if not c.is_constant():
            raise ValidationError(f"Witt literal component {c} is not a constant")
        values.append(c.evaluate(spec.zero()))
    return WittVector(spec.p, tuple(values))


def _parse_integer_witt(text: str, p: int) -> WittVector:
    body = text.strip()
    if not (body.startswith("[") and body.endswith("]")):
        raise ValidationError(f"Witt literal {text!r} must be bracketed")
    try:
        values = tuple(int(part) for part in body[1:-1].split(","))
    except ValueError as exc:
        raise ValidationError(f"integer Witt literal {text!r} has a non-integer component") from exc
    return WittVector(p, values)


def _components(vector: WittVector) -> List[str]:
    return [str(c) for c in vector.components]


# ============================================================
# Subcommands
# ============================================================

def cmd_witt(args) -> dict:
    if args.ring == "integers":
        raise_for_result(validate_cli_flags(args.p))
        parse = lambda text: _parse_integer_witt(text, args.p)  # noqa: E731
    else:
        spec = _field_spec(args)
        parse = lambda text: _parse_field_witt(text, spec)  # noqa: E731
    if args.a is None:
        raise ValidationError("--a is required")
    a = parse(args.a)
    op = args.op
    if op in ("add", "sub", "mul"):
        if args.b is None:
            raise ValidationError(f"--op {op} needs --b")
        b = parse(args.b)
        value = {"add": a + b, "sub": a - b, "mul": a * b}[op]
    elif op == "neg":
        value = -a
    elif op == "frobenius":
        value = a.frobenius()
    elif op == "verschiebung":
        value = a.verschiebung()
    elif op == "restrict":
        value = a.restrict()
    elif op == "ghost":
        return {"op": op, "ghost": [str(w) for w in a.ghost()]}
    else:
        if a.length != 1:
            raise ValidationError("--op teichmuller takes a single component in --a")
        m = args.m or 1
        value = WittVector.teichmuller(a.components[0], m, args.p)
    return {"op": op, "value": _components(value)}


def cmd_unit_decompose(args) -> dict:
    spec = _field_spec(args)
    if args.n is None or args.unit is None:
        raise ValidationError("unit-decompose needs --n and --unit")
    g = parse_rational(args.unit, spec)
    series = laurent_expand(g, PointOfP1.finite(spec.zero()), args.n)
    decomposition = decompose_unit(PrincipalUnit.from_series(series, args.n))
    return decomposition.to_dict()


def _local_functions(args, spec: FieldSpec):
    if args.f is None:
        raise ValidationError("--f is required")
    functions = parse_witt_literal(args.f, spec)
    if args.m is not None and len(functions) != args.m:
        raise ValidationError(f"--m {args.m} does not match the {len(functions)} components of --f")
    return functions


def cmd_symbol(args) -> dict:
    spec = _field_spec(args)
    functions = _local_functions(args, spec)
    if args.g is None:
        raise ValidationError("--g is required")
    g = parse_rational(args.g, spec)
    at = _local_point(args, spec, args.f, args.g)
    value = symbol_at(functions, g, at, spec.p)
    return {"at": str(at), "value": _components(value)}


def cmd_fil_level(args) -> dict:
    spec = _field_spec(args)
    functions = _local_functions(args, spec)
    at = _local_point(args, spec, args.f)
    level = fil_level(LocalWittElement.from_rational(spec.p, functions, at))
    return {"at": str(at), "level": level}


def cmd_conductor(args) -> dict:
    spec = _field_spec(args)
    if args.group is None or args.class_ is None:
        raise ValidationError("conductor needs --group and --class")
    group = parse_group(args.group, spec.p)
    at = _local_point(args, spec, args.class_)
    c = parse_class(args.class_, group, spec, at)
    reduced = c if group.variant == KUMMER else reduce_class(c)
    return {
        "at": str(at),
        "conductor": local_conductor(c),
        "group": str(group),
        "reduced": reduced.format_representatives(),
    }


def _modulus_group(args, spec: FieldSpec) -> GroupSpec:
    if args.type == "alpha_p":
        return GroupSpec(LOCAL_LOCAL, spec.p, factors=((1, 1),))
    if args.type == "kummer":
        if args.group:
            return parse_group(args.group, spec.p)
        if args.n is None:
            raise ValidationError("--type kummer needs --n or --group mu_n")
        return GroupSpec(KUMMER, spec.p, n=args.n)
    if args.type == "asw" and not args.group:
        if args.m is None:
            raise ValidationError("--type asw needs --m or --group Z/p^m")
        return GroupSpec(ETALE_ASW, spec.p, m=args.m)
    if not args.group:
        raise ValidationError(f"--type {args.type} needs --group")
    group = parse_group(args.group, spec.p)
    expected = {"local-local": LOCAL_LOCAL, "asw": ETALE_ASW}[args.type]
    if group.variant != expected:
        raise ValidationError(f"--group {args.group} does not match --type {args.type}")
    return group


def cmd_modulus(args) -> dict:
    spec = _field_spec(args)
    if args.data is None or args.S is None:
        raise ValidationError("modulus needs --data and --S")
    group = _modulus_group(args, spec)
    S = parse_points(args.S, spec)
    parsed = parse_class(args.data, group, spec, S[0])
    P = GlobalTorsorClass(group, tuple(S), parsed.representatives, parsed.unit)
    return minimal_modulus(P).to_dict()


def cmd_jacobian(args) -> dict:
    spec = _field_spec(args)
    modulus = Modulus.parse(args.modulus or "", spec)
    return jacobian_report(spec.p, args.genus, args.prank, modulus).to_dict()


def cmd_uni_ab(args) -> dict:
    spec = _field_spec(args)
    modulus = Modulus.parse(args.modulus or "", spec)
    return {"factors": uni_ab_factors(spec.p, modulus)}


def cmd_pro_p(args) -> dict:
    spec = _field_spec(args)
    if args.n is None:
        raise ValidationError("pro-p needs --n")
    modulus = Modulus.parse(args.modulus or "", spec)
    report = pro_p_report(spec.p, modulus, args.n, args.prank).to_dict()
    report["connected"] = connected_part_report(spec.p, args.genus, modulus, args.n).to_dict()
    return report


def cmd_verify(args) -> dict:
    seed = get_config().verify.seed if args.seed is None else args.seed
    results = run_suites(args.suite, cases=args.cases, seed=seed)
    return {
        "passed": all(r.passed for r in results),
        "seed": seed,
        "suites": [r.to_dict() for r in results],
    }


COMMANDS: Dict[str, Callable] = {
    "witt": cmd_witt,
    "unit-decompose": cmd_unit_decompose,
    "symbol": cmd_symbol,
    "fil-level": cmd_fil_level,
    "conductor": cmd_conductor,
    "modulus": cmd_modulus,
    "jacobian": cmd_jacobian,
    "uni-ab": cmd_uni_ab,
    "pro-p": cmd_pro_p,
    "verify": cmd_verify,
}


# ============================================================
# Parser and output
# ============================================================

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--p", type=int, help="Characteristic (prime)")
    common.add_argument("--d", type=int, default=get_config().field.default_degree, help="Extension degree")
    common.add_argument("--field-modulus", help="Monic irreducible polynomial in t defining F_{p^d}")
    common.add_argument("--log-level", choices=["DEBUG", "INFO", "WARNING", "ERROR"], help="Log level (stderr)")
    common.add_argument("--precision-override", type=int, help="Symbol precision factor (expert)")
    output = common.add_mutually_exclusive_group()
    output.add_argument(
        "--json", dest="pretty", action="store_false", default=False, help="Compact JSON output (default)"
    )
    output.add_argument("--pretty", dest="pretty", action="store_true", help="Tabular output")

    parser = argparse.ArgumentParser(
        prog="ramify",
        description="Ramification invariants of torsors over P^1 in characteristic p",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    witt = sub.add_parser("witt", parents=[common], help="Witt vector arithmetic")
    witt.add_argument("--op", choices=WITT_OPS, required=True)
    witt.add_argument("--a", help="Witt literal, e.g. [1, 0]")
    witt.add_argument("--b", help="Second Witt literal")
    witt.add_argument("--m", type=int, help="Length of a Teichmuller lift")
    witt.add_argument("--ring", choices=["field", "integers"], default="field")

    unit = sub.add_parser("unit-decompose", parents=[common], help="Artin-Hasse unit decomposition")
    unit.add_argument("--n", type=int, help="Level")
    unit.add_argument("--unit", help="Principal unit in u, e.g. 1+u+u^3")

    for name, help_text in (("symbol", "Local symbol (f, g)"), ("fil-level", "Filtration level of f")):
        command = sub.add_parser(name, parents=[common], help=help_text)
        command.add_argument("--m", type=int, help="Witt length")
        command.add_argument("--f", help="Witt literal in u (or x with --at)")
        command.add_argument("--at", help="Point of P^1 (default 0)")
        if name == "symbol":
            command.add_argument("--g", help="Nonzero function")

    conductor = sub.add_parser("conductor", parents=[common], help="Local conductor of a class")
    conductor.add_argument("--group", help='"Wm[F^r]", "alpha_p", "Z/p^m" or "mu_n"')
    conductor.add_argument("--class", dest="class_", help="Representative(s), factors separated by ';'")
    conductor.add_argument("--at", help="Point of P^1 (default 0)")

    modulus = sub.add_parser("modulus", parents=[common], help="Minimal modulus of a global class")
    modulus.add_argument("--type", choices=MODULUS_TYPES, required=True)
    modulus.add_argument("--group")
    modulus.add_argument("--data", help="Global representative(s) in x")
    modulus.add_argument("--S", help='Removed points, e.g. "0,1,inf"')
    modulus.add_argument("--m", type=int)
    modulus.add_argument("--n", type=int)

    for name, help_text in (
        ("jacobian", "Structure of J_{X,m}"),
        ("uni-ab", "Unipotent abelian fundamental group factors"),
        ("pro-p", "Finite level of the maximal pro-p quotient"),
    ):
        command = sub.add_parser(name, parents=[common], help=help_text)
        command.add_argument("--modulus", help='"pt:mult,pt:mult,..."')
        command.add_argument("--genus", type=int, default=0)
        command.add_argument("--prank", type=int, default=0)
        if name == "pro-p":
            command.add_argument("--n", type=int)

    verify = sub.add_parser("verify", parents=[common], help="Run the built-in property suites")
    verify.add_argument("--suite", action="append", choices=sorted(SUITES), help="Suite name (repeatable)")
    verify.add_argument("--cases", type=int, help="Cases per suite")
    verify.add_argument("--seed", type=int)
    return parser


def _cell(value) -> str:
    if isinstance(value, (list, dict)):
        return json.dumps(value, sort_keys=True, separators=(",", ":"))
    return str(value)


def render(payload: dict, pretty: bool) -> str:
    if not pretty:
        return json.dumps(payload, sort_keys=True, separators=(",", ":"))
    if "suites" in payload:
        rows = [[s["name"], s["cases"], s["failed"], "OK" if s["passed"] else "FAIL"] for s in payload["suites"]]
        return tabulate(rows, headers=["Suite", "Cases", "Failed", "Status"], tablefmt="simple")
    rows = [[key, _cell(value)] for key, value in sorted(payload.items())]
    return tabulate(rows, headers=["Field", "Value"], tablefmt="simple")


def run(argv: Optional[Sequence[str]] = None, stdout=None, stderr=None) -> int:
    """Parse argv, dispatch, print the result; returns the exit code."""
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2

    if args.log_level:
        set_level(args.log_level)
    cfg = get_config()
    try:
        if args.precision_override is not None:
            if args.precision_override < 1:
                raise ValidationError("--precision-override must be >= 1")
            with cfg.override("symbol", precision_factor=args.precision_override):
                payload = COMMANDS[args.command](args)
        else:
            payload = COMMANDS[args.command](args)
    except ValidationError as exc:
        logger.debug(f"{args.command}: usage error: {exc}")
        print(f"error: {exc}", file=stderr)
        return 2
    except RamificationError as exc:
        logger.debug(f"{args.command}: {type(exc).__name__}: {exc}")
        print(f"error: {type(exc).__name__}: {exc}", file=stderr)
        return 1

    payload = {"schema": SCHEMA_VERSION, **payload}
    print(render(payload, args.pretty), file=stdout)
    if args.command == "verify" and not payload["passed"]:
        return 1
    return 0


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
