"""
Error hierarchy and input validation utilities.
"""
import re
from typing import Dict, List, Optional

from sympy import isprime


class RamificationError(Exception):
    """Base class for every domain error raised by the toolkit."""
    pass


class ValidationError(RamificationError):
    """Custom exception for malformed user input."""
    pass


class ExpressionSyntaxError(ValidationError):
    """Syntax error in an expression literal, carrying the offending position."""

    def __init__(self, message: str, position: int, text: str = ""):
        self.position = position
        self.text = text
        super().__init__(f"{message} at position {position}" + (f" in {text!r}" if text else ""))


GROUP_PATTERNS = (
    re.compile(r"^W(\d+)\[F\^?(\d+)\]$"),
    re.compile(r"^alpha_p(?:\^(\d+))?$"),
    re.compile(r"^Z/(?:p\^(\d+)|(\d+))$"),
    re.compile(r"^mu_(\d+)$"),
)


def require_prime(p: int) -> int:
    """
    Check that p is a prime integer.

    Raises:
        ValidationError: if p is not a prime
    """
    if not isinstance(p, int) or isinstance(p, bool) or not isprime(p):
        raise ValidationError(f"p must be a prime integer, got {p!r}")
    return p


def require_positive(value: int, name: str, minimum: int = 1) -> int:
    """Check that an integer parameter is at least `minimum`."""
    if not isinstance(value, int) or isinstance(value, bool) or value < minimum:
        raise ValidationError(f"{name} must be an integer >= {minimum}, got {value!r}")
    return value


def validate_modulus_literal(text: str) -> Dict[str, any]:
    """
    Validate a modulus literal of the form "pt:mult,pt:mult,...".

    Only the shape is checked here; points are parsed against a field later.

    Args:
        text: Modulus literal, e.g. "0:4,inf:7". The empty string is the zero modulus.

    Returns:
        Dictionary with:
            - valid: bool
            - errors: list of error messages
            - warnings: list of warning messages
            - stats: number of points and total degree

    Example:
        >>> result = validate_modulus_literal("0:4,inf:7")
        >>> result['stats']['degree']
        11
    """
    errors = []
    warnings = []
    degree = 0
    seen = set()

    entries = [entry.strip() for entry in text.split(",")] if text.strip() else []
    for entry in entries:
        point, sep, mult = entry.rpartition(":")
        if not sep or not point.strip():
            errors.append(f"Entry {entry!r} is not of the form point:multiplicity")
            continue
        try:
            value = int(mult)
        except ValueError:
            errors.append(f"Multiplicity {mult!r} of {point!r} is not an integer")
            continue
        if value < 0:
            errors.append(f"Multiplicity of {point!r} is negative")
        elif value == 0:
            warnings.append(f"Point {point!r} has multiplicity 0 and is dropped")
        if point.strip() in seen:
            errors.append(f"Point {point!r} is listed twice")
        seen.add(point.strip())
        degree += max(value, 0)

    return {
        'valid': len(errors) == 0,
        'errors': errors,
        'warnings': warnings,
        'stats': {'points': len(seen), 'degree': degree},
    }


def validate_group_literal(text: str) -> Dict[str, any]:
    """
    Validate a group literal: products of "Wm[F^r]" / "alpha_p", or "Z/p^m", or "mu_n".

    Returns:
        Dictionary with valid / errors / warnings / stats (number of factors)
    """
    errors = []
    factors = [part.strip() for part in text.split("x")] if text.strip() else []
    if not factors:
        errors.append("Empty group literal")
    for factor in factors:
        if not any(pattern.match(factor) for pattern in GROUP_PATTERNS):
            errors.append(f"Unknown group factor {factor!r}")
    if len(factors) > 1 and any(f.startswith(("Z/", "mu_")) for f in factors):
        errors.append("Z/p^m and mu_n cannot appear in a product literal")

    return {
        'valid': len(errors) == 0,
        'errors': errors,
        'warnings': [],
        'stats': {'factors': len(factors)},
    }


def validate_cli_flags(
    p: Optional[int],
    d: int = 1,
    field_modulus: Optional[str] = None,
    m: Optional[int] = None,
    n: Optional[int] = None,
    cap: Optional[int] = None,
) -> Dict[str, any]:
    """
    Validate the flag combination shared by all subcommands.

    Checks:
        - p present and prime
        - d >= 1, and a field modulus is supplied iff d > 1
        - m within [1, cap] when given
        - n >= 1 when given

    Args:
        p: Characteristic
        d: Extension degree of the working field
        field_modulus: Extension modulus polynomial in t (required iff d > 1)
        m: Witt length
        n: Level / exponent parameter
        cap: Largest admissible Witt length

    Returns:
        Dictionary with valid / errors / warnings / stats
    """
    errors = []
    warnings = []

    if p is None:
        errors.append("--p is required")
    elif not isprime(p):
        errors.append(f"--p {p} is not a prime")

    if d < 1:
        errors.append(f"--d must be >= 1, got {d}")
    elif d > 1 and not field_modulus:
        errors.append("--field-modulus is required when --d > 1")
    elif d == 1 and field_modulus:
        warnings.append("--field-modulus is ignored when --d is 1")

    if m is not None:
        if m < 1:
            errors.append(f"--m must be >= 1, got {m}")
        elif cap is not None and m > cap:
            errors.append(f"--m {m} exceeds the Witt length cap {cap}")

    if n is not None and n < 1:
        errors.append(f"--n must be >= 1, got {n}")

    return {
        'valid': len(errors) == 0,
        'errors': errors,
        'warnings': warnings,
        'stats': {'field_size': p ** d if p is not None and d >= 1 else None},
    }


def raise_for_result(result: Dict[str, any]) -> List[str]:
    """Raise ValidationError listing all errors of a validator result; return its warnings."""
    if not result['valid']:
        raise ValidationError("; ".join(result['errors']))
    return result['warnings']
