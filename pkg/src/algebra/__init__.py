"""
Exact arithmetic: finite fields, Galois rings, polynomials, rational functions and Laurent series.
"""
from .finite_field import FieldElement, FieldError, FieldSpec
from .galois_ring import GaloisRing, GaloisRingElement, p_adic_valuation
from .polynomial import Polynomial
from .rational_function import PointOfP1, RationalFunction
from .laurent import LaurentSeries, PrecisionError, laurent_expand
from .expression import parse_rational, parse_witt_literal
from .units import PrincipalUnit


def residue(s: LaurentSeries):
    """Coefficient of u^{-1} of the differential s du."""
    return s.residue()


__all__ = [
    'FieldElement',
    'FieldError',
    'FieldSpec',
    'GaloisRing',
    'GaloisRingElement',
    'p_adic_valuation',
    'Polynomial',
    'PointOfP1',
    'RationalFunction',
    'LaurentSeries',
    'PrecisionError',
    'PrincipalUnit',
    'laurent_expand',
    'residue',
    'parse_rational',
    'parse_witt_literal',
]
