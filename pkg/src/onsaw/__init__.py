"""onsaw: exact symbolic verification of affine sl_N r-matrix identities,
the sl_N Onsager algebra, and its classical Askey-Wilson quotients."""

from .exactnum import (
    AlphabetError,
    ExactDivisionError,
    ParamPoly,
    Rational,
    RationalFn,
    SpectralLaurent,
    laurent_derivative,
    laurent_exact_div,
    poly_arith,
)
from .report import Check, Report

__all__ = [
    "AlphabetError",
    "Check",
    "ExactDivisionError",
    "ParamPoly",
    "Rational",
    "RationalFn",
    "Report",
    "SpectralLaurent",
    "laurent_derivative",
    "laurent_exact_div",
    "poly_arith",
]

__version__ = "0.1.0"
