"""Exact calculus of polynomial Poisson structures on coordinate space."""

from .calculus import exterior_derivative, koszul_delta, lichnerowicz, schouten
from .errors import (
    ChartError,
    DegreeError,
    DimensionError,
    HypothesisError,
    NumericError,
    ParseError,
    PoissonKitError,
    TruncationError,
    UnverifiedStructureError,
)
from .exterior import DiffForm, MultiVector, interior, pair, parse_form, parse_multivector, wedge
from .poisson import PoissonStructure, bracket, hamiltonian_field, jacobi_check, rank_at
from .ring import Poly, parse_poly

__all__ = [
    "ChartError",
    "DegreeError",
    "DiffForm",
    "DimensionError",
    "HypothesisError",
    "MultiVector",
    "NumericError",
    "ParseError",
    "PoissonKitError",
    "PoissonStructure",
    "Poly",
    "TruncationError",
    "UnverifiedStructureError",
    "bracket",
    "exterior_derivative",
    "hamiltonian_field",
    "interior",
    "jacobi_check",
    "koszul_delta",
    "lichnerowicz",
    "pair",
    "parse_form",
    "parse_multivector",
    "parse_poly",
    "rank_at",
    "schouten",
    "wedge",
]
