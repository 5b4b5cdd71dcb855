"""Exact fiber classification and geometric cylindrical decompositions."""

from .cadlift import (
    CellTree,
    cad_with_constraints,
    classify_real,
    decide,
    geometric_cad,
    locate,
    parse_formula,
)
from .cadproject import BasicConstructibleSet, cad_projection, proj1, proj2
from .decompose import minimal_primes
from .exactpoly import ParseError, Polynomial, PolynomialError, Ring
from .fiberclass import Region, fiber_classification
from .groebner import Ideal, ideal_equal, reduced_groebner
from .hermite import hermite_matrix
from .realalg import RealAlgebraicNumber, isolate_roots, partition1d, roots_at_sample, sign_at

__version__ = "0.1.0"

__all__ = [
    "BasicConstructibleSet", "CellTree", "Ideal", "ParseError", "Polynomial", "PolynomialError",
    "RealAlgebraicNumber", "Region", "Ring", "cad_projection", "cad_with_constraints", "classify_real",
    "decide", "fiber_classification", "geometric_cad", "hermite_matrix", "ideal_equal", "isolate_roots",
    "locate", "minimal_primes", "parse_formula", "partition1d", "proj1", "proj2", "reduced_groebner",
    "roots_at_sample", "sign_at",
]
