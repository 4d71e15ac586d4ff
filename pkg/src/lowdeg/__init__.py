"""Structural algorithms for low-degree polynomials over prime fields.

Large affine subspaces on which a polynomial is constant, partitions of
F_p^n into such subspaces, exact counting, and pseudorandomness checks
(bias, Fourier granularity, affine dispersers and extractors, varieties).
"""

from .errors import (
    ApproximationError,
    DegenerateInputError,
    DimensionError,
    InconsistentOracleError,
    LowDegError,
    ParseError,
    ResourceLimitError,
    RestrictionError,
    UnsupportedFieldError,
)
from .linalg import AffineSubspace, Subspace
from .poly import BoolFn, DerivativeFamily, Polynomial, parse_polynomial, random_polynomial

__all__ = [
    "AffineSubspace",
    "ApproximationError",
    "BoolFn",
    "DegenerateInputError",
    "DerivativeFamily",
    "DimensionError",
    "InconsistentOracleError",
    "LowDegError",
    "ParseError",
    "Polynomial",
    "ResourceLimitError",
    "RestrictionError",
    "Subspace",
    "UnsupportedFieldError",
    "parse_polynomial",
    "random_polynomial",
]
