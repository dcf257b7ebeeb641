"""Scalar backends: exact number fields and arbitrary-precision complex numbers."""

from .backends import DEFAULT_PRECISION, ExactBackend, NumericBackend, object_array, rank
from .field import (
    FieldElement,
    FieldSpec,
    SquarefreeSplit,
    field_from_minimal_polynomial,
    make_lambda_field,
    squarefree_and_simple_roots,
)
from .poly import LaurentPolynomial, parse_polynomial

__all__ = [
    "DEFAULT_PRECISION",
    "ExactBackend",
    "FieldElement",
    "FieldSpec",
    "LaurentPolynomial",
    "NumericBackend",
    "SquarefreeSplit",
    "field_from_minimal_polynomial",
    "make_lambda_field",
    "object_array",
    "parse_polynomial",
    "rank",
    "squarefree_and_simple_roots",
]
