"""Reducible metabelian representations of knot groups into SL(n), their twisted
cohomology, and numerical deformations into irreducible representations."""

from __future__ import annotations

__version__ = "0.1.0"

from .alexander import alexander_polynomial, check_hypotheses
from .cohomology import cochain_dims, reducible_metabelian, verify_ladder, verify_main_theorem
from .errors import KnotrepError
from .knots import KnotPresentation, Word, load_table, parse_knot_input, wirtinger_presentation
from .lambdas import parse_lambda, resolve_lambda
from .reps import Representation, burde_derham, irreducibility_test, module_action, symmetric_power
from .scalars import ExactBackend, NumericBackend

__all__ = [
    "ExactBackend",
    "KnotPresentation",
    "KnotrepError",
    "NumericBackend",
    "Representation",
    "Word",
    "__version__",
    "alexander_polynomial",
    "burde_derham",
    "check_hypotheses",
    "cochain_dims",
    "irreducibility_test",
    "load_table",
    "module_action",
    "parse_knot_input",
    "parse_lambda",
    "reducible_metabelian",
    "resolve_lambda",
    "symmetric_power",
    "verify_ladder",
    "verify_main_theorem",
    "wirtinger_presentation",
]
