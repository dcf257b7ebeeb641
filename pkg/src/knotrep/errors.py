"""Exception hierarchy. Every error carries a short machine-readable ``code``."""

from __future__ import annotations


class KnotrepError(Exception):
    code = "ERROR"


class ParseError(KnotrepError):
    code = "PARSE_ERROR"

    def __init__(self, message: str, position: int | None = None):
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)
        self.position = position


class UnknownKnotError(KnotrepError):
    code = "UNKNOWN_KNOT"


class InconsistentPDError(KnotrepError):
    code = "INCONSISTENT_PD"


class NotAKnotError(KnotrepError):
    """Input describes a link, an empty diagram, or a group whose abelianization is not Z."""

    code = "NOT_A_KNOT"


class FieldError(KnotrepError):
    code = "FIELD_ERROR"


class BackendMismatchError(KnotrepError):
    code = "BACKEND_MISMATCH"


class IndeterminateRankError(KnotrepError):
    """Singular values fall inside the tolerance band around the rank threshold."""

    code = "INDETERMINATE_RANK"

    def __init__(self, message: str, singular_values=None):
        super().__init__(message)
        self.singular_values = singular_values


class CocycleError(KnotrepError):
    code = "NOT_A_COCYCLE"


class RelatorError(KnotrepError):
    code = "RELATOR_FAILURE"


class HypothesisFailure(KnotrepError):
    code = "HYPOTHESIS_FAILURE"

    def __init__(self, message: str, failing_k=()):
        super().__init__(message)
        self.failing_k = tuple(failing_k)


class ConvergenceError(KnotrepError):
    code = "NO_CONVERGENCE"

    def __init__(self, message: str, history=()):
        super().__init__(message)
        self.history = list(history)
