# =============================================================================
# FILE: squeezing/errors.py
# PURPOSE:
#   Exception hierarchy shared by the numerical library and the CLI.
#   Every failure raised on purpose derives from SqueezingError so callers
#   can catch one type and map it to an exit code.
# =============================================================================

from typing import Optional


class SqueezingError(Exception):
    """Base class for all library errors."""


class InvalidArgumentError(SqueezingError, ValueError):
    """Raised for malformed inputs: bad N, mismatched dimensions, non-Hermitian operators."""


class ResourceLimitError(SqueezingError):
    """Raised when a request exceeds a configured size cap (oracle dimension, N cap)."""


class SymmetryViolationError(SqueezingError):
    """Raised when a Z2-symmetric run develops a nonzero transverse mean spin."""


class SearchWindowExhaustedError(SqueezingError):
    """
    Raised when the optimal-time search finds no interior extremum.

    Attributes:
        t_lower, t_upper: edges of the scanned window.
        value_lower, value_upper: objective values at those edges.
    """

    def __init__(
        self,
        message: str,
        t_lower: Optional[float] = None,
        t_upper: Optional[float] = None,
        value_lower: Optional[float] = None,
        value_upper: Optional[float] = None,
    ):
        super().__init__(message)
        self.t_lower = t_lower
        self.t_upper = t_upper
        self.value_lower = value_lower
        self.value_upper = value_upper
