"""
Exception hierarchy for the symplectic toolkit.

Two families matter to callers:
- HypothesisError: the input violates a mathematical hypothesis (not PD, not
  commuting, kernel not symplectic, ...). The CLI maps these to exit code 2.
- Everything else (bad files, bad shapes, numerical breakdown) maps to exit code 1.
"""

from typing import Any


class SymplecticError(Exception):
    """Base class for all errors raised by this package."""


class InvalidInputError(SymplecticError, ValueError):
    """Malformed arguments: odd dimension, shape mismatch, empty family, ..."""


class MatrixFileError(SymplecticError):
    """A matrix file could not be read, parsed or written."""


class NumericalFailureError(SymplecticError, RuntimeError):
    """A construction finished but its residuals exceed tol_residual."""

    def __init__(self, message: str, diagnostics: dict[str, Any] | None = None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


# =============================================================================
# Hypothesis violations
# =============================================================================

class HypothesisError(SymplecticError, ValueError):
    """
    Input violates a hypothesis of the decomposition being applied.

    Attributes:
        hypothesis: Human-readable name of the violated hypothesis
        residual: Size of the violation, when one is measurable
        details: Extra structured context (offending indices, Gram matrices, ...)
    """

    hypothesis = "unspecified"

    def __init__(
        self,
        message: str,
        residual: float | None = None,
        details: dict[str, Any] | None = None,
    ):
        super().__init__(message)
        self.residual = residual
        self.details = details or {}

    def to_dict(self) -> dict:
        return {
            "type": type(self).__name__,
            "violated_hypothesis": self.hypothesis,
            "message": str(self),
            "residual": self.residual,
            "details": self.details,
        }


class NotSymmetricError(HypothesisError):
    hypothesis = "symmetry"


class NotSkewSymmetricError(HypothesisError):
    hypothesis = "skew-symmetry"


class NotPositiveDefiniteError(HypothesisError):
    hypothesis = "positive definiteness"


class NotPositiveSemidefiniteError(HypothesisError):
    hypothesis = "positive semi-definiteness"


class NotCommutingError(HypothesisError):
    hypothesis = "symplectic commutation"


class StatesNotJointlyReducibleError(NotCommutingError):
    """Two covariance matrices admit no common normal-mode decomposition."""


class KernelNotSymplecticError(HypothesisError):
    hypothesis = "symplectic kernel"


class NotSymplecticSubspaceError(HypothesisError):
    hypothesis = "symplectic subspace"
