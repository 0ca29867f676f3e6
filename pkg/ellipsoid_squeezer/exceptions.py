"""
Exception hierarchy for the squeezing-function toolkit.

Every exception carries the process exit code the CLI reports for it.
"""
from typing import Any, Dict, List, Optional


class SqueezerError(Exception):
    """Base class for all errors raised by the package."""

    exit_code = 1

    def __init__(self, message: str, details: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.message = message
        self.details = details or {}

    def to_dict(self) -> Dict[str, Any]:
        """Serializable description embedded in error reports."""
        return {
            "type": type(self).__name__,
            "message": self.message,
            "exit_code": self.exit_code,
            "details": self.details,
        }


class SpecError(SqueezerError):
    """Malformed input specification (JSON syntax, unknown model or map)."""

    exit_code = 1


class ValidationError(SqueezerError):
    """A polynomial or domain description failed validation."""

    exit_code = 2

    def __init__(self, message: str, violations: Optional[List[Dict[str, Any]]] = None):
        super().__init__(message, {"violations": violations or []})
        self.violations = violations or []


class DimensionError(ValidationError, ValueError):
    """Point or multi-index length does not match the ambient dimension."""

    def __init__(self, expected: int, got: int, what: str = "point"):
        super().__init__(f"{what} has dimension {got}, expected {expected}")
        self.expected = expected
        self.got = got


class DomainError(SqueezerError, ValueError):
    """A point or parameter lies outside the region where an operation is defined."""

    exit_code = 2


class UnbalancedPolynomialError(DomainError):
    """Map machinery requires wt(K)=wt(L)=1/2 for every term."""


class ConeMembershipError(DomainError):
    """Point is not in the approach region Γ(r', c)."""


class RegimeError(DomainError):
    """The normalized image of a point is not interior to the normalized horosphere."""


class OffBoundaryError(DomainError):
    """Levi analysis requested at a point that is not on the boundary."""


class VanishingGradientError(DomainError):
    """Defining function has a critical point where a tangent space is needed."""


class ConvergenceError(SqueezerError):
    """A numerical optimization or root solve did not converge."""

    exit_code = 3
