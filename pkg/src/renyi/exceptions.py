"""Exception hierarchy shared across the package.

The split mirrors how failures are handled at the package boundaries:
input and precondition problems map to CLI exit code 2, enumeration-cap
refusals are a species of precondition problem, and numerical
non-convergence is a distinct, rarer failure that must never be silently
swallowed.
"""

from __future__ import annotations

__all__ = [
    "RenyiError",
    "InputValidationError",
    "EnumerationLimitError",
    "NumericalStabilityError",
]


class RenyiError(Exception):
    """Base class for all package-specific errors."""


class InputValidationError(RenyiError, ValueError):
    """Raised when arguments violate a documented precondition."""


class EnumerationLimitError(InputValidationError):
    """Raised when an exact enumeration would exceed its configured cap."""


class NumericalStabilityError(RenyiError, FloatingPointError):
    """Raised when an iterative solver cannot reach its tolerance."""
