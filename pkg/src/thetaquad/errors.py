"""Exception types shared across the package."""

from __future__ import annotations

__all__ = [
    "ThetaQuadError",
    "ValidationError",
    "DomainError",
    "CapabilityError",
    "ConvergenceError",
]


class ThetaQuadError(Exception):
    """Base class for every error raised by this package."""


class ValidationError(ThetaQuadError, ValueError):
    """A parameter or piece of input data is invalid or inconsistent."""


class DomainError(ThetaQuadError, ValueError):
    """Evaluation or integration was requested outside a function's domain."""


class CapabilityError(ThetaQuadError, ValueError):
    """An integrand cannot supply a derivative of the requested order."""


class ConvergenceError(ThetaQuadError, RuntimeError):
    """The reference integrator did not converge within its panel cap."""
