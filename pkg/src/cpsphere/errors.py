"""Exception hierarchy shared across the package.

The CLI maps these onto its exit-code contract: config problems exit 2,
physics-validity violations exit 3, quadrature failures exit 4.
"""

from __future__ import annotations


class CPSphereError(Exception):
    """Base class for all package errors."""


class ConfigError(CPSphereError):
    """Malformed or inconsistent run configuration."""


class ValidityError(CPSphereError):
    """Inputs outside the validity domain of the point-scattering model."""


class SingularConfigurationError(CPSphereError):
    """Multiple-reflection denominator too close to zero to evaluate."""


class QuadratureError(CPSphereError):
    """Semi-infinite integration did not converge within its budget.

    Carries the best available estimate so callers can still report it.
    """

    def __init__(self, message: str, value: float, error: float):
        super().__init__(message)
        self.value = value
        self.error = error


class ValidityWarning(UserWarning):
    """Inputs approach the edge of the point-scattering validity domain."""
