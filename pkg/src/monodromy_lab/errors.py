"""Exception types raised across the package."""

from __future__ import annotations


class MonodromyLabError(Exception):
    """Base class for all package errors."""


class DomainError(MonodromyLabError, ValueError):
    """Argument outside the supported numerical domain."""


class RangeError(MonodromyLabError, ValueError):
    """Integer index argument out of range."""


class DegenerateCurveError(MonodromyLabError, ValueError):
    """Cubic with a repeated root (vanishing discriminant)."""


class UnsupportedCurveError(MonodromyLabError, ValueError):
    """Curve type not handled by this release (complex roots)."""


class PoleOnPathError(MonodromyLabError, ValueError):
    """Third-kind pole lies on the integration interval."""


class RootOrderError(MonodromyLabError, ValueError):
    """Integration limits are not consecutive real roots."""


class RefinementNeeded(MonodromyLabError):
    """Consecutive loop samples are too far apart to match roots uniquely."""

    def __init__(self, index: int, message: str | None = None):
        self.index = index
        super().__init__(message or f"root matching failed between samples {index} and {index + 1}")


class DegenerateSampleError(MonodromyLabError, ValueError):
    """A loop sample has a double root."""

    def __init__(self, index: int, message: str | None = None):
        self.index = index
        super().__init__(message or f"sample {index} has a repeated root")


class DegeneratePointError(MonodromyLabError, ValueError):
    """Pendulum point at a critical value of the energy-momentum map."""


class RefinementExceededError(MonodromyLabError):
    """Sampling could not satisfy the refinement contract below the size cap."""


class NonIntegralVariationError(MonodromyLabError):
    """Net variation over a closed loop is not within tolerance of an integer."""


class NonUnitaryHolonomyError(MonodromyLabError, ValueError):
    """Holonomy value is not on the unit circle."""
