"""Exception types shared across the toolkit."""

from __future__ import annotations


class GreenWalkError(Exception):
    """Base class for all toolkit errors."""


class ParseError(GreenWalkError):
    """Malformed graph or matrix input."""


class ValidationError(GreenWalkError):
    """A structural precondition was violated."""


class IntegrityError(GreenWalkError):
    """A computed object failed one of its defining residual checks."""

    def __init__(self, message: str, residual: float | None = None):
        super().__init__(message)
        self.residual = residual


class NumericalError(GreenWalkError):
    """Linear algebra did not reach the required accuracy."""


class RunawayError(GreenWalkError):
    """A simulated walk exceeded its step cap."""
