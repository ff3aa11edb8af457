"""Exception types shared across the package."""

from __future__ import annotations


class DiagError(Exception):
    """Base class for all package errors."""


class SpaceMismatchError(DiagError):
    """Hypotheses from different space variants were combined."""


class UnsupportedProjectionError(DiagError):
    """Requested abstraction pair is not on the SqHS->MHS->SHS->BHS chain."""


class ConvexityViolation(DiagError):
    """A set handed to the convex-representation builder is not convex."""

    def __init__(self, below, between, above):
        self.witness = (below, between, above)
        super().__init__(
            f"not convex: {below.canon()} < {between.canon()} < {above.canon()} "
            "with the middle element missing"
        )


class ModelFormatError(DiagError):
    """Model/observation/circuit text failed to parse or validate."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class StateBudgetExceeded(DiagError):
    """Explicit-state search exceeded its visited-state budget."""


class BudgetExhausted(DiagError):
    """A strategy hit its iteration cap; carries the partial result."""

    def __init__(self, message, partial, stats):
        self.partial = partial
        self.stats = stats
        super().__init__(message)


class EncodingError(DiagError):
    """Internal consistency check of the SAT path failed (encoding bug)."""
