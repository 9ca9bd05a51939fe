"""Exception hierarchy shared by the engine and the command line."""

from typing import Optional


class PinskerLabError(Exception):
    """Base class for every error raised by pinskerlab."""


class ParameterError(PinskerLabError, ValueError):
    """An argument lies outside the domain an operation accepts."""


class VectorValidationError(ParameterError):
    """A vector breaks one of its type invariants.

    Attributes:
        invariant: Short tag of the violated invariant, e.g. ``"sum ≠ 1"``.
        name: Name of the offending argument (``"p"``, ``"q"``, ...).
    """

    def __init__(self, invariant: str, detail: str = "", name: Optional[str] = None):
        self.invariant = invariant
        self.name = name
        prefix = f"{name}: " if name else ""
        message = f"{prefix}{invariant}"
        if detail:
            message += f" ({detail})"
        super().__init__(message)


class DomainError(PinskerLabError, ArithmeticError):
    """A formula was evaluated where it has no value and no flagged convention applies."""
