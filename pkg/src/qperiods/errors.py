"""Exception types shared across the package."""

from __future__ import annotations


class QPeriodsError(ValueError):
    """Base class for domain errors (CLI exit code 1)."""


class ParseError(QPeriodsError):
    def __init__(self, message: str, position: int | None = None):
        self.position = position
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)


class DimensionMismatch(QPeriodsError):
    pass


class NotUnimodular(QPeriodsError):
    pass


class DivisibilityFailure(QPeriodsError):
    """The substitution leaves a non-Laurent term in pivot degree ``j``."""

    def __init__(self, j: int):
        self.j = j
        super().__init__(f"mutation factor power does not divide the coefficient of pivot degree {j}")


class NonBalanced(QPeriodsError):
    pass


class ZeroVector(QPeriodsError):
    pass


class DomainViolation(QPeriodsError):
    pass


class ReductionIncomplete(QPeriodsError):
    pass


class InvalidStep(QPeriodsError):
    def __init__(self, path: tuple[int, ...], reason: str):
        self.path = tuple(path)
        self.reason = reason
        super().__init__(f"invalid step at {list(self.path)}: {reason}")


class StretchUniquenessError(QPeriodsError):
    pass
