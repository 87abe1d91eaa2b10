"""Exception types raised across the package."""

from __future__ import annotations


class NcplocError(Exception):
    """Base class for all package errors."""


class InvalidInputError(NcplocError, ValueError):
    pass


class SpaceMismatchError(InvalidInputError):
    pass


class InvalidTupleError(InvalidInputError):
    pass


class CrossingPartitionError(InvalidInputError):
    pass


class NotAPartitionError(InvalidInputError):
    pass


class BudgetExceededError(NcplocError):
    pass


class NotAPartialOrderError(InvalidInputError):
    pass


class NotALatticeError(InvalidInputError):
    """Raised when a finite poset lacks a meet or join for some pair.

    ``witness`` holds the offending pair and which bound is missing.
    """

    def __init__(self, message: str, witness: tuple) -> None:
        super().__init__(message)
        self.witness = witness


class InvariantViolation(NcplocError, AssertionError):
    """An internal invariant that the mathematics guarantees did not hold."""
