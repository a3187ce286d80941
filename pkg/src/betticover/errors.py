"""Exception types shared across the package."""

from __future__ import annotations


class BettiCoverError(Exception):
    """Base class for every error raised by this package."""


class StructuralError(BettiCoverError, ValueError):
    """Malformed input: wrong lengths, out-of-range indices, bad headers."""


class ParseError(StructuralError):
    pass


class DuplicatePointError(ParseError):
    def __init__(self, first: int, second: int):
        super().__init__(f"points {first} and {second} are the same projective point")
        self.indices = (first, second)


class FieldTooSmall(BettiCoverError):
    """The prime field cannot host the requested object."""


class BudgetExceeded(BettiCoverError):
    pass


class NotNonzerodivisor(BettiCoverError):
    pass


class InternalConsistencyError(BettiCoverError, AssertionError):
    """A computed quantity contradicts a structural identity; indicates a bug."""
