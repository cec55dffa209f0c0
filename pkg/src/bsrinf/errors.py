"""Exception hierarchy shared by all modules."""

from __future__ import annotations


class BSRinfError(Exception):
    """Base class for every error raised by this package."""


class InvalidInput(BSRinfError, ValueError):
    """Malformed or out-of-domain arguments."""


class DimensionMismatch(InvalidInput):
    pass


class NotSquare(InvalidInput):
    pass


class NonCoprimeInput(InvalidInput):
    pass


class NonDivisor(InvalidInput):
    pass


class InfiniteQuotient(InvalidInput):
    """The relation matrix is singular, so the quotient is not finite."""


class DegenerateParams(InvalidInput):
    """m = n: the torsion subgroup would be infinite."""


class PreconditionViolated(InvalidInput):
    pass


class ParentMismatch(BSRinfError, ValueError):
    """Operands belong to different groups."""


class NotHomomorphism(BSRinfError):
    pass


class NotBijective(BSRinfError):
    pass


class BoundExceeded(BSRinfError):
    """A brute-force computation would exceed its configured cap."""

    def __init__(self, message: str, count: int | None = None, cap: int | None = None):
        super().__init__(message)
        self.count = count
        self.cap = cap


class Inconsistency(BSRinfError):
    """Two independent computations disagree; indicates a bug."""
