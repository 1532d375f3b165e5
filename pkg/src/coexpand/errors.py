"""Exception types shared across the package."""

from __future__ import annotations


class CoexpandError(Exception):
    """Base class for all package-specific errors."""


class ParseError(CoexpandError):
    """Raised on malformed expression text.

    Carries the byte offset of the offending token and the set of token
    descriptions that would have been accepted there.
    """

    def __init__(self, message: str, offset: int, expected: frozenset[str] = frozenset()):
        super().__init__(f"{message} (at offset {offset})")
        self.offset = offset
        self.expected = frozenset(expected)


class DomainViolation(CoexpandError):
    """An evaluation reached a primitive outside its natural domain."""

    def __init__(self, primitive: str, where):
        super().__init__(f"{primitive} evaluated outside its domain at {where}")
        self.primitive = primitive
        self.where = where


class DegenerateAffine(CoexpandError):
    """An affine map with zero slope was used where invertibility is required."""


class NotGlueable(CoexpandError):
    """A candidate branch fails the gluing hypotheses."""

    def __init__(self, which: str, reason: str):
        super().__init__(f"{which} branch is not glueable: {reason}")
        self.which = which
        self.reason = reason


class DiagonalInput(CoexpandError):
    """chi was requested on the diagonal x == y where it is undefined."""


class ValueCollision(CoexpandError):
    """f(x) and f(y) agree to within rounding, so chi's quotient is meaningless."""


class CriticalPoint(CoexpandError):
    """The Schwarzian derivative was requested where f' vanishes (or may vanish)."""


class SeamPoint(CoexpandError):
    """The Schwarzian derivative was requested at a glue seam, where f is only C1."""


class PreconditionUnmet(CoexpandError):
    """An operation's documented precondition does not hold for the given input."""


class TheoremViolation(CoexpandError):
    """A certified input contradicts one of the structural theorems.

    This is an alarm, never silently swallowed: it means either the
    certification or the classification machinery has a soundness bug.
    """


class BudgetExceeded(CoexpandError):
    """A search exceeded its configured work budget."""
