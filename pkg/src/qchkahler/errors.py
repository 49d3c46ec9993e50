"""Exception types raised by the library.

All of them derive from :class:`ValueError` so callers that only care about
"bad input" can catch one thing.  The CLI maps :class:`DomainError` and its
subclasses to exit code 3.
"""


class DomainError(ValueError):
    """A point, parameter, or profile lies outside the region where the construction is defined."""


class DegenerateFrameError(DomainError):
    """A frame or distribution cannot be built (zero vector, non-SPD metric, vanishing divergences)."""


class ConstraintError(DomainError):
    """A transformation's defining constraint is violated beyond tolerance."""


class NotBiconformallyFlat(DomainError):
    """The flattening construction does not apply (a + k^2 <= 0 or QC(R) != 0)."""
