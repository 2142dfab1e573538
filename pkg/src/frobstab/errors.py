"""Exception hierarchy shared by the library and the CLI.

The CLI maps these onto exit codes: validation problems exit 2, hypothesis
violations exit 3, invariant breaches exit 1.
"""


class FrobstabError(Exception):
    """Base class for every error raised by this package."""


class ValidationError(FrobstabError, ValueError):
    """Input is malformed or outside an operation's domain."""


class NotNormalizedError(ValidationError):
    """A slope profile was expected in HN-normal form (strictly decreasing slopes)."""


class ZeroSheafError(ValidationError):
    """The requested truncated power is the zero sheaf; its instability is undefined."""


class RankMismatchError(ValidationError):
    """Two polygons were compared whose total ranks differ."""


class HypothesisError(FrobstabError):
    """A formula was requested outside the hypotheses under which it is a theorem.

    Callers may re-run with ``force=True`` to evaluate it anyway.
    """


class SlopeOrderError(HypothesisError):
    """A claimed filtration is not ordered by strictly decreasing slope."""


class InvariantError(FrobstabError, AssertionError):
    """An internal consistency check failed. Never expected."""
