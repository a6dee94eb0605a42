"""Exception hierarchy shared by every module.

All errors derive from ``ValueError`` so callers that only care about bad
input can catch that; the CLI maps every :class:`LambertError` to exit code 2.
"""


class LambertError(ValueError):
    """Base class for argument errors raised by lambertkit."""


class DomainError(LambertError):
    """Argument outside the mathematical domain of the operation."""


class SizeError(LambertError):
    """Requested table/order/count exceeds a memory or precision guard."""


class OutOfRangeError(LambertError):
    """Query point lies beyond the range covered by a precomputed table."""


class UsageError(LambertError):
    """Invalid combination of options (unknown name, bad grid, ...)."""
