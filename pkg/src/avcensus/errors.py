"""Exception hierarchy shared by every module.

The CLI maps :class:`PreconditionError` (and subclasses) to exit code 2 and
:class:`InternalAssertionError` to exit code 3.
"""


class CensusError(Exception):
    """Base class for all library errors."""


class PreconditionError(CensusError, ValueError):
    """An input violates an operation's documented preconditions."""


class LimitExceededError(PreconditionError):
    """A desk-scale limit was exceeded; the limit is echoed in the message."""

    def __init__(self, what, value, limit):
        self.what = what
        self.value = value
        self.limit = limit
        super().__init__(f"{what}={value} exceeds configured limit {limit}")


class PrecisionInsufficientError(CensusError):
    """The answer is not determined at the working l-adic precision."""

    def __init__(self, message, precision=None):
        self.precision = precision
        super().__init__(message)


class InternalAssertionError(CensusError, AssertionError):
    """A mathematical identity the code relies on failed to hold."""
