"""Exception hierarchy shared by every module."""


class DelayCalcError(Exception):
    """Base class for all library errors."""


class NegativeSupport(DelayCalcError, ValueError):
    """A function meant to be a signal is nonzero somewhere before time 0."""


class InvalidWindow(DelayCalcError, ValueError):
    """Window parameters violate ``0 <= m <= d``."""


class NegativeDelay(DelayCalcError, ValueError):
    pass


class ConsistencyViolated(DelayCalcError):
    """Parameters fail the consistency (or non-zenoness) inequalities."""


class PreconditionFailed(DelayCalcError):
    pass


class Nondeterministic(DelayCalcError):
    """A unique output was requested from a nondeterministic element."""


class Unsupported(DelayCalcError):
    pass


class NotClosed(DelayCalcError):
    """Serial connection leaves the class of its operands.

    ``envelope`` holds the bounded delay element that still contains the
    connection, or None when no such element is known.
    """

    def __init__(self, message, envelope=None):
        super().__init__(message)
        self.envelope = envelope


class SignalFormatError(DelayCalcError, ValueError):
    """Malformed signal text or parameter literal."""
