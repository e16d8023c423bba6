"""Exception hierarchy shared by the decomposition modules and the CLI."""


class CsmpError(Exception):
    """Base class for every error raised by this package."""

    exit_code = 1


class InvalidParameterError(CsmpError, ValueError):
    """A period, index, length or window parameter is out of range."""

    exit_code = 2


class SignalIOError(CsmpError, OSError):
    """A signal or result file could not be read, parsed or written."""

    exit_code = 3


class NumericalGuardError(CsmpError, ArithmeticError):
    """A computation hit a degenerate configuration (e.g. |c| = 1 for a pair)."""

    exit_code = 4


class NoPeriodicContentError(CsmpError):
    """Stage 1 found no periodic energy left in the signal."""
