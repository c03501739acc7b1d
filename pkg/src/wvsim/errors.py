"""Exception hierarchy shared by every wvsim module."""


class WVSimError(Exception):
    """Base class for all simulator errors."""


class ZeroVector(WVSimError, ValueError):
    pass


class DimMismatch(WVSimError, ValueError):
    pass


class IndexOutOfRange(WVSimError, IndexError):
    pass


class RangeError(WVSimError, ValueError):
    pass


class OrthogonalSelection(WVSimError, ArithmeticError):
    """Pre- and post-selected states are (numerically) orthogonal."""


class WidthMismatch(WVSimError, ValueError):
    pass


class ZeroNorm(WVSimError, ArithmeticError):
    pass


class EnvelopeFailure(WVSimError, RuntimeError):
    """Rejection sampling stalled; carries diagnostics for the caller."""

    def __init__(self, message, *, acceptance=None, attempts=None, trial=None):
        super().__init__(message)
        self.acceptance = acceptance
        self.attempts = attempts
        self.trial = trial


class WindowTooSmall(WVSimError, ValueError):
    pass


class NoAcceptedTrials(WVSimError, RuntimeError):
    pass


class ParseError(WVSimError, ValueError):
    def __init__(self, message, *, line=None, field=None):
        loc = []
        if line is not None:
            loc.append(f"line {line}")
        if field is not None:
            loc.append(f"field {field!r}")
        super().__init__(f"{message} ({', '.join(loc)})" if loc else message)
        self.line = line
        self.field = field


class ValidationError(WVSimError, ValueError):
    def __init__(self, field, message):
        super().__init__(f"{field}: {message}")
        self.field = field
