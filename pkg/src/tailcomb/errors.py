"""Exception types shared across the toolkit."""


class TailcombError(Exception):
    """Base class for toolkit-specific failures."""


class NumericalError(TailcombError):
    """A numerical routine failed to reach its accuracy target.

    Carries the achieved error estimate so callers can decide whether the
    partial result is still usable.
    """

    def __init__(self, message: str, error_estimate: float | None = None):
        super().__init__(message)
        self.error_estimate = error_estimate


class UnsupportedCombinationError(TailcombError, ValueError):
    """The requested calibrator/weight/statistic combination has no
    implemented critical value or combining function."""
