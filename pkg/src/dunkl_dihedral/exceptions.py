"""Exception types raised by the package."""


class DunklError(Exception):
    """Base class for errors raised by this package."""


class ParameterError(DunklError, ValueError):
    """Invalid parameter or argument outside the supported domain."""


class ConvergenceError(DunklError, ArithmeticError):
    """A series failed to converge within its term cap."""

    def __init__(self, message, last_term=None):
        super().__init__(message)
        self.last_term = last_term


class MirrorLineError(ParameterError):
    """Point lies on (or too close to) a reflecting line of I2(m), or at 0."""
