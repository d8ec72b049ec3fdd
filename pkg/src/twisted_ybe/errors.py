"""Exception types raised on malformed input.

Mathematical failures (an identity not holding) are never raised; checkers
report them in a CheckReport instead.
"""


class TwistedYBEError(Exception):
    pass


class DimensionError(TwistedYBEError, ValueError):
    """Operands disagree in local dimension, arity or shape."""


class DegenerateDeformationError(TwistedYBEError, ValueError):
    """q is (numerically) +-1, so lambda = q - 1/q vanishes."""


class PoleError(TwistedYBEError, ZeroDivisionError):
    """A coefficient denominator vanishes at the requested momentum."""

    def __init__(self, message, pair=None):
        super().__init__(message)
        self.pair = pair


class SamplingError(TwistedYBEError, RuntimeError):
    pass


class ConfigError(TwistedYBEError, ValueError):
    """Invalid run configuration; the message names the offending key path."""

    def __init__(self, path, message):
        super().__init__(f"{path}: {message}")
        self.path = path
