"""Exception hierarchy shared across the package."""


class BlindRankError(Exception):
    """Base class for all errors raised by blindrank."""


class ParameterError(BlindRankError, ValueError):
    """An argument is outside its admissible range."""


class ShapeError(BlindRankError, ValueError):
    """Array dimensions do not agree."""


class DataError(BlindRankError):
    """Bundled or user-supplied data failed validation."""


class ModelAssumptionError(BlindRankError, ValueError):
    """Input violates the signal model (e.g. a negative filter coefficient)."""


class DegenerateError(BlindRankError, ValueError):
    """The problem has no well-defined leading eigenvector."""


class ConvergenceError(BlindRankError, RuntimeError):
    """Power iteration did not reach the requested residual."""

    def __init__(self, message, residual=None, iterations=None):
        super().__init__(message)
        self.residual = residual
        self.iterations = iterations


class VacuousBoundError(BlindRankError, ValueError):
    """The sample bound is undefined because kappa >= beta1."""


class ConfigError(BlindRankError, ValueError):
    """An experiment configuration field is invalid."""

    def __init__(self, field, message):
        super().__init__(f"{field}: {message}")
        self.field = field


class SizeError(ParameterError):
    """Matrix is too large for the dense routines."""
