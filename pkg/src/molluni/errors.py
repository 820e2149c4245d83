"""Exception types raised by the numerical routines."""


class NumericalError(RuntimeError):
    """Base class for failures of an otherwise well-posed computation."""


class QuadratureError(NumericalError):
    """Adaptive integration did not reach the requested tolerance."""


class ConvergenceError(NumericalError):
    """An iterative solver ran out of its iteration budget.

    The last iterate is kept on ``.last`` so callers can inspect it.
    """

    def __init__(self, message, last=None):
        super().__init__(message)
        self.last = last


class TruncationError(NumericalError):
    """A series truncation point exceeded the allowed budget."""


class DegenerateRecursionError(NumericalError):
    """The Durbin-Levinson recursion hit a vanishing prediction variance."""


class SingularSystemError(NumericalError):
    """A linear solve was singular or left a residual above tolerance."""


class DegenerateDesignError(ValueError):
    """A regression design has no spread in the covariate."""
