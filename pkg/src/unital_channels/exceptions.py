"""Exception and warning types raised across the package."""


class DimensionError(ValueError):
    """Shapes of the operands are incompatible."""


class ValidationError(ValueError):
    """An input violates a documented precondition."""


class ConvergenceError(RuntimeError):
    """An iterative procedure exhausted its budget.

    ``best_residual`` holds the smallest constraint residual reached.
    """

    def __init__(self, message, best_residual):
        super().__init__(message)
        self.best_residual = best_residual


class GaugeDeficientWarning(UserWarning):
    """A row phase could not be fixed because the reference entry is zero."""
