"""Exception types raised across the package."""


class CalibrationError(ValueError):
    """No physical resistor pair satisfies the requested calibration."""


class ConvergenceError(ArithmeticError):
    """An iterative numeric kernel hit its iteration cap."""


class SolverRunError(RuntimeError):
    """A solver run failed; ``iteration`` records where."""

    def __init__(self, message, iteration=None):
        super().__init__(message)
        self.iteration = iteration
