"""Exception types shared across the package."""


class ValidationError(ValueError):
    """An input violates a documented precondition or invariant."""


class FilterDivergenceError(RuntimeError):
    """The Kalman recursion produced non-finite or ill-conditioned values."""


class InfeasibleGapError(ValidationError):
    """A parking path cannot fit inside the sensed clearances."""


class SimulationError(RuntimeError):
    """A scenario run aborted; ``records`` holds the ticks completed so far."""

    def __init__(self, message, records=None):
        super().__init__(message)
        self.records = list(records or [])
