"""Exception types shared across the package."""


class ResourceCapError(RuntimeError):
    """A computation would exceed a configured size limit."""

    def __init__(self, message: str, predicted: int | None = None, cap: int | None = None):
        super().__init__(message)
        self.predicted = predicted
        self.cap = cap


class InvariantViolation(RuntimeError):
    """A proven inequality or exact identity failed numerically.

    Seeing this means there is a bug, not a counterexample to a theorem.
    """


class ConvergenceError(RuntimeError):
    pass
