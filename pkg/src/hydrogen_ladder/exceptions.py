"""Exception types raised by hydrogen_ladder."""

import numpy as np


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class TruncationError(ValueError):
    """A truncated basis is too small for the requested quantity."""


class ConvergenceError(RuntimeError):
    """An iterative procedure stopped before reaching its tolerance.

    The best estimate so far is kept on ``partial`` (and ``error`` when known).
    """

    def __init__(self, message, partial=None, error=None):
        super().__init__(message)
        self.partial = partial
        self.error = error


class SingularMatrixError(np.linalg.LinAlgError):
    """A linear system has a zero (or numerically zero) pivot."""

    def __init__(self, message, pivot=None, condition=None):
        super().__init__(message)
        self.pivot = pivot
        self.condition = condition
