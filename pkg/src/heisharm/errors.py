"""Exception hierarchy shared across the package."""


class HeisharmError(Exception):
    """Base class for all package-specific errors."""


class DimensionMismatchError(HeisharmError):
    """Two operands live on Heisenberg groups of different dimension."""


class DomainError(HeisharmError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class GridMismatchError(HeisharmError):
    """Coefficient sets built on different grids cannot be combined."""


class QuadratureError(HeisharmError):
    """A quadrature failed its internal refinement check.

    Carries the worst offending cell so the caller can diagnose which
    coefficient did not converge.
    """

    def __init__(self, message, worst_cell=None, disagreement=None):
        super().__init__(message)
        self.worst_cell = worst_cell
        self.disagreement = disagreement


class ProfileClassError(HeisharmError):
    """A decay profile of the wrong declared integrability class was supplied."""


class HypothesisError(HeisharmError):
    """A numerical hypothesis check failed; carries the failing sample."""

    def __init__(self, message, sample=None):
        super().__init__(message)
        self.sample = sample


class TailError(HeisharmError):
    """A spectral tail dominates the grid boundary; the moment is unreliable."""

    def __init__(self, message, failing_power=None):
        super().__init__(message)
        self.failing_power = failing_power
