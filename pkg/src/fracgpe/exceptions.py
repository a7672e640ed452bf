"""Exception types shared across the package."""


class FracGPEError(Exception):
    """Base class for all package errors."""


class PoleError(FracGPEError, ValueError):
    """A Gamma function was asked for a value at one of its poles."""


class DomainError(FracGPEError, ValueError):
    """Arguments fall outside the domain where an operation is defined."""


class ConvergenceError(FracGPEError, ArithmeticError):
    """A series or refinement loop failed to reach the requested tolerance."""


class ClosureViolation(FracGPEError):
    """The profile backend met an iterate that is not proportional to the profile.

    Attributes
    ----------
    order:
        Index ``j`` of the iterate that broke closure.
    deviation:
        Maximum relative spread of ``S_{j-1}(x) / f(x)`` over the sample points.
    """

    def __init__(self, order: int, deviation: float):
        self.order = order
        self.deviation = deviation
        super().__init__(
            f"source of iterate {order} is not proportional to the profile "
            f"(relative spread {deviation:.3e}); use the grid backend"
        )


class NumericalFailure(FracGPEError, ArithmeticError):
    """NaN or Inf appeared during a computation."""

    def __init__(self, message: str, last_good_time: float | None = None):
        self.last_good_time = last_good_time
        super().__init__(message)


class StabilityError(FracGPEError, ValueError):
    """Requested time step exceeds the explicit stability bound."""


class GridMismatch(FracGPEError, ValueError):
    """Two objects that must share a grid do not."""


class ConfigError(FracGPEError, ValueError):
    """A scenario configuration failed validation."""


class SeriesExtrapolationWarning(UserWarning):
    """The truncated series is being evaluated where its last term is not small."""
