"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class UnsupportedParameterError(DomainError):
    """Parameters are valid but outside the supported regime (e.g. mu <= 0)."""


class SingularPointError(ValueError):
    """Evaluation was requested too close to a singular point."""


class QuadratureAccuracyError(RuntimeError):
    """Adaptive quadrature could not reach the requested accuracy.

    Carries the best available estimate so callers can decide whether the
    partial result is still usable.
    """

    def __init__(self, message: str, best_estimate: float, error_estimate: float):
        super().__init__(message)
        self.best_estimate = best_estimate
        self.error_estimate = error_estimate
