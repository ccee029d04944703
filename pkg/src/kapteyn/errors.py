"""Exception types shared across the package."""


class KapteynError(Exception):
    """Base class for all package errors."""


class DomainError(KapteynError, ValueError):
    """An argument lies outside the validity range of an operation."""


class ConvergenceError(KapteynError):
    """A series or iteration failed to converge within its budget."""


class QuadratureError(KapteynError):
    """Adaptive quadrature did not reach the requested tolerance.

    The best available estimate and its error are attached so callers can
    decide whether to use it anyway.
    """

    def __init__(self, message, estimate=float("nan"), error=float("inf")):
        super().__init__(message)
        self.estimate = estimate
        self.error = error


class UnknownIdError(KapteynError, KeyError):
    """A registry or table id is not known."""

    def __str__(self):
        return str(self.args[0]) if self.args else "unknown id"
