"""Exception hierarchy shared by the cesaro modules."""


class CesaroError(Exception):
    """Base class for every error raised by this package."""


class ParameterError(CesaroError, ValueError):
    """An argument is outside its admissible range (p <= 0, bad grid, ...)."""


class DomainError(CesaroError, ValueError):
    """A special function was called outside its domain."""


class EvaluationError(CesaroError, ArithmeticError):
    """A sequence or weight produced a non-finite value.

    ``index`` is the offending k (or None when unknown) and ``n`` the
    mean size being evaluated when the failure happened.
    """

    def __init__(self, message, index=None, n=None):
        super().__init__(message)
        self.index = index
        self.n = n


class NonConvergenceError(CesaroError, RuntimeError):
    """Adaptive quadrature ran out of panels before reaching its tolerance."""

    def __init__(self, message, value, abs_error_estimate, subdivisions):
        super().__init__(message)
        self.value = value
        self.abs_error_estimate = abs_error_estimate
        self.subdivisions = subdivisions


class BudgetError(CesaroError, RuntimeError):
    """A brute-force evaluation would exceed the configured work budget."""
