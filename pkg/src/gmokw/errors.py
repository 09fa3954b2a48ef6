"""Exception hierarchy shared across the package."""


class GMOKwError(Exception):
    """Base class for all package errors."""


class ParameterError(GMOKwError, ValueError):
    """A distribution or family parameter violates its constraints."""


class DomainError(GMOKwError, ValueError):
    """An evaluation point lies outside the support, or a denominator vanishes."""


class ArgumentError(GMOKwError, ValueError):
    """A probability, rank, order or similar argument is out of range."""


class ConvergenceError(GMOKwError, RuntimeError):
    """A truncated series hit its term cap before meeting the tolerance."""

    def __init__(self, message, estimate=None, terms=None):
        super().__init__(message)
        self.estimate = estimate
        self.terms = terms


class QuadratureError(GMOKwError, RuntimeError):
    """Numerical integration failed to stabilise.

    ``estimate`` holds the last integral estimate and ``bound`` the size of the
    last change between refinement levels.
    """

    def __init__(self, message, estimate=None, bound=None):
        super().__init__(message)
        self.estimate = estimate
        self.bound = bound


class DivergenceError(QuadratureError):
    """An expectation (moment, mgf) does not exist or did not stabilise."""


class BranchError(GMOKwError, ValueError):
    """A closed-form branch was requested outside its validity region."""


class RegimeError(GMOKwError, ValueError):
    """A series route was requested for the wrong alpha regime."""


class NotNestedError(GMOKwError, ValueError):
    """Two fitted models are not nested, so a likelihood-ratio test is invalid."""


class SingularInformationError(GMOKwError, ArithmeticError):
    """The observed information matrix cannot be inverted."""


class NumericalFailure(GMOKwError, ArithmeticError):
    """A derivative or matrix came out non-finite."""


class InsufficientEquationsError(GMOKwError, ValueError):
    """Fewer moment equations than free parameters."""


class OptimizerError(GMOKwError, RuntimeError):
    """An optimiser failed outright; ``trace`` holds what it returned."""

    def __init__(self, message, trace=None):
        super().__init__(message)
        self.trace = trace
