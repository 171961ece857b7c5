"""Exception and warning types shared across the package."""


class FtrError(Exception):
    """Base class for all errors raised by ftrfading."""


class DomainError(FtrError, ValueError):
    """An argument lies outside the region where an operation is defined."""


class NonConvergence(FtrError, ArithmeticError):
    """A numerical procedure did not reach its requested accuracy.

    The best available error estimate is kept on ``estimate`` so callers
    (and the CLI) can report it.
    """

    def __init__(self, message, estimate=None):
        super().__init__(message)
        self.estimate = estimate


class NoFit(FtrError):
    """Every candidate evaluated during a fit failed."""


class PrecisionWarning(UserWarning):
    """Result is computed but floating-point accuracy is likely degraded."""
