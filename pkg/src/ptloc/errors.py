"""Exception and warning types shared across the package."""


class PtlocError(Exception):
    """Base class for all package errors."""


class DomainError(PtlocError):
    """Argument outside the mathematical domain of an operation."""


class NonConvergence(PtlocError):
    """Quadrature failed to reach the requested tolerance within its
    subdivision budget.  Usually a sign the integrand violates the
    smoothness or integrability assumptions of the caller."""

    def __init__(self, message, value=None, error=None):
        super().__init__(message)
        self.value = value
        self.error = error


class AccuracyLoss(PtlocError):
    """A special-function evaluation could not meet its accuracy target."""


class GridMismatch(PtlocError):
    """Operator applied on a grid chart that does not support it."""


class InsufficientResolution(PtlocError):
    """Endpoint sampling too coarse or ill-conditioned for a decay fit."""


class DomainViolation(PtlocError):
    """A localized-state profile violates the operator-domain conditions
    (band-edge values must vanish)."""


class ConfigError(PtlocError):
    """Invalid CLI / run configuration."""


class ResolutionWarning(UserWarning):
    """Grid-halving changed an operator application beyond tolerance."""


class TruncationWarning(UserWarning):
    """A truncated spectral integral carries a non-negligible tail bound."""
