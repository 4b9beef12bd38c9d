"""Exception hierarchy shared by all modules."""


class CasimirError(Exception):
    """Base class for every error raised by this package."""


class DomainError(CasimirError, ValueError):
    """An argument lies outside the domain of the operation."""


class UnsupportedAxisError(CasimirError):
    """A model cannot be evaluated on the requested frequency axis."""


class PoleError(CasimirError, ZeroDivisionError):
    """Evaluation hit an undamped resonance exactly."""


class CoincidenceError(CasimirError, ValueError):
    """Two positions that must be distinct coincide."""


class DegenerateDenominatorError(CasimirError, ZeroDivisionError):
    """A multiple-reflection denominator vanished."""


class SpectralRadiusError(CasimirError):
    """1 - alpha*G is singular or indefinite; dipoles are too close."""


class ConvergenceError(CasimirError):
    """A quadrature or series failed to reach the requested tolerance."""

    def __init__(self, message, value=None, error=None):
        super().__init__(message)
        self.value = value
        self.error = error


class ConfigError(CasimirError, ValueError):
    """An experiment configuration is malformed."""
