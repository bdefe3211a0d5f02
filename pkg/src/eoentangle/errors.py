"""Exception hierarchy shared across the package."""


class EOEntangleError(Exception):
    """Base class for all package errors."""


class ConfigError(EOEntangleError, ValueError):
    """Bad configuration input (CLI exit code 2)."""


class NumericalError(EOEntangleError, ArithmeticError):
    """A computation could not be carried out (CLI exit code 3)."""


class InstabilityError(NumericalError):
    """Drift matrix is not Hurwitz, so no steady state exists."""

    def __init__(self, message: str, eigenvalue: complex | None = None):
        super().__init__(message)
        self.eigenvalue = eigenvalue


class IntegrationError(NumericalError):
    """Adaptive integrator broke down (step underflow, budget exceeded)."""


class PhysicalityError(NumericalError):
    """Covariance matrix violates the uncertainty principle beyond tolerance."""


class DriftSpecError(EOEntangleError, ValueError):
    """Mode-space drift is outside the real-quadrature (BS/TMS/decay) class."""
