"""Gaussian simulation of microwave entanglement in an electro-optic hybrid system."""

__version__ = "0.1.0"

from .errors import (
    ConfigError,
    DriftSpecError,
    EOEntangleError,
    InstabilityError,
    IntegrationError,
    NumericalError,
    PhysicalityError,
)
from .gaussian import (
    GaussianState,
    LinearDynamics,
    ModeDriftSpec,
    evolve,
    evolve_exact,
    hurwitz_check,
    lyapunov_rhs,
    propagator,
    quadrature_dynamics,
    steady_state,
)
from .metrics import EprPair, duan_verdict, epr_variance, photon_number, tms_reference_variance
from .params import DerivedRates, PhysicalParams, operation_times, scheme_rates
from .schemes import PiecewiseSchedule, SchemeConfig, SqueezingReport

__all__ = [
    "ConfigError",
    "DerivedRates",
    "DriftSpecError",
    "EOEntangleError",
    "EprPair",
    "GaussianState",
    "InstabilityError",
    "IntegrationError",
    "LinearDynamics",
    "ModeDriftSpec",
    "NumericalError",
    "PhysicalParams",
    "PhysicalityError",
    "PiecewiseSchedule",
    "SchemeConfig",
    "SqueezingReport",
    "duan_verdict",
    "epr_variance",
    "evolve",
    "evolve_exact",
    "hurwitz_check",
    "lyapunov_rhs",
    "operation_times",
    "photon_number",
    "propagator",
    "quadrature_dynamics",
    "scheme_rates",
    "steady_state",
    "tms_reference_variance",
]
