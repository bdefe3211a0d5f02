"""
Dynamics builders and closed forms for the cascaded, parallel and
dissipative entanglement schemes.

Mode-space matrices act on ladder-operator vectors: (a1, b1, b2†) for the
single-cavity schemes and (a1, a2†, b1, b2†) for the two-cavity
dissipative scheme. They are kept for cross-checks; simulation goes
through quadrature :class:`~eoentangle.gaussian.LinearDynamics`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Literal

import numpy as np
from scipy.integrate import quad_vec

from .errors import InstabilityError
from .gaussian import (
    GaussianState,
    LinearDynamics,
    ModeDriftSpec,
    evolve,
    evolve_exact,
    mode_matrix_to_quadrature,
    noise_propagator,
    quadrature_dynamics,
    trajectory,
)
from .metrics import tms_reference_variance
from .params import DerivedRates

SchemeKind = Literal["cascaded", "parallel", "dissipative"]

THREE_MODE_BASIS = (("a1", False), ("b1", False), ("b2", True))
FOUR_MODE_BASIS = (("a1", False), ("a2", True), ("b1", False), ("b2", True))

# below this √|1 - r²| the parallel closed form switches to its Taylor series
SERIES_THRESHOLD = 1e-6


@dataclass(frozen=True)
class SchemeConfig:
    """Dimensionless scheme parameters.

    ``n_th`` holds (optical, b1, b2) bath occupations; the dissipative
    scheme uses the optical value for both cavities. Initial states are
    thermal at ``initial_occupations`` (defaults to ``n_th``).
    """

    kind: SchemeKind
    r: float
    k0: float = 0.0
    k1: float = 0.0
    k2: float = 0.0
    n_th: tuple[float, float, float] = (0.0, 0.0, 0.0)
    tau1: float = math.pi / 2
    tau2: float = math.pi / 2 + 1.0
    time_grid: tuple[float, ...] = ()
    initial_occupations: tuple[float, float, float] | None = None

    def __post_init__(self):
        if self.kind not in ("cascaded", "parallel", "dissipative"):
            raise ValueError(f"unknown scheme kind {self.kind!r}")
        if not self.r >= 0:
            raise ValueError(f"r must be non-negative, got {self.r}")
        for name in ("k0", "k1", "k2"):
            if not getattr(self, name) >= 0:
                raise ValueError(f"{name} must be non-negative")
        nth = tuple(float(v) for v in self.n_th)
        if len(nth) != 3 or min(nth) < 0:
            raise ValueError("n_th needs three non-negative occupations (optical, b1, b2)")
        object.__setattr__(self, "n_th", nth)
        if self.initial_occupations is not None:
            init = tuple(float(v) for v in self.initial_occupations)
            if len(init) != 3 or min(init) < 0:
                raise ValueError("initial_occupations needs three non-negative values")
            object.__setattr__(self, "initial_occupations", init)
        if self.kind == "cascaded" and not self.tau1 < self.tau2:
            raise ValueError(f"cascaded scheme needs tau1 < tau2, got {self.tau1}, {self.tau2}")
        object.__setattr__(self, "time_grid", tuple(float(t) for t in self.time_grid))

    @classmethod
    def from_rates(cls, rates: DerivedRates, kind: SchemeKind, **kwargs) -> "SchemeConfig":
        k0, k1, k2 = rates.scaled_decays
        return cls(kind=kind, r=rates.ratio, k0=k0, k1=k1, k2=k2,
                   n_th=rates.thermal_occupations, **kwargs)

    def with_(self, **changes) -> "SchemeConfig":
        return replace(self, **changes)

    @property
    def lossless(self) -> bool:
        return self.k0 == self.k1 == self.k2 == 0.0


@dataclass(frozen=True)
class SqueezingReport:
    parameter: float
    ideal_variance: float
    scheme: SchemeKind


@dataclass(frozen=True)
class PiecewiseSchedule:
    """Consecutive constant-dynamics segments ``(dynamics, duration)``."""

    segments: tuple[tuple[LinearDynamics, float], ...]

    @property
    def duration(self) -> float:
        return sum(d for _, d in self.segments)

    def propagator(self) -> np.ndarray:
        """Product of segment propagators, latest segment leftmost."""
        n = self.segments[0][0].drift.shape[0]
        P = np.eye(n)
        for dyn, d in self.segments:
            P = noise_propagator(dyn, d)[0] @ P
        return P

    def evolve(self, state: GaussianState, method: str = "exact", tolerance: float = 1e-9) -> GaussianState:
        for dyn, d in self.segments:
            if method == "exact":
                state = evolve_exact(dyn, state, d)
            elif method == "ode":
                state = evolve(dyn, state, d, tolerance)
            else:
                raise ValueError(f"unknown method {method!r}")
        return state

    def trajectory(self, state: GaussianState, times) -> list[GaussianState]:
        """States at non-decreasing ``times`` measured from the schedule start."""
        out = []
        seg, seg_start, t_prev = 0, 0.0, 0.0
        for t in times:
            t = float(t)
            if t < t_prev:
                raise ValueError("times must be non-decreasing")
            # cross any segment boundaries before t
            while seg < len(self.segments) and t > seg_start + self.segments[seg][1]:
                dyn, d = self.segments[seg]
                state = evolve_exact(dyn, state, seg_start + d - t_prev)
                t_prev = seg_start = seg_start + d
                seg += 1
            if seg >= len(self.segments):
                raise ValueError(f"time {t} beyond schedule end {self.duration}")
            state = evolve_exact(self.segments[seg][0], state, t - t_prev)
            t_prev = t
            out.append(state)
        return out


# --- helpers -----------------------------------------------------------------


def epr_modes(kind: SchemeKind) -> tuple[int, int]:
    """Quadrature mode indices of (b1, b2) for a scheme."""
    return (2, 3) if kind == "dissipative" else (1, 2)


def initial_state(config: SchemeConfig) -> GaussianState:
    """Thermal product state; optical modes at the optical initial occupation."""
    n0, n1, n2 = config.initial_occupations or config.n_th
    if config.kind == "dissipative":
        return GaussianState.thermal([n0, n0, n1, n2])
    return GaussianState.thermal([n0, n1, n2])


def _three_mode(matrix, config: SchemeConfig) -> LinearDynamics:
    return quadrature_dynamics(
        ModeDriftSpec(np.asarray(matrix, dtype=complex), THREE_MODE_BASIS),
        (config.k0, config.k1, config.k2),
        config.n_th,
    )


def beam_splitter_drift() -> np.ndarray:
    """Coherent drift of the red-detuned period on (a1, b1, b2†)."""
    return np.array([[0, 1j, 0], [1j, 0, 0], [0, 0, 0]])


def two_mode_squeezing_drift(r: float) -> np.ndarray:
    """Coherent drift of the blue-detuned period on (a1, b1, b2†)."""
    return np.array([[0, 0, 1j * r], [0, 0, 0], [-1j * r, 0, 0]])


def parallel_drift(r: float) -> np.ndarray:
    return beam_splitter_drift() + two_mode_squeezing_drift(r)


def dissipative_drift(r: float) -> np.ndarray:
    """Coherent drift on (a1, a2†, b1, b2†).

    The (a2†, b2†) entry is -i: cavity 2 couples to b2 by a beam-splitter
    term of unit strength, mirroring cavity 1 with b1. A real entry there
    would not come from any Hermitian Hamiltonian.
    """
    return np.array(
        [
            [0, 0, 1j, 1j * r],
            [0, 0, -1j * r, -1j],
            [1j, 1j * r, 0, 0],
            [-1j * r, -1j, 0, 0],
        ]
    )


# --- cascaded ------------------------------------------------------------------


def cascaded_segment_matrices(config: SchemeConfig) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Lossless mode-space propagators (M1, M2, M1 M2 M1) on (a1, b1, b2†)."""
    t1 = config.tau1
    zeta = config.r * (config.tau2 - config.tau1)
    c, s = math.cos(t1), math.sin(t1)
    M1 = np.array([[c, 1j * s, 0], [1j * s, c, 0], [0, 0, 1]], dtype=complex)
    ch, sh = math.cosh(zeta), math.sinh(zeta)
    M2 = np.array([[ch, 0, 1j * sh], [0, 1, 0], [-1j * sh, 0, ch]], dtype=complex)
    return M1, M2, M1 @ M2 @ M1


def cascaded_schedule(config: SchemeConfig) -> PiecewiseSchedule:
    """Red / blue / red periods with decay and thermal noise in every period."""
    red = _three_mode(beam_splitter_drift(), config)
    blue = _three_mode(two_mode_squeezing_drift(config.r), config)
    return PiecewiseSchedule(
        ((red, config.tau1), (blue, config.tau2 - config.tau1), (red, config.tau1))
    )


# --- parallel ------------------------------------------------------------------


def parallel_dynamics(config: SchemeConfig) -> LinearDynamics:
    return _three_mode(parallel_drift(config.r), config)


def _parallel_kernels(tau: float, r: float) -> tuple[float, float, float]:
    """Return (cos-like, sin(ετ)/ε, (1 - cos ετ)/ε²) with ε² = 1 - r²."""
    e2 = 1.0 - r * r
    if math.sqrt(abs(e2)) < SERIES_THRESHOLD:
        t2 = tau * tau
        c = 1.0 - e2 * t2 / 2.0 + e2 * e2 * t2 * t2 / 24.0
        s = tau * (1.0 - e2 * t2 / 6.0 + e2 * e2 * t2 * t2 / 120.0)
        c2 = t2 * (0.5 - e2 * t2 / 24.0 + e2 * e2 * t2 * t2 / 720.0)
        return c, s, c2
    if e2 > 0:
        eps = math.sqrt(e2)
        half = math.sin(eps * tau / 2.0) / eps
        return math.cos(eps * tau), math.sin(eps * tau) / eps, 2.0 * half * half
    kappa = math.sqrt(-e2)
    half = math.sinh(kappa * tau / 2.0) / kappa
    return math.cosh(kappa * tau), math.sinh(kappa * tau) / kappa, 2.0 * half * half


def parallel_closed_form(tau: float, r: float) -> np.ndarray:
    """Lossless parallel-scheme propagator on (a1, b1, b2†).

    Written through sin(ετ)/ε and (1 - cos ετ)/ε² so it stays finite as
    r → 1 and continues analytically for r > 1.
    """
    if r < 0:
        raise ValueError("r must be non-negative")
    c, s, c2 = _parallel_kernels(tau, r)
    return np.array(
        [
            [c, 1j * s, 1j * r * s],
            [1j * s, 1.0 - c2, -r * c2],
            [-1j * r * s, r * c2, 1.0 + r * r * c2],
        ],
        dtype=complex,
    )


def parallel_trajectory(config: SchemeConfig, times) -> list[GaussianState]:
    """Parallel-scheme states at non-decreasing ``times``.

    With one common decay rate the propagator is e^{-kτ} times the lossless
    closed form, so no error accumulates across steps. This matters near
    r → 1, where transient squeezing inflates the covariance by many orders
    of magnitude. Unequal decays fall back to the generic propagator.
    """
    if not (config.k0 == config.k1 == config.k2):
        return trajectory(parallel_dynamics(config), initial_state(config), times)
    k = config.k0
    dyn = parallel_dynamics(config)
    D = dyn.diffusion
    state0 = initial_state(config)
    sigma0 = state0.covariance

    def prop(t: float) -> np.ndarray:
        M = mode_matrix_to_quadrature(parallel_closed_form(t, config.r), THREE_MODE_BASIS)
        return math.exp(-k * t) * M

    def integrand(t: float) -> np.ndarray:
        P = prop(t)
        return P @ D @ P.T

    states, Q, t_prev = [], np.zeros_like(D), 0.0
    for t in times:
        t = float(t)
        if t < t_prev:
            raise ValueError("times must be non-decreasing")
        if k > 0 and t > t_prev:
            Q = Q + quad_vec(integrand, t_prev, t, epsabs=0.0, epsrel=1e-12)[0]
        t_prev = t
        P = prop(t)
        states.append(GaussianState(P @ state0.mean, P @ sigma0 @ P.T + Q))
    return states


def decoupling_time(r: float) -> float:
    """First instant π/√(1 - r²) at which the optical mode decouples."""
    if r >= 1:
        raise InstabilityError(f"no decoupling time for r = {r} >= 1")
    return math.pi / math.sqrt(1.0 - r * r)


# --- dissipative ---------------------------------------------------------------


def dissipative_dynamics(config: SchemeConfig) -> LinearDynamics:
    """Two-cavity reservoir-engineering dynamics on (a1, a2, b1, b2).

    Both cavities share k0 and the optical occupation; resonator decays
    k1, k2 are included whenever non-zero.
    """
    n0, n1, n2 = config.n_th
    return quadrature_dynamics(
        ModeDriftSpec(dissipative_drift(config.r), FOUR_MODE_BASIS),
        (config.k0, config.k0, config.k1, config.k2),
        (n0, n0, n1, n2),
    )


def effective_decay(config: SchemeConfig) -> float:
    """Effective resonator decay γ = 2(1 - r²)/k0 after eliminating the cavities."""
    if config.k0 <= 0:
        raise ValueError("adiabatic elimination needs k0 > 0")
    if config.r >= 1:
        raise InstabilityError(f"dissipative scheme is unstable for r = {config.r} >= 1")
    return 2.0 * (1.0 - config.r**2) / config.k0


def adiabatic_reduction(config: SchemeConfig) -> tuple[LinearDynamics, float]:
    """Eliminate the optical modes; return resonator dynamics and γ.

    Setting the fast quadratures to their instantaneous fixed point gives
    A_red = A_ss - B A_fs and D_red = D_ss + B D_ff Bᵀ with B = A_sf A_ff⁻¹.
    """
    gamma = effective_decay(config)
    full = dissipative_dynamics(config)
    A, D = full.drift, full.diffusion
    f, s = slice(0, 4), slice(4, 8)
    B = A[s, f] @ np.linalg.inv(A[f, f])
    A_red = A[s, s] - B @ A[f, s]
    D_red = D[s, s] + B @ D[f, f] @ B.T
    return LinearDynamics(A_red, D_red, ("b1", "b2")), gamma


def scaled_time(tau, config: SchemeConfig):
    """x = (1 - r²) τ / k0."""
    return (1.0 - config.r**2) * np.asarray(tau, dtype=float) / config.k0


def _require_equal_resonator_decay(config: SchemeConfig) -> None:
    if config.k1 != config.k2:
        raise ValueError(
            f"formula assumes equal resonator decays, got k1={config.k1}, k2={config.k2}"
        )


def dissipative_transient_variance(x, tau, config: SchemeConfig):
    """Total variance V(x) of the adiabatically reduced dissipative scheme.

    Each resonator contributes its decaying initial thermal variance plus
    its share of the asymptotic value. ``tau`` may be None, in which case
    it is inferred from ``x``; otherwise the pair must satisfy
    x = (1 - r²) τ / k0.
    """
    _require_equal_resonator_decay(config)
    effective_decay(config)
    x = np.asarray(x, dtype=float)
    if tau is None:
        tau = x * config.k0 / (1.0 - config.r**2)
    tau = np.asarray(tau, dtype=float)
    if np.any(np.abs(scaled_time(tau, config) - x) > 1e-9 * np.maximum(1.0, np.abs(x))):
        raise ValueError("inconsistent (x, tau): need x = (1 - r^2) tau / k0")
    r, k0 = config.r, config.k0
    _, n1, n2 = config.initial_occupations or config.n_th
    _, b1, b2 = config.n_th
    total = np.zeros_like(x)
    for n_init, n_bath, k in ((n1, b1, config.k1), (n2, b2, config.k2)):
        decay = np.exp(-2.0 * (x + k * tau))
        asymptote = ((1.0 - r) ** 2 + (n_bath + 1.0) * k0 * k) / (1.0 - r * r + k0 * k)
        total = total + decay * (2.0 * n_init + 1.0) + asymptote * (1.0 - decay)
    return total if total.ndim else float(total)


def dissipative_steady_variance(config: SchemeConfig) -> float:
    """Stationary total variance in the adiabatic limit for k1 = k2."""
    _require_equal_resonator_decay(config)
    gamma = effective_decay(config)
    alpha = config.k1 / gamma
    r = config.r
    _, n1, n2 = config.n_th
    return (2.0 * (1.0 - r) / (1.0 + r) + 2.0 * alpha * (n1 + n2 + 2.0)) / (1.0 + 2.0 * alpha)


# --- squeezing -----------------------------------------------------------------


def squeezing_parameters(config: SchemeConfig) -> SqueezingReport:
    """Ideal squeezing parameter of a scheme and its two-mode squeezed vacuum variance."""
    r = config.r
    if config.kind == "cascaded":
        value = r * (config.tau2 - config.tau1)
    else:
        if r >= 1:
            raise InstabilityError(f"squeezing parameter undefined for r = {r} >= 1")
        value = math.atanh(2.0 * r / (1.0 + r * r)) if config.kind == "parallel" else math.atanh(r)
    return SqueezingReport(value, tms_reference_variance(value), config.kind)
