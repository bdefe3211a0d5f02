"""
Gaussian moment dynamics for linear open bosonic systems.

States are stored in quadrature form ``(x1, p1, ..., xN, pN)`` with
``x = (b + b†)/√2`` and ``p = -i(b - b†)/√2``, so the vacuum covariance is
``I/2``. Dynamics are the linear moment equations

    dm/dτ = A m,        dσ/dτ = A σ + σ Aᵀ + D

with a real drift ``A`` and a real symmetric diffusion ``D``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy.linalg import expm

from ._integrate import dopri54
from .errors import (
    DriftSpecError,
    InstabilityError,
    NumericalError,
    PhysicalityError,
)

PHYSICALITY_TOL = 1e-9
SYMMETRY_TOL = 1e-12
HURWITZ_MARGIN = 1e-12

# (x, p)ᵀ = T (b, b†)ᵀ
_LADDER_TO_QUAD = np.array([[1.0, 1.0], [-1.0j, 1.0j]]) / np.sqrt(2.0)


def symplectic_form(num_modes: int) -> NDArray[np.float64]:
    """Block-diagonal symplectic form Ω with blocks [[0, 1], [-1, 0]]."""
    return np.kron(np.eye(num_modes), np.array([[0.0, 1.0], [-1.0, 0.0]]))


def _frozen(a: ArrayLike, dtype=float) -> np.ndarray:
    arr = np.array(a, dtype=dtype)
    arr.setflags(write=False)
    return arr


def _symmetrize(m: np.ndarray) -> np.ndarray:
    return 0.5 * (m + m.T)


def min_uncertainty_eigenvalue(covariance: np.ndarray) -> float:
    """Smallest eigenvalue of σ + (i/2)Ω; non-negative for physical states."""
    n = covariance.shape[0] // 2
    herm = covariance + 0.5j * symplectic_form(n)
    return float(np.linalg.eigvalsh(herm).min())


@dataclass(frozen=True)
class GaussianState:
    """First and second quadrature moments of an N-mode Gaussian state.

    The covariance is symmetrized on construction and checked against the
    uncertainty relation; violations below ``PHYSICALITY_TOL`` are accepted
    as round-off, larger ones raise :class:`PhysicalityError`.
    """

    mean: NDArray[np.float64]
    covariance: NDArray[np.float64]
    num_modes: int = field(init=False)

    def __post_init__(self):
        mean = np.asarray(self.mean, dtype=float).ravel()
        cov = np.asarray(self.covariance, dtype=float)
        if cov.ndim != 2 or cov.shape[0] != cov.shape[1] or cov.shape[0] % 2:
            raise ValueError(f"covariance must be 2N x 2N, got shape {cov.shape}")
        if mean.shape != (cov.shape[0],):
            raise ValueError(
                f"mean has length {mean.size}, covariance needs {cov.shape[0]}"
            )
        if not (np.all(np.isfinite(cov)) and np.all(np.isfinite(mean))):
            raise NumericalError("non-finite moments")
        cov = _symmetrize(cov)
        lam = min_uncertainty_eigenvalue(cov)
        if lam < -PHYSICALITY_TOL * max(1.0, float(np.abs(cov).max())):
            raise PhysicalityError(
                f"covariance violates the uncertainty relation (min eigenvalue {lam:.3e})"
            )
        object.__setattr__(self, "mean", _frozen(mean))
        object.__setattr__(self, "covariance", _frozen(cov))
        object.__setattr__(self, "num_modes", cov.shape[0] // 2)

    @classmethod
    def vacuum(cls, num_modes: int) -> "GaussianState":
        return cls(np.zeros(2 * num_modes), 0.5 * np.eye(2 * num_modes))

    @classmethod
    def thermal(cls, occupations: Sequence[float]) -> "GaussianState":
        """Product of thermal states with the given mean photon numbers."""
        occ = np.asarray(occupations, dtype=float)
        if np.any(occ < 0):
            raise ValueError("thermal occupations must be non-negative")
        return cls(np.zeros(2 * occ.size), np.diag(np.repeat(occ + 0.5, 2)))

    def mode_block(self, mode: int) -> np.ndarray:
        """2x2 covariance block of a single mode."""
        s = slice(2 * mode, 2 * mode + 2)
        return np.array(self.covariance[s, s])


@dataclass(frozen=True)
class LinearDynamics:
    """Drift ``A`` and diffusion ``D`` per unit dimensionless time."""

    drift: NDArray[np.float64]
    diffusion: NDArray[np.float64]
    mode_labels: tuple[str, ...] = ()

    def __post_init__(self):
        A = np.asarray(self.drift, dtype=float)
        D = np.asarray(self.diffusion, dtype=float)
        if A.ndim != 2 or A.shape[0] != A.shape[1] or A.shape[0] % 2:
            raise ValueError(f"drift must be 2N x 2N, got shape {A.shape}")
        if D.shape != A.shape:
            raise ValueError(f"diffusion shape {D.shape} != drift shape {A.shape}")
        if not (np.all(np.isfinite(A)) and np.all(np.isfinite(D))):
            raise NumericalError("non-finite drift or diffusion")
        if np.abs(D - D.T).max(initial=0.0) > SYMMETRY_TOL * max(1.0, np.abs(D).max()):
            raise ValueError("diffusion matrix is not symmetric")
        D = _symmetrize(D)
        if D.size and np.linalg.eigvalsh(D).min() < -PHYSICALITY_TOL:
            raise ValueError("diffusion matrix is not positive semidefinite")
        n = A.shape[0] // 2
        labels = tuple(self.mode_labels) or tuple(f"m{i}" for i in range(n))
        if len(labels) != n:
            raise ValueError(f"{len(labels)} labels for {n} modes")
        object.__setattr__(self, "drift", _frozen(A))
        object.__setattr__(self, "diffusion", _frozen(D))
        object.__setattr__(self, "mode_labels", labels)

    @property
    def num_modes(self) -> int:
        return self.drift.shape[0] // 2

    def mode_index(self, label: str) -> int:
        return self.mode_labels.index(label)


@dataclass(frozen=True)
class ModeDriftSpec:
    """Equations of motion written on a vector of ladder operators.

    ``matrix[i, j]`` is the coefficient of ``basis[j]`` in ``d basis[i]/dτ``.
    Each basis entry is ``(label, conjugated)``; ``("b2", True)`` stands for
    ``b2†``. Every mode appears exactly once, and its quadrature position is
    its position in the basis.
    """

    matrix: NDArray[np.complex128]
    basis: tuple[tuple[str, bool], ...]

    def __post_init__(self):
        M = np.asarray(self.matrix, dtype=complex)
        basis = tuple((str(lbl), bool(c)) for lbl, c in self.basis)
        if M.shape != (len(basis), len(basis)):
            raise DriftSpecError(f"matrix shape {M.shape} does not match basis of {len(basis)}")
        labels = [lbl for lbl, _ in basis]
        if len(set(labels)) != len(labels):
            raise DriftSpecError(f"mode listed twice in basis {labels}")
        object.__setattr__(self, "matrix", _frozen(M, complex))
        object.__setattr__(self, "basis", basis)

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(lbl for lbl, _ in self.basis)

    def doubled(self) -> np.ndarray:
        """Ladder-space matrix on (b1, b1†, b2, b2†, ...), conjugate rows included."""
        n = len(self.basis)
        M = np.asarray(self.matrix)
        full = np.zeros((2 * n, 2 * n), dtype=complex)
        for i, (_, ci) in enumerate(self.basis):
            for j, (_, cj) in enumerate(self.basis):
                full[2 * i + ci, 2 * j + cj] = M[i, j]
                full[2 * i + (not ci), 2 * j + (not cj)] = np.conj(M[i, j])
        swap = np.kron(np.eye(n), np.array([[0.0, 1.0], [1.0, 0.0]]))
        if np.abs(swap @ full.conj() @ swap - full).max(initial=0.0) > 1e-12:
            raise DriftSpecError("doubled system is not conjugation-consistent")
        return full


def ladder_to_quadrature(ladder: np.ndarray, tol: float = 1e-12) -> NDArray[np.float64]:
    """Map a doubled ladder-space matrix to the real quadrature frame."""
    n = ladder.shape[0] // 2
    T = np.kron(np.eye(n), _LADDER_TO_QUAD)
    Q = T @ ladder @ np.linalg.inv(T)
    residue = np.abs(Q.imag).max(initial=0.0)
    if residue > tol * max(1.0, np.abs(Q).max()):
        raise DriftSpecError(f"quadrature matrix has imaginary residue {residue:.3e}")
    return np.ascontiguousarray(Q.real)


def is_hamiltonian(spec: ModeDriftSpec, tol: float = 1e-12) -> bool:
    """True when the coherent drift generates a symplectic (Hamiltonian) flow.

    Equivalent to ``A Ω + Ω Aᵀ = 0`` for the quadrature drift ``A``.
    """
    A = ladder_to_quadrature(spec.doubled())
    omega = symplectic_form(len(spec.basis))
    return bool(np.abs(A @ omega + omega @ A.T).max(initial=0.0) <= tol * max(1.0, np.abs(A).max()))


def mode_matrix_to_quadrature(matrix: ArrayLike, basis: Sequence[tuple[str, bool]]) -> NDArray[np.float64]:
    """Real quadrature form of a mode-space matrix (drift or propagator)."""
    return ladder_to_quadrature(ModeDriftSpec(np.asarray(matrix), tuple(basis)).doubled())


def quadrature_dynamics(
    spec: ModeDriftSpec,
    decays: Sequence[float] | float = 0.0,
    occupations: Sequence[float] | float = 0.0,
) -> LinearDynamics:
    """Convert mode-space equations of motion plus damping to quadrature dynamics.

    Each mode j gets drift ``-k_j I`` and diffusion ``k_j (2 n_j + 1) I`` on
    top of the coherent part in ``spec``.
    """
    n = len(spec.basis)
    k = np.broadcast_to(np.asarray(decays, dtype=float), (n,))
    nth = np.broadcast_to(np.asarray(occupations, dtype=float), (n,))
    if np.any(k < 0):
        raise ValueError("decay rates must be non-negative")
    if np.any(nth < 0):
        raise ValueError("thermal occupations must be non-negative")
    A = ladder_to_quadrature(spec.doubled()) - np.kron(np.diag(k), np.eye(2))
    D = np.kron(np.diag(k * (2.0 * nth + 1.0)), np.eye(2))
    return LinearDynamics(A, D, spec.labels)


def _check_dims(dyn: LinearDynamics, state: GaussianState) -> None:
    if dyn.num_modes != state.num_modes:
        raise ValueError(
            f"dynamics has {dyn.num_modes} modes but state has {state.num_modes}"
        )


def lyapunov_rhs(dyn: LinearDynamics, state: GaussianState) -> tuple[np.ndarray, np.ndarray]:
    """Time derivatives ``(A m, A σ + σ Aᵀ + D)`` of the first two moments."""
    _check_dims(dyn, state)
    A, s = dyn.drift, state.covariance
    As = A @ s
    return A @ state.mean, As + As.T + dyn.diffusion


def propagator(dyn: LinearDynamics, duration: float) -> NDArray[np.float64]:
    """Matrix exponential ``exp(A τ)``."""
    if not np.isfinite(duration):
        raise NumericalError(f"non-finite duration {duration}")
    return expm(dyn.drift * duration)


def noise_propagator(dyn: LinearDynamics, duration: float) -> tuple[np.ndarray, np.ndarray]:
    """Return ``(P, Q)`` with ``σ(τ) = P σ(0) Pᵀ + Q`` exactly.

    ``Q = ∫₀^τ e^{As} D e^{Aᵀs} ds`` is built from a short-interval Van Loan
    block exponential and then doubled, which stays accurate for long
    intervals where a single block exponential loses the small terms.
    """
    if not np.isfinite(duration):
        raise NumericalError(f"non-finite duration {duration}")
    n = dyn.drift.shape[0]
    A, D = dyn.drift, dyn.diffusion
    norm = np.abs(A).sum(axis=1).max(initial=0.0) * abs(duration)
    squarings = max(0, int(np.ceil(np.log2(norm / 0.5))) if norm > 0.5 else 0)
    h = duration / 2**squarings
    block = np.zeros((2 * n, 2 * n))
    block[:n, :n] = A
    block[:n, n:] = D
    block[n:, n:] = -A.T
    E = expm(block * h)
    P = E[:n, :n]
    Q = _symmetrize(E[:n, n:] @ P.T)
    for _ in range(squarings):
        Q = _symmetrize(P @ Q @ P.T + Q)
        P = P @ P
    return P, Q


def evolve(
    dyn: LinearDynamics,
    state: GaussianState,
    duration: float,
    tolerance: float = 1e-9,
    max_steps: int = 10_000_000,
) -> GaussianState:
    """Advance a state by adaptive Runge-Kutta integration of the moment equations."""
    _check_dims(dyn, state)
    if duration < 0:
        raise ValueError("duration must be non-negative")
    if not 0.0 < tolerance <= 1e-3:
        raise ValueError("tolerance must lie in (0, 1e-3]")
    if duration == 0.0:
        return state
    dim = dyn.drift.shape[0]
    A, D = dyn.drift, dyn.diffusion

    def rhs(y):
        s = y[dim:].reshape(dim, dim)
        As = A @ s
        return np.concatenate([A @ y[:dim], (As + As.T + D).ravel()])

    def post(y):
        s = y[dim:].reshape(dim, dim)
        y[dim:] = _symmetrize(s).ravel()
        return y

    y0 = np.concatenate([state.mean, state.covariance.ravel()])
    atol = tolerance * max(1.0, float(np.abs(y0).max()))
    y = dopri54(rhs, y0, duration, rtol=tolerance, atol=atol, max_steps=max_steps, post_step=post)
    return GaussianState(y[:dim], y[dim:].reshape(dim, dim))


def evolve_exact(dyn: LinearDynamics, state: GaussianState, duration: float) -> GaussianState:
    """Advance a state with the closed-form propagator and noise integral."""
    _check_dims(dyn, state)
    if duration < 0:
        raise ValueError("duration must be non-negative")
    if duration == 0.0:
        return state
    P, Q = noise_propagator(dyn, duration)
    return GaussianState(P @ state.mean, P @ state.covariance @ P.T + Q)


def trajectory(
    dyn: LinearDynamics, state: GaussianState, times: Sequence[float]
) -> list[GaussianState]:
    """States at each of the non-decreasing ``times`` (starting from τ = 0)."""
    out = []
    t_prev = 0.0
    cache: dict[float, tuple[np.ndarray, np.ndarray]] = {}
    for t in times:
        dt = float(t) - t_prev
        if dt < 0:
            raise ValueError("times must be non-decreasing and non-negative")
        if dt > 0:
            key = round(dt, 12)
            if key not in cache:
                cache[key] = noise_propagator(dyn, dt)
            P, Q = cache[key]
            state = GaussianState(P @ state.mean, P @ state.covariance @ P.T + Q)
        out.append(state)
        t_prev = float(t)
    return out


def hurwitz_check(dyn: LinearDynamics) -> tuple[bool, float]:
    """Return ``(is_hurwitz, spectral_abscissa)`` of the drift."""
    eig = np.linalg.eigvals(dyn.drift)
    abscissa = float(eig.real.max())
    return abscissa < -HURWITZ_MARGIN, abscissa


def solve_lyapunov(A: np.ndarray, D: np.ndarray) -> np.ndarray:
    """Solve ``A X + X Aᵀ + D = 0`` by Kronecker vectorization (row-major)."""
    n = A.shape[0]
    eye = np.eye(n)
    # row-major vec: vec(A X) = (A ⊗ I) vec X, vec(X Aᵀ) = (I ⊗ A) vec X
    K = np.kron(A, eye) + np.kron(eye, A)
    X = np.linalg.solve(K, -D.ravel()).reshape(n, n)
    return _symmetrize(X)


def steady_state(dyn: LinearDynamics) -> GaussianState:
    """Unique stationary state of Hurwitz dynamics (zero mean)."""
    stable, abscissa = hurwitz_check(dyn)
    if not stable:
        eig = np.linalg.eigvals(dyn.drift)
        worst = complex(eig[np.argmax(eig.real)])
        raise InstabilityError(
            f"drift is not Hurwitz: eigenvalue {worst:.6g} has real part {abscissa:.3g} >= 0",
            eigenvalue=worst,
        )
    A, D = dyn.drift, dyn.diffusion
    sigma = solve_lyapunov(A, D)
    residual = np.abs(A @ sigma + sigma @ A.T + D).max()
    scale = max(1.0, np.abs(D).max())
    if residual > 1e-10 * scale:
        raise NumericalError(f"Lyapunov residual {residual:.3e} above tolerance")
    return GaussianState(np.zeros(A.shape[0]), sigma)


def two_mode_squeezing_symplectic(squeezing: float) -> NDArray[np.float64]:
    """Two-mode squeezing transform on (x1, p1, x2, p2).

    Oriented so that Var(x1 + x2) and Var(p1 - p2) are squeezed, i.e. the
    vacuum maps to a state with EPR total variance ``2 exp(-2 squeezing)``.
    """
    c, s = np.cosh(squeezing), np.sinh(squeezing)
    Z = np.diag([-1.0, 1.0])
    return np.block([[c * np.eye(2), s * Z], [s * Z, c * np.eye(2)]])


def two_mode_squeezed_vacuum(squeezing: float) -> GaussianState:
    S = two_mode_squeezing_symplectic(squeezing)
    return GaussianState(np.zeros(4), 0.5 * S @ S.T)
