"""Adaptive Dormand-Prince 5(4) integrator for autonomous linear-ish ODEs.

Only what the moment equations need: a fixed right-hand side ``f(y)``,
a flat state vector, and a hook to post-process the state after every
accepted step (used to re-symmetrize the covariance block).
"""

from __future__ import annotations

from typing import Callable

import numpy as np

from .errors import IntegrationError

# Dormand-Prince tableau (FSAL pair, 5th order propagated)
_C = np.array([0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0])
_A = [
    [],
    [1 / 5],
    [3 / 40, 9 / 40],
    [44 / 45, -56 / 15, 32 / 9],
    [19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729],
    [9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656],
    [35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84],
]
_B5 = np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0])
_B4 = np.array(
    [5179 / 57600, 0.0, 7571 / 16695, 393 / 640, -92097 / 339200, 187 / 2100, 1 / 40]
)
_E = _B5 - _B4

_SAFETY = 0.9
_MIN_FACTOR = 0.2
_MAX_FACTOR = 5.0


def dopri54(
    rhs: Callable[[np.ndarray], np.ndarray],
    y0: np.ndarray,
    duration: float,
    rtol: float = 1e-9,
    atol: float | None = None,
    max_steps: int = 10_000_000,
    post_step: Callable[[np.ndarray], np.ndarray] | None = None,
) -> np.ndarray:
    """Integrate ``dy/dt = rhs(y)`` from 0 to ``duration``.

    Returns the state at ``duration``. Raises :class:`IntegrationError` when
    the step size underflows or the step budget is exhausted.
    """
    y = np.array(y0, dtype=float)
    if duration == 0.0:
        return y
    if atol is None:
        atol = rtol * max(1.0, float(np.max(np.abs(y))))

    k = np.empty((7, y.size))
    k[0] = rhs(y)

    # initial step from the local Lipschitz scale
    scale = atol + rtol * np.abs(y)
    d0 = np.sqrt(np.mean((y / scale) ** 2))
    d1 = np.sqrt(np.mean((k[0] / scale) ** 2))
    h = 1e-6 if d0 < 1e-5 or d1 < 1e-5 else 0.01 * d0 / d1
    h = min(h, duration)

    t = 0.0
    steps = 0
    while t < duration:
        if steps >= max_steps:
            raise IntegrationError(f"step budget of {max_steps} exhausted at t={t:.6g}")
        if t + h > duration:
            h = duration - t
        if h <= 1e-14 * max(1.0, abs(t)) and duration - t > h:
            raise IntegrationError(f"step size underflow at t={t:.6g} (h={h:.3g})")

        for s in range(1, 7):
            k[s] = rhs(y + h * (np.asarray(_A[s]) @ k[:s]))
        y_new = y + h * (_B5 @ k)
        err = h * (_E @ k)
        scale = atol + rtol * np.maximum(np.abs(y), np.abs(y_new))
        err_norm = float(np.sqrt(np.mean((err / scale) ** 2)))
        steps += 1

        if err_norm <= 1.0:
            t += h
            if post_step is not None:
                y_new = post_step(y_new)
                k[0] = rhs(y_new)
            else:
                k[0] = k[6]
            y = y_new
            factor = _MAX_FACTOR if err_norm == 0.0 else _SAFETY * err_norm ** -0.2
            h *= min(_MAX_FACTOR, max(_MIN_FACTOR, factor))
        else:
            h *= max(_MIN_FACTOR, _SAFETY * err_norm ** -0.2)
    return y
