"""Entanglement diagnostics for two-mode Gaussian states."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .gaussian import GaussianState

DUAN_THRESHOLD = 2.0


@dataclass(frozen=True)
class EprPair:
    """Two distinct modes whose EPR-like operators u = x_a + x_b, v = p_a - p_b
    are tested."""

    mode_a: int
    mode_b: int

    def __post_init__(self):
        if self.mode_a == self.mode_b:
            raise ValueError("EPR pair needs two distinct modes")
        if min(self.mode_a, self.mode_b) < 0:
            raise IndexError("mode indices must be non-negative")

    def check(self, state: GaussianState) -> None:
        if max(self.mode_a, self.mode_b) >= state.num_modes:
            raise IndexError(
                f"pair ({self.mode_a}, {self.mode_b}) out of range for {state.num_modes} modes"
            )


def epr_variance(state: GaussianState, pair: EprPair | tuple[int, int]) -> float:
    """Total variance Var(x_a + x_b) + Var(p_a - p_b)."""
    if not isinstance(pair, EprPair):
        pair = EprPair(*pair)
    pair.check(state)
    s = state.covariance
    xa, pa = 2 * pair.mode_a, 2 * pair.mode_a + 1
    xb, pb = 2 * pair.mode_b, 2 * pair.mode_b + 1
    var_u = s[xa, xa] + s[xb, xb] + 2.0 * s[xa, xb]
    var_v = s[pa, pa] + s[pb, pb] - 2.0 * s[pa, pb]
    return float(var_u + var_v)


def duan_verdict(total_variance: float) -> bool:
    """True when the total variance certifies entanglement (V < 2)."""
    if total_variance < 0 or np.isnan(total_variance):
        raise ValueError(f"total variance must be non-negative, got {total_variance}")
    return total_variance < DUAN_THRESHOLD


def photon_number(state: GaussianState, mode: int, include_mean: bool = False) -> float:
    """Mean photon number of one mode.

    By default only the fluctuation part (σ_xx + σ_pp − 1)/2 is returned;
    pass ``include_mean=True`` to add the coherent contribution.
    """
    if not 0 <= mode < state.num_modes:
        raise IndexError(f"mode {mode} out of range for {state.num_modes} modes")
    s = state.covariance
    x, p = 2 * mode, 2 * mode + 1
    n = 0.5 * (s[x, x] + s[p, p] - 1.0)
    if include_mean:
        n += 0.5 * (state.mean[x] ** 2 + state.mean[p] ** 2)
    return float(n)


def tms_reference_variance(squeezing: float) -> float:
    """Total variance 2 exp(-2 squeezing) of an ideal two-mode squeezed vacuum."""
    if squeezing < 0:
        raise ValueError("squeezing must be non-negative")
    return float(2.0 * np.exp(-2.0 * squeezing))
