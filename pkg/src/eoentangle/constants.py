"""Physical constants (CODATA 2018, 12 significant digits) and unit helpers."""

import math

HBAR = 1.05457181765e-34  # J s
K_B = 1.38064900000e-23  # J / K

TWO_PI = 2.0 * math.pi


def hz_to_rad(f_hz: float) -> float:
    """Ordinary frequency (Hz) to angular frequency (rad/s)."""
    return TWO_PI * f_hz


def rad_to_hz(omega: float) -> float:
    """Angular frequency (rad/s) to ordinary frequency (Hz)."""
    return omega / TWO_PI
