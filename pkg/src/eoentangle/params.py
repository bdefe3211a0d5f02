"""
Device-level parameter chain: LC resonators, electro-optic couplings,
pumped cavity photon numbers, thermal occupations, scaled rates and
operation times.

All frequencies and loss rates are angular (rad/s). Use
:func:`eoentangle.constants.hz_to_rad` when starting from "2π × f" values.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field, replace
from typing import Literal

from .constants import HBAR, K_B, hz_to_rad
from .errors import NumericalError

Scheme = Literal["cascaded", "parallel", "dissipative"]

WEAK_DRIVE_THRESHOLD = 0.1


def _positive(name: str, value: float) -> None:
    if not (value > 0 and math.isfinite(value)):
        raise ValueError(f"{name} must be positive and finite, got {value!r}")


@dataclass(frozen=True)
class PhysicalParams:
    """Device parameters for the two-resonator electro-optic system.

    ``cavity_loss`` is the optical linewidth entering the pumped photon
    number; ``optical_decay`` is the optical loss used for the scaled decay
    k0 in the dynamics and defaults to ``cavity_loss``. ``detunings``
    default to the resonator frequencies (the resonant choice Δ_i = ω_bi).
    """

    eo_coefficient: float  # n³ r₀, m/V
    gap: float  # d, m
    capacitance: tuple[float, float]  # F
    inductance: tuple[float, float]  # H
    cavity_frequency: float  # ω_a, rad/s
    pump_power: float  # W
    cavity_loss: float  # Γ, rad/s
    resonator_loss: tuple[float, float]  # Γ_1, Γ_2, rad/s
    temperature: float  # K
    detunings: tuple[float, float] | None = None  # rad/s
    optical_decay: float | None = None  # Γ₀, rad/s

    def __post_init__(self):
        for name in ("eo_coefficient", "gap", "cavity_frequency", "pump_power", "cavity_loss"):
            _positive(name, getattr(self, name))
        for name in ("capacitance", "inductance", "resonator_loss"):
            vals = tuple(float(v) for v in getattr(self, name))
            if len(vals) != 2:
                raise ValueError(f"{name} needs one value per resonator")
            for v in vals:
                _positive(name, v)
            object.__setattr__(self, name, vals)
        if not (self.temperature >= 0 and math.isfinite(self.temperature)):
            raise ValueError(f"temperature must be >= 0, got {self.temperature!r}")
        if self.detunings is not None:
            det = tuple(float(v) for v in self.detunings)
            for v in det:
                _positive("detunings", v)
            object.__setattr__(self, "detunings", det)
        if self.optical_decay is not None:
            _positive("optical_decay", self.optical_decay)

    @property
    def gamma0(self) -> float:
        return self.cavity_loss if self.optical_decay is None else self.optical_decay

    def with_(self, **changes) -> "PhysicalParams":
        return replace(self, **changes)


@dataclass(frozen=True)
class DerivedRates:
    """Result of :func:`scheme_rates`. Index 0 of per-mode tuples is the
    optical mode; indices 1, 2 are the resonators."""

    resonator_frequencies: tuple[float, float]
    couplings: tuple[float, float]
    cavity_photon_numbers: tuple[float, float]
    effective_couplings: tuple[float, float]
    ratio: float
    scaled_decays: tuple[float, float, float]
    thermal_occupations: tuple[float, float, float]
    optical_decay: float
    drive_ratios: tuple[float, float] = field(default=(0.0, 0.0))


def lc_frequency(inductance: float, capacitance: float) -> float:
    """Resonance frequency 1/√(LC) in rad/s."""
    _positive("inductance", inductance)
    _positive("capacitance", capacitance)
    return 1.0 / math.sqrt(inductance * capacitance)


def eo_coupling(params: PhysicalParams, i: int) -> float:
    """Single-photon electro-optic coupling g_i (rad/s) of resonator ``i`` ∈ {1, 2}."""
    if i not in (1, 2):
        raise ValueError(f"resonator index must be 1 or 2, got {i}")
    C = params.capacitance[i - 1]
    omega_b = lc_frequency(params.inductance[i - 1], C)
    prefactor = params.cavity_frequency * params.eo_coefficient / (2.0 * params.gap)
    return prefactor * math.sqrt(HBAR * omega_b / (2.0 * C))


def cavity_photon_number(loss: float, detuning: float, power: float, cavity_frequency: float) -> float:
    """Intracavity photon number of a cavity pumped at the given detuning."""
    _positive("loss", loss)
    _positive("cavity_frequency", cavity_frequency)
    if power < 0:
        raise ValueError("pump power must be non-negative")
    lorentz = loss / (detuning**2 + (loss / 2.0) ** 2)
    return lorentz * power / (HBAR * cavity_frequency)


def thermal_occupation(omega: float, temperature: float) -> float:
    """Bose-Einstein occupation; exactly 0 at zero temperature."""
    _positive("omega", omega)
    if temperature < 0:
        raise ValueError("temperature must be non-negative")
    if temperature == 0:
        return 0.0
    return 1.0 / math.expm1(HBAR * omega / (K_B * temperature))


def scheme_rates(params: PhysicalParams) -> DerivedRates:
    """Run the full chain from device parameters to dimensionless rates."""
    wb = tuple(lc_frequency(L, C) for L, C in zip(params.inductance, params.capacitance))
    g = (eo_coupling(params, 1), eo_coupling(params, 2))
    det = params.detunings or wb
    ncav = tuple(
        cavity_photon_number(params.cavity_loss, d, params.pump_power, params.cavity_frequency)
        for d in det
    )
    G = tuple(math.sqrt(n) * gi for n, gi in zip(ncav, g))
    if G[0] == 0:
        raise NumericalError("effective coupling G1 is zero; scaled rates undefined")
    losses = (params.gamma0, *params.resonator_loss)
    k = tuple(gam / (2.0 * G[0]) for gam in losses)
    nth = (0.0, *(thermal_occupation(w, params.temperature) for w in wb))
    return DerivedRates(
        resonator_frequencies=wb,
        couplings=g,
        cavity_photon_numbers=ncav,
        effective_couplings=G,
        ratio=G[1] / G[0],
        scaled_decays=k,
        thermal_occupations=nth,
        optical_decay=params.gamma0,
        drive_ratios=tuple(math.sqrt(n) for n in ncav),
    )


def check_weak_drive(rates: DerivedRates, threshold: float = WEAK_DRIVE_THRESHOLD) -> bool:
    """Warn when the weak-drive expansion parameter E_j/Δ_j exceeds ``threshold``.

    Returns True when the drive is weak on both tones.
    """
    worst = max(rates.drive_ratios)
    if worst > threshold:
        warnings.warn(
            f"weak-drive parameter E/Δ = {worst:.3g} exceeds {threshold}; "
            "the effective parallel Hamiltonian may be inaccurate",
            RuntimeWarning,
            stacklevel=2,
        )
        return False
    return True


def operation_times(rates: DerivedRates, scheme: Scheme, squeeze_time: float | None = None) -> float:
    """Operation time (s) of a scheme.

    cascaded:    π/G1 + T2 (``squeeze_time`` = T2 required)
    parallel:    π / (g1 √(n_cav,1 − n_cav,2))
    dissipative: Γ0 / (2 g1² (n_cav,1 − n_cav,2))

    The parallel and dissipative times use the single-photon coupling g1
    for both drives, which is how the drive amplitudes E_j = √n_cav,j ω_bj
    enter the scaled time.
    """
    G1, G2 = rates.effective_couplings
    if scheme == "cascaded":
        if squeeze_time is None or squeeze_time < 0:
            raise ValueError("cascaded operation time needs a non-negative squeeze_time")
        return math.pi / G1 + squeeze_time
    if scheme not in ("parallel", "dissipative"):
        raise ValueError(f"unknown scheme {scheme!r}")
    g1 = rates.couplings[0]
    n1, n2 = rates.cavity_photon_numbers
    if G1 <= G2 or n1 <= n2:
        raise NumericalError(
            f"{scheme} operation time undefined: needs r < 1 (G1={G1:.4g}, G2={G2:.4g})"
        )
    if scheme == "parallel":
        return math.pi / (g1 * math.sqrt(n1 - n2))
    return rates.optical_decay / (2.0 * g1**2 * (n1 - n2))


# Device parameter sets
CASCADED = PhysicalParams(
    eo_coefficient=300e-12,
    gap=10e-6,
    capacitance=(40e-15, 40e-15),
    inductance=(70e-9, 25e-9),
    cavity_frequency=hz_to_rad(200e12),
    pump_power=10e-3,
    cavity_loss=hz_to_rad(0.3e6),
    resonator_loss=(hz_to_rad(1e3), hz_to_rad(1e3)),
    temperature=0.1,
)

CASCADED_IMPROVED = CASCADED.with_(capacitance=(1e-15, 1e-15), inductance=(360e-9, 350e-9))

PARALLEL = PhysicalParams(
    eo_coefficient=300e-12,
    gap=5e-6,
    capacitance=(4e-15, 4e-15),
    inductance=(700e-9, 250e-9),
    cavity_frequency=hz_to_rad(1500e12),
    pump_power=10e-6,
    cavity_loss=hz_to_rad(0.3e6),
    resonator_loss=(hz_to_rad(1e3), hz_to_rad(1e3)),
    temperature=0.1,
)

DISSIPATIVE = PARALLEL.with_(
    cavity_loss=hz_to_rad(30e6),
    resonator_loss=(hz_to_rad(1.44e3), hz_to_rad(1.44e3)),
)

PRESETS: dict[str, PhysicalParams] = {
    "cascaded": CASCADED,
    "cascaded-improved": CASCADED_IMPROVED,
    "parallel": PARALLEL,
    "dissipative": DISSIPATIVE,
}
