"""
Scenario runner: builds scheme configurations from settings, reproduces
the figure data sets, runs parameter sweeps and writes CSV.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Iterable, Mapping, Sequence

import numpy as np

from . import __version__
from .config import ConfigFile, SCHEMES, read_config
from .constants import rad_to_hz
from .errors import ConfigError, NumericalError
from .gaussian import GaussianState, steady_state, trajectory
from .metrics import epr_variance, photon_number
from .params import PRESETS, PhysicalParams, check_weak_drive, operation_times, scheme_rates
from .schemes import (
    SchemeConfig,
    cascaded_schedule,
    decoupling_time,
    dissipative_dynamics,
    dissipative_transient_variance,
    epr_modes,
    initial_state,
    parallel_dynamics,
    parallel_trajectory,
    scaled_time,
)

GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0
SWEEP_RESOLUTION = 1e-3
NEGATIVE_N_TOL = 1e-9

SCHEME_KEYS = ("r", "k", "k0", "k1", "k2", "n_th", "n_th0", "n_th1", "n_th2",
               "n_init0", "n_init1", "n_init2", "tau1", "tau2")
PHYSICAL_KEYS = ("eo_coefficient", "d", "C", "C1", "C2", "L", "L1", "L2", "f_a", "P",
                 "gamma", "gamma0", "gamma_b", "gamma1", "gamma2", "delta1", "delta2", "T")

_T_PI_HALF = decoupling_time(0.5)

SCENARIO_DEFAULTS: dict[str, dict[str, Any]] = {
    "fig3a": dict(scheme="parallel", r=0.5, k=0.0, n_th0=0.0, n_th=0.1,
                  start=0.0, stop=3 * _T_PI_HALF, points=301),
    "fig3b": dict(scheme="parallel", r=0.5, k=0.1, n_th0=0.0, n_th=0.1,
                  start=0.0, stop=3 * _T_PI_HALF, points=301),
    "fig4a": dict(scheme="parallel", r=1 - 1e-3, k=0.0, n_th0=0.0,
                  n_th_values=(0.0, 0.1, 1.0), start=0.0, stop=2.0, points=401),
    "fig4b": dict(scheme="parallel", r=1 - 1e-3, n_th=0.0, n_th0=0.0,
                  k_values=(0.001, 0.01, 0.1), start=0.0, stop=2.0, points=401),
    "fig6": dict(scheme="dissipative", r=0.5, k0=10.0, n_th0=0.0, n_th=0.01,
                 k1_values=(0.0, 0.0075, 0.015), start=0.0, stop=5.0, points=201),
    "fig7": dict(scheme="cascaded", preset="cascaded", start=1.6, stop=5.0, points=69),
    "params-report": dict(preset="cascaded"),
    "custom": dict(),
}

PRESET_SCHEME = {
    "cascaded": "cascaded",
    "cascaded-improved": "cascaded",
    "parallel": "parallel",
    "dissipative": "dissipative",
}


@dataclass(frozen=True)
class ScenarioSpec:
    """A runnable scenario: dimensionless config, optional device chain, grid."""

    name: str
    config: SchemeConfig | None
    physical: PhysicalParams | None
    grid: tuple[float, ...]
    output_path: str | None = None
    settings: Mapping[str, Any] = field(default_factory=dict)

    def with_setting(self, key: str, value: Any) -> "ScenarioSpec":
        return build_scenario({**self.settings, key: value})

    @property
    def variants(self) -> tuple[str, tuple[float, ...]] | None:
        for key in ("n_th_values", "k_values", "k1_values"):
            if key in self.settings:
                return key, tuple(self.settings[key])
        return None


@dataclass(frozen=True)
class SweepResult:
    samples: tuple[tuple[float, float], ...]
    optimum: tuple[float, float]
    interior: bool


@dataclass
class ScenarioResult:
    name: str
    header: list[str]
    rows: list[list[Any]]
    metadata: list[tuple[str, str]] = field(default_factory=list)
    footer: list[str] = field(default_factory=list)

    def column(self, name: str) -> np.ndarray:
        i = self.header.index(name)
        return np.array([row[i] for row in self.rows], dtype=float)

    def to_csv(self) -> str:
        lines = [f"# {k}: {v}" for k, v in self.metadata]
        lines.append(",".join(self.header))
        lines.extend(",".join(_fmt(v) for v in row) for row in self.rows)
        lines.extend(self.footer)
        return "\n".join(lines) + "\n"

    def write(self, path: str | Path) -> None:
        Path(path).write_text(self.to_csv())


def _fmt(value: Any) -> str:
    if isinstance(value, str):
        return value
    if isinstance(value, FullPrecision):
        return repr(float(value))
    v = float(value)
    if v == 0.0:
        v = 0.0  # drop negative zero
    return format(v, ".12g")


class FullPrecision(float):
    """Float emitted with round-trip precision instead of 12 digits."""


# --- building scenarios -----------------------------------------------------------


def _physical_from(settings: Mapping[str, Any], preset: str) -> PhysicalParams:
    p = PRESETS[preset]
    cap, ind, loss = list(p.capacitance), list(p.inductance), list(p.resonator_loss)
    if "C" in settings:
        cap = [settings["C"]] * 2
    if "L" in settings:
        ind = [settings["L"]] * 2
    if "gamma_b" in settings:
        loss = [settings["gamma_b"]] * 2
    for i in (1, 2):
        cap[i - 1] = settings.get(f"C{i}", cap[i - 1])
        ind[i - 1] = settings.get(f"L{i}", ind[i - 1])
        loss[i - 1] = settings.get(f"gamma{i}", loss[i - 1])
    changes: dict[str, Any] = dict(capacitance=tuple(cap), inductance=tuple(ind),
                                   resonator_loss=tuple(loss))
    simple = {"eo_coefficient": "eo_coefficient", "d": "gap", "f_a": "cavity_frequency",
              "P": "pump_power", "gamma": "cavity_loss", "gamma0": "optical_decay",
              "T": "temperature"}
    for key, attr in simple.items():
        if key in settings:
            changes[attr] = settings[key]
    if "delta1" in settings or "delta2" in settings:
        wb = [1.0 / math.sqrt(L * C) for L, C in zip(ind, cap)]
        changes["detunings"] = (settings.get("delta1", wb[0]), settings.get("delta2", wb[1]))
    try:
        return p.with_(**changes)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def build_scenario(settings: Mapping[str, Any]) -> ScenarioSpec:
    """Assemble a :class:`ScenarioSpec` from parsed settings over scenario defaults."""
    name = settings.get("scenario", "custom")
    if name not in SCENARIO_DEFAULTS:
        raise ConfigError(f"unknown scenario {name!r}")
    merged = {**SCENARIO_DEFAULTS[name], **settings, "scenario": name}

    uses_device = "preset" in merged or any(k in merged for k in PHYSICAL_KEYS)
    preset = merged.get("preset")
    scheme = merged.get("scheme") or (PRESET_SCHEME[preset] if preset else None)
    physical = None
    if uses_device:
        preset = preset or scheme or "cascaded"
        physical = _physical_from(merged, preset)
        scheme = scheme or PRESET_SCHEME[preset]

    config = None
    if name != "params-report":
        if scheme is None:
            raise ConfigError("custom scenario needs 'scheme' (or a 'preset')")
        config = _scheme_config(merged, scheme, physical)
        if name == "custom" and scheme in ("parallel", "dissipative") and physical is not None:
            check_weak_drive(scheme_rates(physical))
    else:
        physical = physical or PRESETS[merged.get("preset", "cascaded")]

    grid = _grid(merged, config)
    return ScenarioSpec(name, config, physical, grid, merged.get("output"), merged)


def _scheme_config(s: Mapping[str, Any], scheme: str, physical: PhysicalParams | None) -> SchemeConfig:
    if physical is not None:
        rates = scheme_rates(physical)
        r = rates.ratio
        k = list(rates.scaled_decays)
        nth = list(rates.thermal_occupations)
    else:
        r, k, nth = None, [0.0, 0.0, 0.0], [0.0, 0.0, 0.0]
    r = s.get("r", r)
    if r is None:
        raise ConfigError("scheme configuration needs 'r' (or device parameters)")
    if "k" in s:
        k = [s["k"]] * 3
    if "n_th" in s:
        nth[1] = nth[2] = s["n_th"]
    for i in range(3):
        k[i] = s.get(f"k{i}", k[i])
        nth[i] = s.get(f"n_th{i}", nth[i])
    init = None
    if any(f"n_init{i}" in s for i in range(3)):
        init = tuple(s.get(f"n_init{i}", nth[i]) for i in range(3))
    extra = {}
    if "tau1" in s:
        extra["tau1"] = s["tau1"]
    if "tau2" in s:
        extra["tau2"] = s["tau2"]
    elif scheme == "cascaded":
        extra["tau2"] = s.get("tau1", math.pi / 2) + 1.0
    try:
        return SchemeConfig(kind=scheme, r=r, k0=k[0], k1=k[1], k2=k[2], n_th=tuple(nth),
                            initial_occupations=init, **extra)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def _grid(s: Mapping[str, Any], config: SchemeConfig | None) -> tuple[float, ...]:
    if config is None:
        return ()
    start = s.get("start", 0.0)
    points = s.get("points", 201)
    if "stop" in s:
        stop = s["stop"]
    elif config.kind == "cascaded":
        stop = config.tau1 + config.tau2
    elif config.kind == "parallel" and config.r < 1:
        stop = 2 * decoupling_time(config.r)
    else:
        stop = 10.0
    if points == 1:
        return (float(start),)
    if not stop > start:
        raise ConfigError(f"grid must be increasing: start={start}, stop={stop}")
    return tuple(float(v) for v in np.linspace(start, stop, points))


def load_config(path: str | Path) -> ScenarioSpec:
    """Read a config file and build its scenario."""
    cfg: ConfigFile = read_config(path)
    return build_scenario(cfg.settings)


# --- observables ------------------------------------------------------------------


def _clamped_photon_number(state: GaussianState, mode: int) -> float:
    n = photon_number(state, mode)
    if n < -NEGATIVE_N_TOL:
        raise NumericalError(f"negative photon number {n:.3e} in mode {mode}")
    return max(n, 0.0)


def _states_on_grid(config: SchemeConfig, times: Sequence[float]) -> list[GaussianState]:
    state = initial_state(config)
    if config.kind == "cascaded":
        return cascaded_schedule(config).trajectory(state, times)
    if config.kind == "parallel":
        return parallel_trajectory(config, times)
    return trajectory(dissipative_dynamics(config), state, times)


def final_variance(config: SchemeConfig) -> float:
    """Figure of merit of a scheme configuration.

    cascaded: V after the three periods; parallel: minimum V over the first
    oscillation period; dissipative: stationary V.
    """
    if config.kind == "cascaded":
        state = cascaded_schedule(config).evolve(initial_state(config))
        return epr_variance(state, epr_modes("cascaded"))
    if config.kind == "parallel":
        return parallel_minimum_variance(config)[1]
    return epr_variance(steady_state(dissipative_dynamics(config)), epr_modes("dissipative"))


def golden_section(f: Callable[[float], float], a: float, b: float, xtol: float) -> tuple[float, float]:
    """Minimize a unimodal ``f`` on [a, b]; return (argmin, min)."""
    c = b - GOLDEN * (b - a)
    d = a + GOLDEN * (b - a)
    fc, fd = f(c), f(d)
    while b - a > xtol:
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - GOLDEN * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + GOLDEN * (b - a)
            fd = f(d)
    return (c, fc) if fc <= fd else (d, fd)


def parallel_minimum_variance(spec: ScenarioSpec | SchemeConfig, points: int = 400) -> tuple[float, float]:
    """Minimum total variance over the first oscillation period 2π/√(1 - r²)."""
    config = spec.config if isinstance(spec, ScenarioSpec) else spec
    if config is None or config.kind != "parallel":
        raise ValueError("parallel_minimum_variance needs a parallel scheme")
    period = 2 * decoupling_time(config.r)
    times = np.linspace(0.0, period, points + 1)
    dyn = parallel_dynamics(config)
    pair = epr_modes("parallel")
    states = trajectory(dyn, initial_state(config), times)
    values = np.array([epr_variance(s, pair) for s in states])
    i = int(np.argmin(values))
    lo, hi = max(i - 1, 0), min(i + 1, points)
    base = states[lo]

    def v_at(t: float) -> float:
        return epr_variance(trajectory(dyn, base, [t - times[lo]])[0], pair)

    t_best, v_best = golden_section(v_at, times[lo], times[hi], 1e-9 * period)
    if values[i] < v_best:
        return float(times[i]), float(values[i])
    return float(t_best), float(v_best)


def sweep(
    spec: ScenarioSpec,
    parameter: str,
    values: Iterable[float],
    workers: int | None = None,
    resolution: float = SWEEP_RESOLUTION,
) -> SweepResult:
    """Evaluate :func:`final_variance` over ``values`` and refine the best bracket."""
    xs = np.asarray(list(values), dtype=float)
    if xs.size == 0:
        raise ValueError("sweep range is empty")
    if np.any(np.diff(xs) <= 0):
        raise ValueError("sweep values must be strictly increasing")

    def objective(x: float) -> float:
        cfg = spec.with_setting(parameter, float(x)).config
        return final_variance(cfg)

    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            vs = list(pool.map(objective, xs))
    else:
        vs = [objective(x) for x in xs]
    vs = np.asarray(vs)
    samples = tuple((float(x), float(v)) for x, v in zip(xs, vs))
    i = int(np.argmin(vs))
    if i in (0, xs.size - 1):
        return SweepResult(samples, (float(xs[i]), float(vs[i])), interior=False)
    x_best, v_best = golden_section(objective, xs[i - 1], xs[i + 1], resolution)
    if vs[i] < v_best:
        x_best, v_best = xs[i], vs[i]
    return SweepResult(samples, (float(x_best), float(v_best)), interior=True)


# --- scenarios ------------------------------------------------------------------


def _metadata(spec: ScenarioSpec, extra: Mapping[str, Any] | None = None) -> list[tuple[str, str]]:
    meta = [("scenario", spec.name)]
    if spec.config is not None:
        c = spec.config
        meta.append(("scheme", c.kind))
        params = dict(r=c.r, k0=c.k0, k1=c.k1, k2=c.k2, n_th0=c.n_th[0], n_th1=c.n_th[1],
                      n_th2=c.n_th[2])
        if c.kind == "cascaded":
            params.update(tau1=c.tau1, tau2=c.tau2)
        meta.append(("parameters", ", ".join(f"{k}={_fmt(v)}" for k, v in params.items())))
    if "preset" in spec.settings:
        meta.append(("preset", spec.settings["preset"]))
    for k, v in (extra or {}).items():
        meta.append((k, str(v)))
    meta.append(("version", f"eoentangle {__version__}"))
    return meta


def _variant_text(spec: ScenarioSpec) -> str:
    key, values = spec.variants
    return f"{key}=" + ";".join(_fmt(v) for v in values)


def _run_fig3(spec: ScenarioSpec) -> ScenarioResult:
    states = _states_on_grid(spec.config, spec.grid)
    rows = [[t] + [_clamped_photon_number(s, m) for m in range(3)] for t, s in zip(spec.grid, states)]
    return ScenarioResult(spec.name, ["tau", "N_a1", "N_b1", "N_b2"], rows, _metadata(spec))


def _run_fig4(spec: ScenarioSpec) -> ScenarioResult:
    key, values = spec.variants
    base = spec.config
    phases = np.asarray(spec.grid)
    taus = phases * math.pi / math.sqrt(1.0 - base.r**2)
    columns, header = [], ["phase"]
    for v in values:
        if key == "n_th_values":
            cfg = base.with_(n_th=(base.n_th[0], v, v), initial_occupations=None)
            header.append(f"V[n_th={_fmt(v)}]")
        else:
            cfg = base.with_(k0=v, k1=v, k2=v)
            header.append(f"V[k={_fmt(v)}]")
        states = _states_on_grid(cfg, taus)
        columns.append([epr_variance(s, (1, 2)) for s in states])
    rows = [[p, *vals] for p, *vals in zip(phases, *columns)]
    return ScenarioResult(spec.name, header, rows,
                          _metadata(spec, {"x-axis": "phase = sqrt(1-r^2) tau / pi",
                                           "variants": _variant_text(spec)}))


def _run_fig6(spec: ScenarioSpec) -> ScenarioResult:
    _, values = spec.variants
    base = spec.config
    xs = np.asarray(spec.grid)
    taus = xs * base.k0 / (1.0 - base.r**2)
    sims, formulas, header = [], [], ["x"]
    for k1 in values:
        cfg = base.with_(k1=k1, k2=k1)
        states = _states_on_grid(cfg, taus)
        sims.append([epr_variance(s, epr_modes("dissipative")) for s in states])
        formulas.append(dissipative_transient_variance(scaled_time(taus, cfg), taus, cfg))
    header += [f"V_sim[k1={_fmt(k)}]" for k in values]
    header += [f"V_formula[k1={_fmt(k)}]" for k in values]
    header.append("V_ideal")
    ideal = 2.0 * (1.0 - base.r) / (1.0 + base.r)
    rows = [[x, *(c[j] for c in sims), *(f[j] for f in formulas), ideal] for j, x in enumerate(xs)]
    return ScenarioResult(spec.name, header, rows,
                          _metadata(spec, {"x-axis": "x = (1-r^2) tau / k0",
                                           "variants": _variant_text(spec)}))


def _run_fig7(spec: ScenarioSpec) -> ScenarioResult:
    result = sweep(spec, "tau2", spec.grid)
    rows = [[x, v] for x, v in result.samples]
    x_opt, v_opt = result.optimum
    footer = [f"#optimum,{_fmt(x_opt)},{_fmt(v_opt)},interior={str(result.interior).lower()}"]
    return ScenarioResult(spec.name, ["tau2", "V"], rows, _metadata(spec, {"sweep": "tau2"}), footer)


def params_report_rows(physical: PhysicalParams, squeeze_time: float | None = None) -> list[list[Any]]:
    """(quantity, value, unit) rows of the device parameter chain."""
    rates = scheme_rates(physical)
    rows: list[list[Any]] = []
    for i in (0, 1):
        rows.append([f"omega_b{i + 1}", FullPrecision(rad_to_hz(rates.resonator_frequencies[i])), "Hz (2pi x)"])
    for i in (0, 1):
        rows.append([f"g{i + 1}", FullPrecision(rad_to_hz(rates.couplings[i])), "Hz (2pi x)"])
    for i in (0, 1):
        rows.append([f"n_cav{i + 1}", FullPrecision(rates.cavity_photon_numbers[i]), "1"])
    for i in (0, 1):
        rows.append([f"G{i + 1}", FullPrecision(rad_to_hz(rates.effective_couplings[i])), "Hz (2pi x)"])
    rows.append(["r", FullPrecision(rates.ratio), "1"])
    for i in range(3):
        rows.append([f"k{i}", FullPrecision(rates.scaled_decays[i]), "1"])
    for i in range(3):
        rows.append([f"n_th{i}", FullPrecision(rates.thermal_occupations[i]), "1"])
    for i in (0, 1):
        rows.append([f"drive_ratio{i + 1}", FullPrecision(rates.drive_ratios[i]), "1"])
    if squeeze_time is not None:
        rows.append(["T_c", FullPrecision(operation_times(rates, "cascaded", squeeze_time)), "s"])
    for scheme, label in (("parallel", "T_p"), ("dissipative", "T_d")):
        try:
            rows.append([label, FullPrecision(operation_times(rates, scheme)), "s"])
        except NumericalError:
            rows.append([label, "undefined", "s"])
    return rows


def _run_params_report(spec: ScenarioSpec) -> ScenarioResult:
    T2 = spec.settings.get("T2", 1.6e-6)
    rows = params_report_rows(spec.physical, T2)
    return ScenarioResult(spec.name, ["quantity", "value", "unit"], rows,
                          _metadata(spec, {"T2": _fmt(T2)}))


def _run_custom(spec: ScenarioSpec) -> ScenarioResult:
    config = spec.config
    states = _states_on_grid(config, spec.grid)
    if config.kind == "dissipative":
        labels = ["N_a1", "N_a2", "N_b1", "N_b2"]
    else:
        labels = ["N_a1", "N_b1", "N_b2"]
    pair = epr_modes(config.kind)
    rows = []
    for t, s in zip(spec.grid, states):
        v = epr_variance(s, pair)
        rows.append([t, *(_clamped_photon_number(s, m) for m in range(len(labels))), v])
    return ScenarioResult(spec.name, ["tau", *labels, "V"], rows, _metadata(spec))


RUNNERS: dict[str, Callable[[ScenarioSpec], ScenarioResult]] = {
    "fig3a": _run_fig3,
    "fig3b": _run_fig3,
    "fig4a": _run_fig4,
    "fig4b": _run_fig4,
    "fig6": _run_fig6,
    "fig7": _run_fig7,
    "params-report": _run_params_report,
    "custom": _run_custom,
}


def run_scenario(spec: ScenarioSpec) -> ScenarioResult:
    """Run a scenario and return its CSV table."""
    result = RUNNERS[spec.name](spec)
    for row in result.rows:
        for v in row:
            if isinstance(v, float) and not math.isfinite(v):
                raise NumericalError(f"non-finite value in scenario {spec.name}")
    return result


def reproduce(name: str, overrides: Mapping[str, Any] | None = None) -> ScenarioResult:
    """Run a built-in figure scenario with optional setting overrides."""
    if name not in SCENARIO_DEFAULTS or name in ("custom",):
        raise ConfigError(f"unknown figure {name!r}")
    return run_scenario(build_scenario({"scenario": name, **(overrides or {})}))


def parse_params_report(text: str) -> dict[str, float]:
    """Read the (quantity, value) pairs back from a params-report CSV."""
    out: dict[str, float] = {}
    for line in text.splitlines():
        if not line or line.startswith("#") or line.startswith("quantity,"):
            continue
        name, value, _ = line.split(",", 2)
        try:
            out[name] = float(value)
        except ValueError:
            continue
    return out


def report_to_settings(report: Mapping[str, float], scheme: str) -> dict[str, Any]:
    """Dimensionless settings for a custom scenario from a params report."""
    if scheme not in SCHEMES:
        raise ConfigError(f"unknown scheme {scheme!r}")
    keys = ("r", "k0", "k1", "k2", "n_th0", "n_th1", "n_th2")
    return {"scenario": "custom", "scheme": scheme, **{k: report[k] for k in keys}}
