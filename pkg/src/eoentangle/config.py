"""
Flat ``key = value`` configuration files.

One setting per line, ``#`` starts a comment, values may carry an SI
suffix (``70nH``, ``40fF``, ``10um``, ``10mW``, ``100mK``, ``0.3MHz``...).
Frequency-valued keys take ordinary frequencies in Hz and are stored as
angular frequencies. List-valued keys take comma-separated numbers.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from .errors import ConfigError

SCENARIOS = ("fig3a", "fig3b", "fig4a", "fig4b", "fig6", "fig7", "params-report", "custom")
SCHEMES = ("cascaded", "parallel", "dissipative")

UNITS = {
    "pm/V": 1e-12,
    "THz": 1e12,
    "GHz": 1e9,
    "MHz": 1e6,
    "kHz": 1e3,
    "Hz": 1.0,
    "nH": 1e-9,
    "uH": 1e-6,
    "H": 1.0,
    "fF": 1e-15,
    "pF": 1e-12,
    "F": 1.0,
    "nm": 1e-9,
    "um": 1e-6,
    "mm": 1e-3,
    "m": 1.0,
    "uW": 1e-6,
    "mW": 1e-3,
    "W": 1.0,
    "mK": 1e-3,
    "K": 1.0,
    "ns": 1e-9,
    "us": 1e-6,
    "s": 1.0,
}

_NUMBER = re.compile(r"^\s*([-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?)\s*([A-Za-z/]*)\s*$")

# key -> (kind, allowed unit dimension or None)
# kinds: "float", "freq" (Hz -> rad/s), "list", "choice", "str", "int"
KEYS: dict[str, tuple[str, str | None]] = {
    "scenario": ("choice", None),
    "scheme": ("choice", None),
    "preset": ("choice", None),
    "output": ("str", None),
    # dimensionless scheme parameters
    "r": ("float", None),
    "k": ("float", None),
    "k0": ("float", None),
    "k1": ("float", None),
    "k2": ("float", None),
    "n_th": ("float", None),
    "n_th0": ("float", None),
    "n_th1": ("float", None),
    "n_th2": ("float", None),
    "n_init0": ("float", None),
    "n_init1": ("float", None),
    "n_init2": ("float", None),
    "tau1": ("float", None),
    "tau2": ("float", None),
    # grid
    "start": ("float", None),
    "stop": ("float", None),
    "points": ("int", None),
    # variant lists for multi-curve figures
    "n_th_values": ("list", None),
    "k_values": ("list", None),
    "k1_values": ("list", None),
    # device parameters
    "eo_coefficient": ("float", "pm/V"),
    "d": ("float", "m"),
    "C": ("float", "F"),
    "C1": ("float", "F"),
    "C2": ("float", "F"),
    "L": ("float", "H"),
    "L1": ("float", "H"),
    "L2": ("float", "H"),
    "f_a": ("freq", "Hz"),
    "P": ("float", "W"),
    "gamma": ("freq", "Hz"),
    "gamma0": ("freq", "Hz"),
    "gamma_b": ("freq", "Hz"),
    "gamma1": ("freq", "Hz"),
    "gamma2": ("freq", "Hz"),
    "delta1": ("freq", "Hz"),
    "delta2": ("freq", "Hz"),
    "T": ("float", "K"),
    "T2": ("float", "s"),
}

CHOICES = {
    "scenario": SCENARIOS,
    "scheme": SCHEMES,
    "preset": ("cascaded", "cascaded-improved", "parallel", "dissipative"),
}

_DIMENSION_OF_UNIT = {
    "pm/V": "pm/V",
    "THz": "Hz", "GHz": "Hz", "MHz": "Hz", "kHz": "Hz", "Hz": "Hz",
    "nH": "H", "uH": "H", "H": "H",
    "fF": "F", "pF": "F", "F": "F",
    "nm": "m", "um": "m", "mm": "m", "m": "m",
    "uW": "W", "mW": "W", "W": "W",
    "mK": "K", "K": "K",
    "ns": "s", "us": "s", "s": "s",
}


@dataclass
class ConfigFile:
    """Parsed settings plus where each one came from (for diagnostics)."""

    settings: dict[str, Any]
    source: str = "<string>"
    lines: dict[str, int] = field(default_factory=dict)


def parse_quantity(text: str, dimension: str | None = None) -> float:
    """Parse ``"70nH"`` → 7e-8. ``dimension`` restricts the accepted suffixes."""
    m = _NUMBER.match(text)
    if not m:
        raise ValueError(f"not a number: {text!r}")
    value = float(m.group(1))
    unit = m.group(2)
    if not unit:
        return value
    if unit not in UNITS:
        raise ValueError(f"unknown unit suffix {unit!r}")
    if dimension is None:
        raise ValueError(f"dimensionless value cannot carry unit {unit!r}")
    if _DIMENSION_OF_UNIT[unit] != dimension:
        raise ValueError(f"unit {unit!r} does not fit a quantity in {dimension}")
    return value * UNITS[unit]


def convert_value(key: str, raw: str) -> Any:
    """Convert a raw string for ``key`` according to the key table."""
    if key not in KEYS:
        raise KeyError(key)
    kind, dim = KEYS[key]
    raw = raw.strip()
    if kind == "choice":
        if raw not in CHOICES[key]:
            raise ValueError(f"{key} must be one of {', '.join(CHOICES[key])}; got {raw!r}")
        return raw
    if kind == "str":
        if not raw:
            raise ValueError(f"{key} needs a value")
        return raw
    if kind == "int":
        value = int(raw)
        if value < 1:
            raise ValueError(f"{key} must be a positive integer")
        return value
    if kind == "list":
        items = [s for s in (p.strip() for p in raw.split(",")) if s]
        if not items:
            raise ValueError(f"{key} needs at least one value")
        return tuple(parse_quantity(s) for s in items)
    value = parse_quantity(raw, dim)
    if not math.isfinite(value):
        raise ValueError(f"{key} must be finite")
    if kind == "freq":
        value *= 2.0 * math.pi
    return value


def parse_config_text(text: str, source: str = "<string>") -> ConfigFile:
    """Parse configuration text; raise :class:`ConfigError` with line:column."""
    settings: dict[str, Any] = {}
    lines: dict[str, int] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        body = line.split("#", 1)[0]
        if not body.strip():
            continue
        if "=" not in body:
            col = len(body) - len(body.lstrip()) + 1
            raise ConfigError(f"{source}:{lineno}:{col}: expected 'key = value'")
        key_part, value_part = body.split("=", 1)
        key = key_part.strip()
        key_col = len(key_part) - len(key_part.lstrip()) + 1
        value_col = len(key_part) + 2 + (len(value_part) - len(value_part.lstrip()))
        if key not in KEYS:
            raise ConfigError(f"{source}:{lineno}:{key_col}: unknown key {key!r}")
        if key in settings:
            raise ConfigError(
                f"{source}:{lineno}:{key_col}: duplicate key {key!r} (first set on line {lines[key]})"
            )
        try:
            settings[key] = convert_value(key, value_part)
        except (ValueError, KeyError) as exc:
            raise ConfigError(f"{source}:{lineno}:{value_col}: {key}: {exc}") from None
        lines[key] = lineno
    return ConfigFile(settings, source, lines)


def read_config(path: str | Path) -> ConfigFile:
    path = Path(path)
    try:
        text = path.read_text()
    except FileNotFoundError:
        raise ConfigError(f"{path}: no such config file") from None
    except OSError as exc:
        raise ConfigError(f"{path}: {exc.strerror}") from None
    return parse_config_text(text, str(path))
