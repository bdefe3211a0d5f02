"""
Command-line entry point ``eoentangle``.

Exit codes: 0 success, 2 configuration or parse error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import sys
import warnings
from typing import Sequence

import numpy as np

from .config import KEYS, CHOICES, SCENARIOS, convert_value, read_config
from .errors import ConfigError, NumericalError
from .experiments import (
    ScenarioResult,
    build_scenario,
    reproduce,
    run_scenario,
    sweep,
    _fmt,
    _metadata,
)

EXIT_OK, EXIT_CONFIG, EXIT_NUMERICAL = 0, 2, 3
FIGURES = tuple(s for s in SCENARIOS if s.startswith("fig"))
NUMERIC_KINDS = ("float", "freq")


class _Parser(argparse.ArgumentParser):
    """argparse with usage errors mapped to exit code 2 (its default too)."""

    def error(self, message):
        self.print_usage(sys.stderr)
        raise ConfigError(message)


def _build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="eoentangle", description="Electro-optic microwave entanglement simulations.")
    parser.add_argument("--workers", type=int, default=None, help="threads for sweeps")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("params", help="device parameter report")
    p.add_argument("config", nargs="?", help="config file with device keys")
    p.add_argument("--preset", choices=CHOICES["preset"], default=None)
    p.add_argument("-o", "--output")

    p = sub.add_parser("simulate", help="run the scenario described by a config file")
    p.add_argument("config")
    p.add_argument("-o", "--output")

    p = sub.add_parser("sweep", help="sweep one numeric setting and report V")
    p.add_argument("config")
    p.add_argument("--param", required=True)
    p.add_argument("--from", dest="start", required=True)
    p.add_argument("--to", dest="stop", required=True)
    p.add_argument("--points", type=int, default=21)
    p.add_argument("-o", "--output")

    p = sub.add_parser("reproduce", help="regenerate a figure data set")
    p.add_argument("figure", choices=FIGURES + ("params-report",))
    p.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                   help="override a default setting (repeatable)")
    p.add_argument("-o", "--output")
    return parser


def _overrides(pairs: Sequence[str]) -> dict:
    out = {}
    for item in pairs:
        if "=" not in item:
            raise ConfigError(f"--set expects KEY=VALUE, got {item!r}")
        key, raw = (s.strip() for s in item.split("=", 1))
        if key not in KEYS:
            raise ConfigError(f"--set: unknown key {key!r}")
        try:
            out[key] = convert_value(key, raw)
        except ValueError as exc:
            raise ConfigError(f"--set {key}: {exc}") from None
    return out


def _emit(result: ScenarioResult, output: str | None) -> None:
    if output:
        result.write(output)
    else:
        sys.stdout.write(result.to_csv())


def _cmd_params(args) -> ScenarioResult:
    settings = read_config(args.config).settings if args.config else {}
    settings = {**settings, "scenario": "params-report"}
    if args.preset:
        settings["preset"] = args.preset
    return run_scenario(build_scenario(settings))


def _cmd_simulate(args) -> tuple[ScenarioResult, str | None]:
    settings = read_config(args.config).settings
    spec = build_scenario(settings)
    return run_scenario(spec), spec.output_path


def _cmd_sweep(args) -> tuple[ScenarioResult, str | None]:
    key = args.param
    if key not in KEYS or KEYS[key][0] not in NUMERIC_KINDS:
        raise ConfigError(f"--param must name a numeric setting, got {key!r}")
    try:
        lo, hi = convert_value(key, args.start), convert_value(key, args.stop)
    except ValueError as exc:
        raise ConfigError(f"sweep range: {exc}") from None
    if args.points < 1:
        raise ConfigError("--points must be at least 1")
    if args.points > 1 and not hi > lo:
        raise ConfigError("sweep range is empty: --to must exceed --from")
    values = np.linspace(lo, hi, args.points)
    spec = build_scenario(read_config(args.config).settings)
    if spec.config is None:
        raise ConfigError("sweeps need a scheme scenario, not params-report")
    result = sweep(spec, key, values, workers=args.workers)
    x_opt, v_opt = result.optimum
    table = ScenarioResult(
        "sweep",
        [key, "V"],
        [[x, v] for x, v in result.samples],
        _metadata(spec, {"sweep": key}),
        [f"#optimum,{_fmt(x_opt)},{_fmt(v_opt)},interior={str(result.interior).lower()}"],
    )
    return table, spec.output_path


def main(argv: Sequence[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        with warnings.catch_warnings():
            warnings.simplefilter("always")
            if args.command == "params":
                result, default_out = _cmd_params(args), None
            elif args.command == "simulate":
                result, default_out = _cmd_simulate(args)
            elif args.command == "sweep":
                result, default_out = _cmd_sweep(args)
            else:
                result, default_out = reproduce(args.figure, _overrides(args.set)), None
        _emit(result, args.output or default_out)
    except ConfigError as exc:
        print(f"eoentangle: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericalError as exc:
        print(f"eoentangle: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except OSError as exc:
        print(f"eoentangle: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    return EXIT_OK


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
