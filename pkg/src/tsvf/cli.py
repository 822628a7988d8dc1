"""Command-line front end: simulate, sweep, voltage, jumps, validate.

Exit codes: 0 success, 1 configuration error, 2 runtime/integration error.
"""

from __future__ import annotations

import argparse
import sys

from . import __version__
from .config import ConfigError, RunConfig, SweepSpec, load_config, validate
from .dynamics import IntegrationDivergedError
from .pipeline import run


def _add_override_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="TOML configuration file")
    p.add_argument("--out", dest="output_dir", help="output directory (overrides output.dir)")
    p.add_argument("--workers", type=int, help="parallel workers for sweeps")
    p.add_argument("--modes", help="comma-separated mode list override")
    p.add_argument("--observables", help="comma-separated observable list override")
    p.add_argument("--grid.dt", dest="grid_dt", type=float, help="time step in seconds")
    p.add_argument("--grid.t_final", dest="grid_t_final", type=float, help="final time in seconds")
    p.add_argument("--scenario.name", dest="scenario_name", help="fluorescence or dephasing")
    p.add_argument(
        "--scenario.omega_mhz", dest="omega_mhz", type=float, help="drive frequency omega/2pi in MHz"
    )
    p.add_argument(
        "--scenario.k_khz", dest="k_khz", type=float, help="damping rate k/2pi in kHz"
    )
    p.add_argument("--boundary.rho0", dest="rho0", help="initial-state preset name")
    p.add_argument("--boundary.effect", dest="effect", help="final-effect preset name")
    p.add_argument("--measurement.a", dest="meas_a", type=float, help="pointer width a")
    p.add_argument(
        "--measurement.exact_correction",
        dest="exact_correction",
        action="store_true",
        default=None,
        help="carry the finite-width cross-term factor exactly",
    )
    p.add_argument(
        "--measurement.jump_threshold", dest="jump_threshold", type=float, help="jump threshold in (0, 1)"
    )
    p.add_argument("--sweep.parameter", dest="sweep_parameter", help="omega or k")
    p.add_argument("--sweep.start", dest="sweep_start", type=float)
    p.add_argument("--sweep.stop", dest="sweep_stop", type=float)
    p.add_argument("--sweep.points", dest="sweep_points", type=int)


def _apply_overrides(cfg: RunConfig, args: argparse.Namespace) -> RunConfig:
    if args.output_dir is not None:
        cfg.output_dir = args.output_dir
    if args.workers is not None:
        cfg.workers = args.workers
    if args.modes is not None:
        cfg.modes = [m.strip() for m in args.modes.split(",") if m.strip()]
    if args.observables is not None:
        cfg.observables = [o.strip() for o in args.observables.split(",") if o.strip()]
    if args.grid_dt is not None:
        cfg.dt = args.grid_dt
    if args.grid_t_final is not None:
        cfg.t_final = args.grid_t_final
    if args.scenario_name is not None:
        cfg.scenario_name = args.scenario_name
    if args.omega_mhz is not None:
        cfg.omega_mhz = args.omega_mhz
    if args.k_khz is not None:
        cfg.k_khz = args.k_khz
    if args.rho0 is not None:
        cfg.rho0_spec = args.rho0
    if args.effect is not None:
        cfg.effect_spec = args.effect
    if args.meas_a is not None:
        cfg.measurement.a = args.meas_a
    if args.exact_correction is not None:
        cfg.measurement.exact_correction = args.exact_correction
    if args.jump_threshold is not None:
        cfg.measurement.jump_threshold = args.jump_threshold
    if any(
        v is not None
        for v in (args.sweep_parameter, args.sweep_start, args.sweep_stop, args.sweep_points)
    ):
        base = cfg.sweep or SweepSpec(parameter="omega", start=0.2, stop=3.0, points=200)
        cfg.sweep = SweepSpec(
            parameter=args.sweep_parameter or base.parameter,
            start=args.sweep_start if args.sweep_start is not None else base.start,
            stop=args.sweep_stop if args.sweep_stop is not None else base.stop,
            points=args.sweep_points if args.sweep_points is not None else base.points,
        )
    return cfg


def _load_or_default(args: argparse.Namespace, default: RunConfig) -> RunConfig:
    cfg = load_config(args.config) if args.config else default
    return _apply_overrides(cfg, args)


def _default_voltage_config() -> RunConfig:
    cfg = RunConfig()
    cfg.scenario_name = "dephasing"
    cfg.observables = ["sigma_z"]
    cfg.modes = ["voltage"]
    cfg.output_dir = "out"
    return cfg


def _default_jumps_config() -> RunConfig:
    cfg = RunConfig()
    cfg.scenario_name = "fluorescence"
    cfg.observables = ["sigma_z"]
    cfg.modes = ["jumps"]
    cfg.t_final = 4e-6
    cfg.output_dir = "out"
    return cfg


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tsvf",
        description="Simulate open quantum systems bounded by past and future conditions.",
    )
    parser.add_argument("--version", action="version", version=f"tsvf {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_sim = sub.add_parser("simulate", help="run the modes of a configuration")
    _add_override_flags(p_sim)

    p_sweep = sub.add_parser("sweep", help="run a parameter sweep")
    _add_override_flags(p_sweep)

    p_volt = sub.add_parser("voltage", help="voltage-signal analysis (dephasing default)")
    p_volt.add_argument("--a", type=float, help="pointer width a")
    p_volt.add_argument(
        "--exact-correction",
        action="store_true",
        default=None,
        help="carry the finite-width cross-term factor exactly",
    )
    _add_override_flags(p_volt)

    p_jumps = sub.add_parser("jumps", help="jump detection (fluorescence default)")
    p_jumps.add_argument("--threshold", type=float, help="jump threshold in (0, 1)")
    _add_override_flags(p_jumps)

    p_val = sub.add_parser("validate", help="check a configuration without running")
    p_val.add_argument("config_path", help="TOML configuration file")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "validate":
            diags = validate(args.config_path)
            for line in diags:
                print(line, file=sys.stderr)
            return 0 if not diags else 1

        if args.command == "simulate":
            cfg = _load_or_default(args, RunConfig())
        elif args.command == "sweep":
            cfg = _load_or_default(args, RunConfig())
            if cfg.sweep is None:
                raise ConfigError(["sweep: no sweep section configured (use --sweep.* flags)"])
        elif args.command == "voltage":
            cfg = _load_or_default(args, _default_voltage_config())
            cfg.modes = ["voltage"]
            if args.a is not None:
                cfg.measurement.a = args.a
            if args.exact_correction is not None:
                cfg.measurement.exact_correction = args.exact_correction
        elif args.command == "jumps":
            cfg = _load_or_default(args, _default_jumps_config())
            cfg.modes = ["jumps"]
            if args.threshold is not None:
                cfg.measurement.jump_threshold = args.threshold
        else:  # pragma: no cover
            parser.error(f"unknown command {args.command}")

        report = run(cfg)
    except ConfigError as exc:
        for line in exc.diagnostics:
            print(f"config error: {line}", file=sys.stderr)
        return 1
    except IntegrationDivergedError as exc:
        print(f"runtime error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, OSError) as exc:
        print(f"runtime error: {exc}", file=sys.stderr)
        return 2

    for path in report.files_written:
        print(path)
    for warning in report.warnings:
        print(f"warning: {warning}", file=sys.stderr)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
