"""Run configuration: TOML parsing, semantic validation, and override handling."""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np

try:
    import tomllib
except ModuleNotFoundError:  # python < 3.11
    import tomli as tomllib

from .linalg import is_hermitian
from .models import (
    BOUNDARY_PRESETS,
    DEFAULT_K_KHZ,
    DEFAULT_OMEGA_MHZ,
    OBSERVABLE_NAMES,
    PHOTON_CONVENTIONS,
    SCENARIO_NAMES,
)

MODE_NAMES = (
    "forward",
    "backward",
    "enlarged",
    "weak_conventional",
    "weak_two_time",
    "voltage",
    "bloch",
    "jumps",
)
SWEEP_PARAMETERS = ("omega", "k")


class ConfigError(ValueError):
    """Config problems, each diagnostic a human-readable line."""

    def __init__(self, diagnostics: list[str]):
        self.diagnostics = diagnostics
        super().__init__("; ".join(diagnostics))


@dataclass
class SweepSpec:
    parameter: str  # "omega" (values in MHz) or "k" (values in kHz)
    start: float
    stop: float
    points: int

    def values(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.points)


@dataclass
class MeasurementSettings:
    a: float = 1.0
    exact_correction: bool = False
    jump_threshold: float = 0.5
    photon_convention: str = "field"


@dataclass
class RunConfig:
    scenario_name: str | None = "fluorescence"
    omega_mhz: float = DEFAULT_OMEGA_MHZ
    k_khz: float = DEFAULT_K_KHZ
    inline_hamiltonian: np.ndarray | None = None
    inline_lindblad: list[np.ndarray] = field(default_factory=list)
    rho0_spec: str | np.ndarray = "ground"
    effect_spec: str | np.ndarray = "ground"
    t_final: float = 2e-6
    dt: float = 1e-9
    observables: list[str] = field(default_factory=lambda: ["sigma_z"])
    modes: list[str] = field(default_factory=lambda: ["forward"])
    sweep: SweepSpec | None = None
    measurement: MeasurementSettings = field(default_factory=MeasurementSettings)
    output_dir: str = "out"
    label: str = ""
    workers: int = 1

    def to_dict(self) -> dict[str, Any]:
        """Plain-data echo of the effective configuration (for the manifest)."""

        def mat(m: np.ndarray | None) -> dict | None:
            if m is None:
                return None
            return {"re": m.real.tolist(), "im": m.imag.tolist()}

        def boundary(spec: str | np.ndarray):
            return spec if isinstance(spec, str) else mat(spec)

        out: dict[str, Any] = {
            "label": self.label,
            "scenario": {
                "name": self.scenario_name,
                "omega_mhz": self.omega_mhz,
                "k_khz": self.k_khz,
            },
            "boundary": {"rho0": boundary(self.rho0_spec), "effect": boundary(self.effect_spec)},
            "grid": {"t_final": self.t_final, "dt": self.dt},
            "observables": list(self.observables),
            "modes": list(self.modes),
            "measurement": {
                "a": self.measurement.a,
                "exact_correction": self.measurement.exact_correction,
                "jump_threshold": self.measurement.jump_threshold,
                "photon_convention": self.measurement.photon_convention,
            },
            "output": {"dir": self.output_dir},
            "workers": self.workers,
        }
        if self.inline_hamiltonian is not None:
            out["scenario"]["model"] = {
                "hamiltonian": mat(self.inline_hamiltonian),
                "lindblad": [mat(c) for c in self.inline_lindblad],
            }
        if self.sweep is not None:
            out["sweep"] = {
                "parameter": self.sweep.parameter,
                "start": self.sweep.start,
                "stop": self.sweep.stop,
                "points": self.sweep.points,
            }
        return out


def _parse_matrix(value: Any, where: str, diags: list[str]) -> np.ndarray | None:
    if not isinstance(value, dict) or "re" not in value:
        diags.append(f"{where}: expected a table with 're' (and optional 'im') entry lists")
        return None
    try:
        re = np.asarray(value["re"], dtype=float)
        im = np.asarray(value.get("im", np.zeros_like(re)), dtype=float)
    except (TypeError, ValueError):
        diags.append(f"{where}: entries are not numeric lists")
        return None
    if re.shape != im.shape or re.ndim != 2 or re.shape[0] != re.shape[1]:
        diags.append(f"{where}: 're'/'im' must be equal-shaped square matrices")
        return None
    return re + 1j * im


def parse_config(data: dict[str, Any], strict: bool = True) -> RunConfig:
    """Build a RunConfig from parsed TOML data; raises ConfigError when strict."""
    diags: list[str] = []
    cfg = RunConfig()
    cfg.label = str(data.get("label", ""))

    scen = data.get("scenario", {})
    if not isinstance(scen, dict):
        diags.append("scenario: expected a table")
        scen = {}
    model_tbl = scen.get("model")
    if model_tbl is not None:
        cfg.scenario_name = None
        h = _parse_matrix(model_tbl.get("hamiltonian"), "scenario.model.hamiltonian", diags)
        if h is not None:
            if not is_hermitian(h, 1e-12):
                diags.append("scenario.model.hamiltonian: not Hermitian within 1e-12")
            cfg.inline_hamiltonian = h
        for i, c in enumerate(model_tbl.get("lindblad", [])):
            m = _parse_matrix(c, f"scenario.model.lindblad[{i}]", diags)
            if m is not None:
                if h is not None and m.shape != h.shape:
                    diags.append(
                        f"scenario.model.lindblad[{i}]: shape {m.shape} does not match "
                        f"hamiltonian shape {h.shape}"
                    )
                cfg.inline_lindblad.append(m)
    else:
        name = scen.get("name", cfg.scenario_name)
        if name not in SCENARIO_NAMES:
            diags.append(
                f"scenario.name: unknown scenario {name!r}; valid names: "
                f"{', '.join(SCENARIO_NAMES)} (or provide scenario.model)"
            )
        else:
            cfg.scenario_name = name
    cfg.omega_mhz = float(scen.get("omega_mhz", cfg.omega_mhz))
    cfg.k_khz = float(scen.get("k_khz", cfg.k_khz))
    if cfg.k_khz < 0:
        diags.append(f"scenario.k_khz: must be nonnegative, got {cfg.k_khz}")

    boundary = data.get("boundary", {})
    for key, attr in (("rho0", "rho0_spec"), ("effect", "effect_spec")):
        raw = boundary.get(key, getattr(cfg, attr))
        if isinstance(raw, str):
            if raw not in BOUNDARY_PRESETS:
                diags.append(
                    f"boundary.{key}: unknown preset {raw!r}; valid presets: "
                    f"{', '.join(BOUNDARY_PRESETS)}"
                )
            else:
                setattr(cfg, attr, raw)
        else:
            m = _parse_matrix(raw, f"boundary.{key}", diags)
            if m is not None:
                setattr(cfg, attr, m)

    grid = data.get("grid", {})
    cfg.t_final = float(grid.get("t_final", cfg.t_final))
    cfg.dt = float(grid.get("dt", cfg.dt))
    if cfg.dt <= 0:
        diags.append(f"grid.dt: must be positive, got {cfg.dt}")
    elif cfg.t_final <= 0:
        diags.append(f"grid.t_final: must be positive, got {cfg.t_final}")
    elif cfg.dt > cfg.t_final:
        diags.append(f"grid.dt ({cfg.dt}) exceeds grid.t_final ({cfg.t_final})")

    obs = data.get("observables", cfg.observables)
    cfg.observables = []
    for name in obs:
        if name not in OBSERVABLE_NAMES:
            diags.append(
                f"observables: unknown observable {name!r}; valid names: "
                f"{', '.join(OBSERVABLE_NAMES)}"
            )
        else:
            cfg.observables.append(name)

    modes = data.get("modes", cfg.modes)
    cfg.modes = []
    for name in modes:
        if name not in MODE_NAMES:
            diags.append(f"modes: unknown mode {name!r}; valid modes: {', '.join(MODE_NAMES)}")
        else:
            cfg.modes.append(name)

    sweep = data.get("sweep")
    if sweep is not None:
        param = sweep.get("parameter", "")
        if param not in SWEEP_PARAMETERS:
            diags.append(
                f"sweep.parameter: unknown parameter {param!r}; valid: "
                f"{', '.join(SWEEP_PARAMETERS)}"
            )
        points = int(sweep.get("points", 0))
        if points < 2:
            diags.append(f"sweep.points: need at least 2 points, got {points}")
        try:
            start = float(sweep["start"])
            stop = float(sweep["stop"])
        except KeyError as missing:
            diags.append(f"sweep: missing field {missing.args[0]!r}")
            start = stop = 0.0
        if cfg.scenario_name is None:
            diags.append("sweep: inline models cannot be swept; use a named scenario")
        weak_modes = [m for m in cfg.modes if m in ("weak_two_time", "weak_conventional")]
        if len(weak_modes) != 1:
            diags.append(
                "sweep: modes must contain exactly one of weak_two_time / weak_conventional"
            )
        cfg.sweep = SweepSpec(parameter=param, start=start, stop=stop, points=points)

    meas = data.get("measurement", {})
    cfg.measurement = MeasurementSettings(
        a=float(meas.get("a", 1.0)),
        exact_correction=bool(meas.get("exact_correction", False)),
        jump_threshold=float(meas.get("jump_threshold", 0.5)),
        photon_convention=str(meas.get("photon_convention", "field")),
    )
    if cfg.measurement.a <= 0:
        diags.append(f"measurement.a: must be positive, got {cfg.measurement.a}")
    if not 0.0 < cfg.measurement.jump_threshold < 1.0:
        diags.append(
            f"measurement.jump_threshold: must lie in (0, 1), got "
            f"{cfg.measurement.jump_threshold}"
        )
    if cfg.measurement.photon_convention not in PHOTON_CONVENTIONS:
        diags.append(
            f"measurement.photon_convention: unknown convention "
            f"{cfg.measurement.photon_convention!r}; valid: {', '.join(PHOTON_CONVENTIONS)}"
        )

    out = data.get("output", {})
    cfg.output_dir = str(out.get("dir", cfg.output_dir))
    cfg.workers = int(data.get("workers", 1))
    if cfg.workers < 1:
        diags.append(f"workers: must be at least 1, got {cfg.workers}")

    if strict and diags:
        raise ConfigError(diags)
    # stash diagnostics for non-strict callers (validate)
    cfg._diagnostics = diags  # type: ignore[attr-defined]
    return cfg


def check_runnable(cfg: RunConfig) -> None:
    """Re-check semantic constraints after CLI overrides; raises ConfigError."""
    diags: list[str] = []
    if cfg.scenario_name is not None and cfg.scenario_name not in SCENARIO_NAMES:
        diags.append(
            f"scenario.name: unknown scenario {cfg.scenario_name!r}; valid names: "
            f"{', '.join(SCENARIO_NAMES)}"
        )
    if cfg.scenario_name is None and cfg.inline_hamiltonian is None:
        diags.append("scenario: neither a named scenario nor an inline model is set")
    if cfg.dt <= 0:
        diags.append(f"grid.dt: must be positive, got {cfg.dt}")
    elif cfg.t_final <= 0:
        diags.append(f"grid.t_final: must be positive, got {cfg.t_final}")
    elif cfg.dt > cfg.t_final:
        diags.append(f"grid.dt ({cfg.dt}) exceeds grid.t_final ({cfg.t_final})")
    for name in cfg.observables:
        if name not in OBSERVABLE_NAMES:
            diags.append(
                f"observables: unknown observable {name!r}; valid names: "
                f"{', '.join(OBSERVABLE_NAMES)}"
            )
    for name in cfg.modes:
        if name not in MODE_NAMES:
            diags.append(f"modes: unknown mode {name!r}; valid modes: {', '.join(MODE_NAMES)}")
    for key, spec in (("rho0", cfg.rho0_spec), ("effect", cfg.effect_spec)):
        if isinstance(spec, str) and spec not in BOUNDARY_PRESETS:
            diags.append(
                f"boundary.{key}: unknown preset {spec!r}; valid presets: "
                f"{', '.join(BOUNDARY_PRESETS)}"
            )
    if cfg.sweep is not None:
        if cfg.sweep.parameter not in SWEEP_PARAMETERS:
            diags.append(
                f"sweep.parameter: unknown parameter {cfg.sweep.parameter!r}; valid: "
                f"{', '.join(SWEEP_PARAMETERS)}"
            )
        if cfg.sweep.points < 2:
            diags.append(f"sweep.points: need at least 2 points, got {cfg.sweep.points}")
        if cfg.scenario_name is None:
            diags.append("sweep: inline models cannot be swept; use a named scenario")
        weak_modes = [m for m in cfg.modes if m in ("weak_two_time", "weak_conventional")]
        if len(weak_modes) != 1:
            diags.append(
                "sweep: modes must contain exactly one of weak_two_time / weak_conventional"
            )
    if cfg.measurement.a <= 0:
        diags.append(f"measurement.a: must be positive, got {cfg.measurement.a}")
    if not 0.0 < cfg.measurement.jump_threshold < 1.0:
        diags.append(
            f"measurement.jump_threshold: must lie in (0, 1), got "
            f"{cfg.measurement.jump_threshold}"
        )
    if cfg.workers < 1:
        diags.append(f"workers: must be at least 1, got {cfg.workers}")
    if diags:
        raise ConfigError(diags)


def load_config(path: str | Path) -> RunConfig:
    """Read and parse a TOML config file; raises ConfigError on any problem."""
    p = Path(path)
    try:
        with open(p, "rb") as fh:
            data = tomllib.load(fh)
    except FileNotFoundError:
        raise ConfigError([f"config file not found: {p}"])
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError([f"{p}: TOML parse error: {exc}"])
    return parse_config(data)


def validate(config_path: str | Path) -> list[str]:
    """Schema and semantic checks without running; empty list means runnable."""
    p = Path(config_path)
    try:
        with open(p, "rb") as fh:
            data = tomllib.load(fh)
    except FileNotFoundError:
        return [f"config file not found: {p}"]
    except OSError as exc:
        return [f"config file unreadable: {exc}"]
    except tomllib.TOMLDecodeError as exc:
        return [f"{p}: TOML parse error: {exc}"]
    cfg = parse_config(data, strict=False)
    return list(cfg._diagnostics)  # type: ignore[attr-defined]
