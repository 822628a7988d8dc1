"""Batch pipeline: integrate the requested evolutions and persist CSV products.

All numeric CSV fields are written with 17 significant digits and '\n' line
endings, so identical configs produce byte-identical files.  There is no
randomness anywhere in the pipeline.
"""

from __future__ import annotations

import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import partial
from pathlib import Path
from typing import Iterable

import numpy as np

from . import __version__
from .config import RunConfig, check_runnable
from .dynamics import Trajectory, TimeGrid, integrate, backward_forward_rhs, forward_rhs, time_reverse
from .enlarged import EnlargedState, embed, enlarge_model, enlarged_rhs
from .linalg import ComplexMatrix, sigma_z
from .measurement import (
    WeakValueSample,
    conventional_weak_value_enlarged,
    detect_jumps,
    expectation,
    two_time_weak_value_enlarged,
    voltage_two_time_weak_value_analytic,
    voltage_weak_value_analytic,
)
from .models import (
    Scenario,
    bloch_coordinates,
    boundary_preset,
    build_model,
    observable_set,
    omega_from_mhz,
    rate_from_khz,
)
from .dynamics import LindbladModel

POSITIVITY_TOL = 1e-8


@dataclass
class RunReport:
    files_written: list[Path]
    warnings: list[str]


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _write_csv(path: Path, header: list[str], rows: Iterable[list[str]]) -> int:
    count = 0
    with open(path, "w", newline="") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(row) + "\n")
            count += 1
    return count


def build_scenario(cfg: RunConfig) -> Scenario:
    """Materialize the configured model, boundary states, and grid."""
    omega = omega_from_mhz(cfg.omega_mhz)
    k = rate_from_khz(cfg.k_khz)
    if cfg.scenario_name is not None:
        model = build_model(cfg.scenario_name, omega, k)
        label = cfg.scenario_name
    else:
        model = LindbladModel(
            hamiltonian=cfg.inline_hamiltonian,
            lindblad_ops=tuple(cfg.inline_lindblad),
        )
        label = cfg.label or "inline"
    d = model.dim

    def boundary(spec) -> ComplexMatrix:
        if isinstance(spec, str):
            return boundary_preset(spec, d)
        return np.asarray(spec, dtype=complex)

    rho0 = boundary(cfg.rho0_spec)
    effect = boundary(cfg.effect_spec)
    tr = np.trace(rho0)
    if abs(tr - 1.0) > 1e-9:
        rho0 = rho0 / tr
    return Scenario(
        model=model,
        rho_initial=rho0,
        effect_final=effect,
        grid=TimeGrid(t_final=cfg.t_final, dt=cfg.dt),
        rabi_frequency=omega,
        rate=k,
        label=label,
    )


def _positivity_warning(states: np.ndarray, what: str) -> str | None:
    eigs = np.linalg.eigvalsh(0.5 * (states + states.conj().transpose(0, 2, 1)))
    worst = float(eigs.min())
    if worst < -POSITIVITY_TOL:
        return f"{what}: minimum eigenvalue {worst:.3e} below -{POSITIVITY_TOL:g}"
    return None


def _value_for(name: str, A, state: ComplexMatrix) -> complex:
    # plain averages: the voltage signal of an unconditioned state is the
    # observable mean (cross terms carry no weight without an effect state)
    if name == "voltage":
        return expectation(sigma_z, state)
    return expectation(A, state)


def _timeseries_rows(
    times: np.ndarray, states: np.ndarray, obs_items: list[tuple[str, ComplexMatrix]]
) -> Iterable[list[str]]:
    for i, t in enumerate(times):
        row = [_fmt(t)]
        for name, A in obs_items:
            v = _value_for(name, A, states[i])
            row += [_fmt(v.real), _fmt(v.imag)]
        yield row


def _weak_sample_for(
    name: str,
    A,
    kind: str,
    enl_t: EnlargedState,
    enl_rev: EnlargedState,
    cfg: RunConfig,
    t: float,
) -> WeakValueSample:
    meas = cfg.measurement
    if name == "voltage":
        if kind == "conventional":
            return voltage_weak_value_analytic(
                enl_t, enl_rev, meas.exact_correction, meas.a, time=t
            )
        return voltage_two_time_weak_value_analytic(
            enl_t, meas.exact_correction, meas.a, time=t
        )
    if kind == "conventional":
        return conventional_weak_value_enlarged(A, enl_t, enl_rev, time=t)
    return two_time_weak_value_enlarged(A, enl_t, time=t)


def _weak_rows(
    kind: str,
    enl_traj: Trajectory,
    obs_items: list[tuple[str, ComplexMatrix]],
    cfg: RunConfig,
) -> Iterable[list[str]]:
    times = enl_traj.grid.times
    n = enl_traj.grid.n_steps
    d = enl_traj.dim // 2
    for i, t in enumerate(times):
        enl_t = EnlargedState(enl_traj.states[i], d)
        enl_rev = EnlargedState(enl_traj.states[n - i], d)
        row = [_fmt(t)]
        for name, A in obs_items:
            s = _weak_sample_for(name, A, kind, enl_t, enl_rev, cfg, t)
            row += [_fmt(s.value.real), _fmt(s.value.imag), str(int(s.diverged))]
        yield row


def _sigma_z_two_time_series(enl_traj: Trajectory) -> list[WeakValueSample]:
    times = enl_traj.grid.times
    d = enl_traj.dim // 2
    return [
        two_time_weak_value_enlarged(sigma_z, EnlargedState(state, d), time=times[i])
        for i, state in enumerate(enl_traj.states)
    ]


def _run_single(cfg: RunConfig, outdir: Path, warnings_list: list[str]) -> list[tuple[Path, int]]:
    scenario = build_scenario(cfg)
    modes = set(cfg.modes)
    obs = observable_set(cfg.measurement.photon_convention, cfg.measurement.a)
    obs_items = [(name, obs[name]) for name in cfg.observables]
    files: list[tuple[Path, int]] = []

    need_forward = modes & {"forward", "voltage", "bloch"}
    need_backward = modes & {"backward", "voltage", "bloch"}
    need_enlarged = modes & {
        "enlarged",
        "weak_conventional",
        "weak_two_time",
        "voltage",
        "bloch",
        "jumps",
    }

    traj_fwd = effect_states = traj_enl = None
    if need_forward:
        traj_fwd = integrate(
            partial(forward_rhs, scenario.model), scenario.rho_initial, scenario.grid
        )
        warn = _positivity_warning(traj_fwd.states, "forward trajectory")
        if warn:
            warnings_list.append(warn)
    if need_backward:
        traj_bf = integrate(
            partial(backward_forward_rhs, scenario.model),
            scenario.effect_final,
            scenario.grid,
        )
        effect_states = time_reverse(traj_bf).states  # sample i is the effect at i*dt
    if need_enlarged:
        enl_model = enlarge_model(scenario.model)
        initial = embed(scenario.rho_initial, scenario.effect_final)
        traj_enl = integrate(partial(enlarged_rhs, enl_model), initial.matrix, scenario.grid)

    times = scenario.grid.times
    n = scenario.grid.n_steps
    d = scenario.model.dim

    if "forward" in modes:
        header = ["t_s"] + [c for name, _ in obs_items for c in (f"re_{name}", f"im_{name}")]
        path = outdir / "forward.csv"
        files.append((path, _write_csv(path, header, _timeseries_rows(times, traj_fwd.states, obs_items))))
    if "backward" in modes:
        header = ["t_s"] + [c for name, _ in obs_items for c in (f"re_{name}", f"im_{name}")]
        path = outdir / "backward.csv"
        files.append((path, _write_csv(path, header, _timeseries_rows(times, effect_states, obs_items))))
    if "enlarged" in modes:
        header = ["t_s"] + [
            c
            for name, _ in obs_items
            for c in (
                f"re_block0_{name}",
                f"im_block0_{name}",
                f"re_block1_{name}",
                f"im_block1_{name}",
            )
        ]

        def enlarged_rows():
            for i, t in enumerate(times):
                enl = EnlargedState(traj_enl.states[i], d)
                row = [_fmt(t)]
                for name, A in obs_items:
                    v0 = _value_for(name, A, enl.block(0))
                    v1 = _value_for(name, A, enl.block(1))
                    row += [_fmt(v0.real), _fmt(v0.imag), _fmt(v1.real), _fmt(v1.imag)]
                yield row

        path = outdir / "enlarged.csv"
        files.append((path, _write_csv(path, header, enlarged_rows())))
    for mode, kind, fname in (
        ("weak_conventional", "conventional", "weak_conventional.csv"),
        ("weak_two_time", "two_time", "weak_two_time.csv"),
    ):
        if mode in modes:
            header = ["t_s"] + [
                c
                for name, _ in obs_items
                for c in (f"re_{name}", f"im_{name}", f"diverged_{name}")
            ]
            path = outdir / fname
            files.append((path, _write_csv(path, header, _weak_rows(kind, traj_enl, obs_items, cfg))))
    if "voltage" in modes:
        header = [
            "t_s",
            "re_v_forward",
            "im_v_forward",
            "re_v_backward",
            "im_v_backward",
            "re_v_weak",
            "im_v_weak",
            "diverged_v_weak",
            "re_v_two_time",
            "im_v_two_time",
            "diverged_v_two_time",
        ]

        def voltage_rows():
            meas = cfg.measurement
            for i, t in enumerate(times):
                enl_t = EnlargedState(traj_enl.states[i], d)
                enl_rev = EnlargedState(traj_enl.states[n - i], d)
                vf = expectation(sigma_z, traj_fwd.states[i])
                vb = expectation(sigma_z, effect_states[i])
                vw = voltage_weak_value_analytic(
                    enl_t, enl_rev, meas.exact_correction, meas.a, time=t
                )
                v2 = voltage_two_time_weak_value_analytic(
                    enl_t, meas.exact_correction, meas.a, time=t
                )
                yield [
                    _fmt(t),
                    _fmt(vf.real),
                    _fmt(vf.imag),
                    _fmt(vb.real),
                    _fmt(vb.imag),
                    _fmt(vw.value.real),
                    _fmt(vw.value.imag),
                    str(int(vw.diverged)),
                    _fmt(v2.value.real),
                    _fmt(v2.value.imag),
                    str(int(v2.diverged)),
                ]

        path = outdir / "voltage.csv"
        files.append((path, _write_csv(path, header, voltage_rows())))
    if "bloch" in modes:
        header = ["t_s", "x", "y", "z", "state_kind"]

        def bloch_rows():
            kinds: list[tuple[str, np.ndarray]] = []
            if traj_fwd is not None:
                kinds.append(("forward", traj_fwd.states))
            if effect_states is not None:
                kinds.append(("backward", effect_states))
            if traj_enl is not None:
                blocks0 = np.array([EnlargedState(s, d).block(0) for s in traj_enl.states])
                blocks1 = np.array([EnlargedState(s, d).block(1) for s in traj_enl.states])
                kinds.append(("enlarged_block0", blocks0))
                kinds.append(("enlarged_block1", blocks1))
            for kind, states in kinds:
                for i, t in enumerate(times):
                    x, y, z = bloch_coordinates(states[i])
                    yield [_fmt(t), _fmt(x), _fmt(y), _fmt(z), kind]

        path = outdir / "bloch.csv"
        files.append((path, _write_csv(path, header, bloch_rows())))
    if "jumps" in modes:
        header = ["t_start_s", "t_end_s", "direction", "delta_j_s"]
        series = _sigma_z_two_time_series(traj_enl)
        events = detect_jumps(series, cfg.measurement.jump_threshold)
        rows = [
            [_fmt(e.t_start), _fmt(e.t_end), str(e.direction), _fmt(e.delta_j)]
            for e in events
        ]
        path = outdir / "jumps.csv"
        files.append((path, _write_csv(path, header, rows)))
    return files


def _sweep_point(cfg: RunConfig, value: float) -> dict[str, list[tuple[float, complex, bool]]]:
    """Worker: one parameter point -> {observable: [(t, value, diverged), ...]}."""
    sweep = cfg.sweep
    omega_mhz = value if sweep.parameter == "omega" else cfg.omega_mhz
    k_khz = value if sweep.parameter == "k" else cfg.k_khz
    model = build_model(
        cfg.scenario_name, omega_from_mhz(omega_mhz), rate_from_khz(k_khz)
    )
    d = model.dim
    grid = TimeGrid(t_final=cfg.t_final, dt=cfg.dt)
    rho0 = boundary_preset(cfg.rho0_spec, d) if isinstance(cfg.rho0_spec, str) else np.asarray(cfg.rho0_spec, dtype=complex)
    effect = boundary_preset(cfg.effect_spec, d) if isinstance(cfg.effect_spec, str) else np.asarray(cfg.effect_spec, dtype=complex)
    enl_model = enlarge_model(model)
    traj = integrate(partial(enlarged_rhs, enl_model), embed(rho0, effect).matrix, grid)
    kind = "two_time" if "weak_two_time" in cfg.modes else "conventional"
    obs = observable_set(cfg.measurement.photon_convention, cfg.measurement.a)
    times = grid.times
    n = grid.n_steps
    out: dict[str, list[tuple[float, complex, bool]]] = {}
    for name in cfg.observables:
        series = []
        for i, t in enumerate(times):
            enl_t = EnlargedState(traj.states[i], d)
            enl_rev = EnlargedState(traj.states[n - i], d)
            s = _weak_sample_for(name, obs[name], kind, enl_t, enl_rev, cfg, t)
            series.append((t, s.value, s.diverged))
        out[name] = series
    return out


def _run_sweep(cfg: RunConfig, outdir: Path) -> list[tuple[Path, int]]:
    sweep = cfg.sweep
    values = sweep.values()
    worker = partial(_sweep_point, cfg)
    if cfg.workers > 1:
        with ProcessPoolExecutor(max_workers=min(cfg.workers, len(values))) as pool:
            results = list(pool.map(worker, values))
    else:
        results = [worker(v) for v in values]
    # results arrive in parameter order; rows are written parameter-major
    files: list[tuple[Path, int]] = []
    header = ["param_name", "param_value", "t_s", "re", "im", "diverged"]
    for name in cfg.observables:
        path = outdir / f"sweep_{name}.csv"

        def rows():
            for value, result in zip(values, results):
                for t, v, diverged in result[name]:
                    yield [
                        sweep.parameter,
                        _fmt(value),
                        _fmt(t),
                        _fmt(v.real),
                        _fmt(v.imag),
                        str(int(diverged)),
                    ]

        files.append((path, _write_csv(path, header, rows())))
    return files


def run(cfg: RunConfig) -> RunReport:
    """Execute a configuration and write its CSV products plus manifest.json."""
    check_runnable(cfg)
    t0 = time.perf_counter()
    warnings_list: list[str] = []
    outdir = Path(cfg.output_dir)
    outdir.mkdir(parents=True, exist_ok=True)
    if cfg.sweep is not None:
        files = _run_sweep(cfg, outdir)
    else:
        files = _run_single(cfg, outdir, warnings_list)
    manifest = {
        "tool": "tsvf",
        "version": __version__,
        "config": cfg.to_dict(),
        "wall_time_s": time.perf_counter() - t0,
        "files": [{"path": p.name, "rows": rows} for p, rows in files],
        "warnings": warnings_list,
    }
    manifest_path = outdir / "manifest.json"
    with open(manifest_path, "w", newline="") as fh:
        json.dump(manifest, fh, indent=2)
        fh.write("\n")
    return RunReport(
        files_written=[p for p, _ in files] + [manifest_path], warnings=warnings_list
    )
