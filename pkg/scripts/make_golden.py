#!/usr/bin/env python3
"""Regenerate the committed golden CSVs under golden/.

The four runs mirror the acceptance-suite scenarios: the two reference runs
at T = 2 us / dt = 1 ns, the long fluorescence window at T = 4 us, and a
50-point drive-frequency sweep sampled on a 200-point grid.  Outputs are
deterministic, so a rerun must reproduce the committed files byte for byte.
"""

from __future__ import annotations

import sys
from pathlib import Path

from tsvf.config import SweepSpec, parse_config
from tsvf.pipeline import run

ROOT = Path(__file__).resolve().parents[1]
GOLDEN = ROOT / "golden"


def base_config(outdir: Path):
    cfg = parse_config({})
    cfg.observables = ["sigma_z", "photon_n", "sigma_minus"]
    cfg.output_dir = str(outdir)
    return cfg


def main() -> int:
    runs = []

    cfg = base_config(GOLDEN / "fluorescence_t2")
    cfg.scenario_name = "fluorescence"
    cfg.modes = ["forward", "backward", "enlarged", "weak_conventional", "bloch"]
    runs.append(cfg)

    cfg = base_config(GOLDEN / "dephasing_t2")
    cfg.scenario_name = "dephasing"
    cfg.observables = ["sigma_z"]
    cfg.modes = ["voltage"]
    runs.append(cfg)

    cfg = base_config(GOLDEN / "fluorescence_t4")
    cfg.scenario_name = "fluorescence"
    cfg.t_final = 4e-6
    cfg.modes = ["weak_two_time", "jumps"]
    runs.append(cfg)

    cfg = base_config(GOLDEN / "sweep_omega")
    cfg.scenario_name = "fluorescence"
    cfg.observables = ["sigma_z"]
    cfg.modes = ["weak_two_time"]
    cfg.t_final = 1.99e-6  # 199 steps of 10 ns -> 200 samples per point
    cfg.dt = 1e-8
    cfg.sweep = SweepSpec(parameter="omega", start=0.2, stop=3.0, points=50)
    cfg.workers = 4
    runs.append(cfg)

    for cfg in runs:
        report = run(cfg)
        for path in report.files_written:
            print(path.relative_to(ROOT) if path.is_relative_to(ROOT) else path)
        for warning in report.warnings:
            print(f"warning: {warning}", file=sys.stderr)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
