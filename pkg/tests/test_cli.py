from pathlib import Path

import pytest

from tsvf.cli import main

CONFIG = """
observables = ["sigma_z"]
modes = ["forward"]

[scenario]
name = "fluorescence"

[grid]
t_final = 1e-7
dt = 1e-9

[output]
dir = "{out}"
"""


def write_config(tmp_path, text=None, **fmt):
    p = tmp_path / "run.toml"
    p.write_text((text or CONFIG).format(**fmt))
    return p


class TestValidateCommand:
    def test_valid_config_exits_zero(self, tmp_path, capsys):
        p = write_config(tmp_path, out=tmp_path / "out")
        assert main(["validate", str(p)]) == 0
        assert capsys.readouterr().err == ""

    def test_invalid_config_exits_one(self, tmp_path, capsys):
        p = write_config(
            tmp_path, CONFIG.replace("dt = 1e-9", "dt = 1e-6"), out=tmp_path / "out"
        )
        assert main(["validate", str(p)]) == 1
        assert "grid.dt" in capsys.readouterr().err

    def test_missing_file_exits_one(self, tmp_path):
        assert main(["validate", str(tmp_path / "no.toml")]) == 1


class TestSimulateCommand:
    def test_runs_and_lists_outputs(self, tmp_path, capsys):
        p = write_config(tmp_path, out=tmp_path / "out")
        assert main(["simulate", "--config", str(p)]) == 0
        out = capsys.readouterr().out
        assert "forward.csv" in out
        assert (tmp_path / "out" / "forward.csv").exists()

    def test_out_flag_overrides(self, tmp_path):
        p = write_config(tmp_path, out=tmp_path / "ignored")
        assert main(["simulate", "--config", str(p), "--out", str(tmp_path / "real")]) == 0
        assert (tmp_path / "real" / "forward.csv").exists()
        assert not (tmp_path / "ignored").exists()

    def test_config_error_exit_code(self, tmp_path, capsys):
        p = write_config(
            tmp_path, CONFIG.replace('"sigma_z"', '"sigma_q"'), out=tmp_path / "out"
        )
        assert main(["simulate", "--config", str(p)]) == 1
        assert "sigma_q" in capsys.readouterr().err

    def test_dotted_overrides(self, tmp_path):
        p = write_config(tmp_path, out=tmp_path / "out")
        assert (
            main(
                [
                    "simulate",
                    "--config",
                    str(p),
                    "--grid.t_final",
                    "5e-8",
                    "--grid.dt",
                    "1e-9",
                ]
            )
            == 0
        )
        with open(tmp_path / "out" / "forward.csv") as fh:
            rows = sum(1 for _ in fh) - 1
        assert rows == 51


class TestSweepCommand:
    def test_requires_sweep_section(self, tmp_path, capsys):
        p = write_config(tmp_path, out=tmp_path / "out")
        assert main(["sweep", "--config", str(p)]) == 1
        assert "sweep" in capsys.readouterr().err

    def test_flag_built_sweep(self, tmp_path):
        p = write_config(
            tmp_path,
            CONFIG.replace('modes = ["forward"]', 'modes = ["weak_two_time"]'),
            out=tmp_path / "out",
        )
        code = main(
            [
                "sweep",
                "--config",
                str(p),
                "--sweep.parameter",
                "omega",
                "--sweep.start",
                "0.5",
                "--sweep.stop",
                "1.5",
                "--sweep.points",
                "2",
            ]
        )
        assert code == 0
        assert (tmp_path / "out" / "sweep_sigma_z.csv").exists()


class TestVoltageCommand:
    def test_default_scenario_with_small_grid(self, tmp_path):
        code = main(
            [
                "voltage",
                "--a",
                "2.0",
                "--out",
                str(tmp_path),
                "--grid.t_final",
                "1e-7",
                "--grid.dt",
                "1e-9",
            ]
        )
        assert code == 0
        assert (tmp_path / "voltage.csv").exists()


class TestJumpsCommand:
    def test_threshold_flag(self, tmp_path):
        code = main(
            [
                "jumps",
                "--threshold",
                "0.4",
                "--out",
                str(tmp_path),
                "--grid.t_final",
                "1e-7",
                "--grid.dt",
                "1e-9",
            ]
        )
        assert code == 0
        assert (tmp_path / "jumps.csv").exists()

    def test_bad_threshold_is_config_error(self, tmp_path):
        code = main(
            ["jumps", "--threshold", "1.5", "--out", str(tmp_path), "--grid.t_final", "1e-7"]
        )
        assert code == 1
