"""Render figure specs from CSV data products.

Time axes are drawn in microseconds and frequency axes in the user-facing
MHz / kHz conventions.  Samples flagged diverged become gaps: masked cells in
heatmaps, NaN breaks in curves.  Interpolating across a weak-value pole would
fabricate data, so it is never done.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np
import pandas as pd

from .spec import FigureSpec, FigureSpecError

DPI = 150
TIMESERIES_FIGSIZE = (6.4, 4.8)
BLOCH_PANEL_WIDTH = 3.2

SWEEP_COLUMNS = ["param_name", "param_value", "t_s", "re", "im", "diverged"]
BLOCH_COLUMNS = ["t_s", "x", "y", "z", "state_kind"]

PARAM_AXIS_LABELS = {
    "omega": "drive frequency (MHz)",
    "k": "damping rate (kHz)",
}


class MissingColumnError(KeyError):
    """A referenced CSV column does not exist."""


@dataclass
class RenderResult:
    files: list[Path]
    data_cells: int


def _load_csv(path: Path) -> pd.DataFrame:
    try:
        df = pd.read_csv(path)
    except pd.errors.EmptyDataError:
        raise ValueError(f"{path}: empty file, nothing to draw")
    if len(df) == 0:
        raise ValueError(f"{path}: no data rows, nothing to draw")
    return df


def _require_columns(df: pd.DataFrame, cols: list[str], path: Path) -> None:
    missing = [c for c in cols if c not in df.columns]
    if missing:
        raise MissingColumnError(
            f"{path}: missing column(s) {', '.join(missing)}; "
            f"available: {', '.join(df.columns)}"
        )


def _diverged_mask(df: pd.DataFrame, y_column: str) -> np.ndarray:
    """Mask from the diverged_<name> column matching re_<name> / im_<name>."""
    for prefix in ("re_", "im_"):
        if y_column.startswith(prefix):
            flag = "diverged_" + y_column[len(prefix):]
            if flag in df.columns:
                return df[flag].to_numpy() != 0
    return np.zeros(len(df), dtype=bool)


def _save(fig, output: Path) -> list[Path]:
    output.parent.mkdir(parents=True, exist_ok=True)
    files = []
    for suffix in (".png", ".svg"):
        target = output.with_suffix(suffix)
        fig.savefig(target, dpi=DPI)
        files.append(target)
    plt.close(fig)
    return files


def _render_timeseries(spec: FigureSpec) -> RenderResult:
    fig, ax = plt.subplots(figsize=TIMESERIES_FIGSIZE, dpi=DPI)
    points = 0
    for s in spec.series:
        df = _load_csv(s.csv)
        _require_columns(df, [s.x, s.y], s.csv)
        x = df[s.x].to_numpy(dtype=float)
        y = df[s.y].to_numpy(dtype=float).copy()
        y[_diverged_mask(df, s.y)] = np.nan
        if s.x == "t_s":
            x = x * 1e6
        ax.plot(x, y, label=s.label or s.y, linewidth=1.0)
        points += int(np.isfinite(y).sum())
    ax.set_xlabel(spec.xlabel or ("t (µs)" if spec.series[0].x == "t_s" else spec.series[0].x))
    ax.set_ylabel(spec.ylabel or "signal")
    if spec.title:
        ax.set_title(spec.title)
    if spec.xlim:
        ax.set_xlim(*spec.xlim)
    if spec.ylim:
        ax.set_ylim(*spec.ylim)
    ax.legend(loc="best", fontsize=8)
    fig.tight_layout()
    return RenderResult(files=_save(fig, spec.output), data_cells=points)


def _render_heatmap(spec: FigureSpec) -> RenderResult:
    df = _load_csv(spec.csv)
    _require_columns(df, SWEEP_COLUMNS, spec.csv)
    if spec.value not in df.columns:
        raise MissingColumnError(f"{spec.csv}: missing column(s) {spec.value}")
    values = df[spec.value].astype(float).where(df["diverged"] == 0, np.nan)
    table = df.assign(_v=values).pivot(index="param_value", columns="t_s", values="_v")
    grid = np.ma.masked_invalid(table.to_numpy())
    vmax = float(np.abs(grid).max()) or 1.0

    fig, ax = plt.subplots(figsize=TIMESERIES_FIGSIZE, dpi=DPI)
    mesh = ax.pcolormesh(
        table.columns.to_numpy(dtype=float) * 1e6,
        table.index.to_numpy(dtype=float),
        grid,
        cmap="RdBu_r",
        vmin=-vmax,
        vmax=vmax,
        shading="nearest",
    )
    fig.colorbar(mesh, ax=ax)
    param = str(df["param_name"].iloc[0])
    ax.set_xlabel(spec.xlabel or "t (µs)")
    ax.set_ylabel(spec.ylabel or PARAM_AXIS_LABELS.get(param, param))
    if spec.title:
        ax.set_title(spec.title)
    fig.tight_layout()
    return RenderResult(files=_save(fig, spec.output), data_cells=int(grid.size))


def _render_bloch_plane(spec: FigureSpec) -> RenderResult:
    df = _load_csv(spec.csv)
    _require_columns(df, BLOCH_COLUMNS, spec.csv)
    kinds = spec.state_kinds or list(dict.fromkeys(df["state_kind"]))
    absent = [k for k in kinds if k not in set(df["state_kind"])]
    if absent:
        raise ValueError(f"{spec.csv}: no rows with state_kind {', '.join(absent)}")
    fig, axes = plt.subplots(
        1,
        len(kinds),
        figsize=(BLOCH_PANEL_WIDTH * len(kinds), 3.4),
        dpi=DPI,
        squeeze=False,
    )
    points = 0
    theta = np.linspace(0, 2 * np.pi, 256)
    for ax, kind in zip(axes[0], kinds):
        part = df[df["state_kind"] == kind]
        ax.plot(np.cos(theta), np.sin(theta), color="0.8", linewidth=0.8)
        ax.plot(part["x"].to_numpy(), part["z"].to_numpy(), linewidth=0.9)
        start = part.iloc[0]
        ax.plot([start["x"]], [start["z"]], marker="o", markersize=3)
        ax.set_xlim(-1.1, 1.1)
        ax.set_ylim(-1.1, 1.1)
        ax.set_aspect("equal")
        ax.set_xlabel("x")
        ax.set_ylabel("z")
        ax.set_title(kind, fontsize=9)
        points += len(part)
    if spec.title:
        fig.suptitle(spec.title)
    fig.tight_layout()
    return RenderResult(files=_save(fig, spec.output), data_cells=points)


def render(spec: FigureSpec) -> RenderResult:
    """Draw one figure spec to PNG and SVG; returns the files and cell count."""
    if spec.kind == "timeseries":
        return _render_timeseries(spec)
    if spec.kind == "heatmap":
        return _render_heatmap(spec)
    if spec.kind == "bloch_plane":
        return _render_bloch_plane(spec)
    raise FigureSpecError(f"unknown figure kind {spec.kind!r}")
