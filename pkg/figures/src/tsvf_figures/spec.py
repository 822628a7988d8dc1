"""Figure specifications: what to draw, from which CSV columns, to which files."""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

try:
    import tomllib
except ModuleNotFoundError:  # python < 3.11
    import tomli as tomllib

FIGURE_KINDS = ("timeseries", "heatmap", "bloch_plane")


class FigureSpecError(ValueError):
    """The figure specification itself is unusable."""


@dataclass
class SeriesSpec:
    """One curve of a timeseries figure."""

    csv: Path
    y: str
    x: str = "t_s"
    label: str = ""


@dataclass
class FigureSpec:
    kind: str
    output: Path  # base path; .png and .svg are appended
    title: str = ""
    xlabel: str | None = None
    ylabel: str | None = None
    xlim: tuple[float, float] | None = None
    ylim: tuple[float, float] | None = None
    series: list[SeriesSpec] = field(default_factory=list)  # timeseries
    csv: Path | None = None  # heatmap / bloch_plane
    value: str = "re"  # heatmap value column
    state_kinds: list[str] | None = None  # bloch_plane row filter

    def __post_init__(self):
        if self.kind not in FIGURE_KINDS:
            raise FigureSpecError(
                f"unknown figure kind {self.kind!r}; expected one of {FIGURE_KINDS}"
            )
        if self.kind == "timeseries" and not self.series:
            raise FigureSpecError("timeseries figures need at least one [[series]] entry")
        if self.kind in ("heatmap", "bloch_plane") and self.csv is None:
            raise FigureSpecError(f"{self.kind} figures need a csv path")

    @property
    def inputs(self) -> list[Path]:
        paths = [s.csv for s in self.series]
        if self.csv is not None:
            paths.append(self.csv)
        return paths


def _pair(value, what: str) -> tuple[float, float] | None:
    if value is None:
        return None
    if not isinstance(value, (list, tuple)) or len(value) != 2:
        raise FigureSpecError(f"{what}: expected a two-element [low, high] list")
    return (float(value[0]), float(value[1]))


def load_figure_spec(path: str | Path) -> FigureSpec:
    """Read a TOML figure spec; relative paths resolve against the spec file."""
    p = Path(path)
    try:
        with open(p, "rb") as fh:
            data = tomllib.load(fh)
    except FileNotFoundError:
        raise FigureSpecError(f"figure spec not found: {p}")
    except tomllib.TOMLDecodeError as exc:
        raise FigureSpecError(f"{p}: TOML parse error: {exc}")
    base = p.parent

    def resolve(raw) -> Path:
        q = Path(raw)
        return q if q.is_absolute() else base / q

    series = [
        SeriesSpec(
            csv=resolve(s["csv"]),
            y=str(s["y"]),
            x=str(s.get("x", "t_s")),
            label=str(s.get("label", "")),
        )
        for s in data.get("series", [])
    ]
    return FigureSpec(
        kind=str(data.get("kind", "")),
        output=resolve(data["output"]) if "output" in data else _missing("output"),
        title=str(data.get("title", "")),
        xlabel=data.get("xlabel"),
        ylabel=data.get("ylabel"),
        xlim=_pair(data.get("xlim"), "xlim"),
        ylim=_pair(data.get("ylim"), "ylim"),
        series=series,
        csv=resolve(data["csv"]) if "csv" in data else None,
        value=str(data.get("value", "re")),
        state_kinds=[str(k) for k in data["state_kinds"]] if "state_kinds" in data else None,
    )


def _missing(key: str):
    raise FigureSpecError(f"figure spec is missing required key {key!r}")
