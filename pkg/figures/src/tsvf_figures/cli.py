"""Figure CLI: render TOML specs or a one-off figure from flags."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .render import MissingColumnError, render
from .spec import FigureSpec, FigureSpecError, SeriesSpec, load_figure_spec


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tsvf-fig", description="Render figures from tsvf CSV outputs."
    )
    parser.add_argument("specs", nargs="*", help="TOML figure spec files")
    parser.add_argument("--kind", choices=("timeseries", "heatmap", "bloch_plane"))
    parser.add_argument("--csv", help="input CSV (all kinds; repeat --y for curves)")
    parser.add_argument("--y", action="append", default=[], help="timeseries y column")
    parser.add_argument("--x", default="t_s", help="timeseries x column")
    parser.add_argument("--value", default="re", help="heatmap value column")
    parser.add_argument("--state-kinds", help="comma-separated bloch_plane kinds")
    parser.add_argument("--output", help="output base path (.png/.svg appended)")
    parser.add_argument("--title", default="")
    return parser


def _spec_from_flags(args: argparse.Namespace) -> FigureSpec:
    if not args.kind or not args.csv or not args.output:
        raise FigureSpecError("flag mode needs --kind, --csv, and --output")
    series = [SeriesSpec(csv=Path(args.csv), y=y, x=args.x) for y in args.y]
    return FigureSpec(
        kind=args.kind,
        output=Path(args.output),
        title=args.title,
        series=series,
        csv=None if args.kind == "timeseries" else Path(args.csv),
        value=args.value,
        state_kinds=args.state_kinds.split(",") if args.state_kinds else None,
    )


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        specs = [load_figure_spec(p) for p in args.specs]
        if args.kind or not specs:
            specs.append(_spec_from_flags(args))
        for spec in specs:
            result = render(spec)
            for path in result.files:
                print(path)
    except (FigureSpecError, MissingColumnError) as exc:
        print(f"figure error: {exc}", file=sys.stderr)
        return 1
    except (ValueError, OSError) as exc:
        print(f"render error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
