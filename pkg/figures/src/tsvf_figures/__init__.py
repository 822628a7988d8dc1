"""Publication-style figures from tsvf CSV data products."""

from .render import MissingColumnError, RenderResult, render
from .spec import FigureSpec, FigureSpecError, SeriesSpec, load_figure_spec

__version__ = "0.1.0"

__all__ = [
    "FigureSpec",
    "FigureSpecError",
    "MissingColumnError",
    "RenderResult",
    "SeriesSpec",
    "load_figure_spec",
    "render",
    "__version__",
]
