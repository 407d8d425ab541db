"""Figure rendering for dickesim sweep CSVs."""

from .core import (
    DataError,
    FIGURE_IDS,
    FigureRecipe,
    SWEEP_HEADER,
    SweepRow,
    load_rows,
    pivot,
    pivot_text,
    read_sweep_csv,
)

__all__ = [
    "DataError",
    "FIGURE_IDS",
    "FigureRecipe",
    "SWEEP_HEADER",
    "SweepRow",
    "load_rows",
    "pivot",
    "pivot_text",
    "read_sweep_csv",
    "render",
]
__version__ = "0.1.0"


def render(recipe: FigureRecipe) -> str:
    # imported lazily so the data path works without matplotlib
    from .render import render as _render

    return _render(recipe)
