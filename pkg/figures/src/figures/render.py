"""Matplotlib rendering of the sweep figures.

Images are rasterized at a fixed size and dpi for reproducibility; the
pivot tables from :mod:`figures.core` are the byte-comparable artifact,
the images are for humans.
"""

from __future__ import annotations

import math

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .core import (
    AXIS_LABELS,
    CROSSOVER_METRIC,
    FIGURE_METRIC,
    FigureRecipe,
    Panel,
    SweepRow,
    load_rows,
    pivot,
)

_HEATMAP_FIGS = {"fig1"}
_REFERENCE_LINE_FIGS = {"fig2", "fig5"}


def _panel_title(panel: Panel) -> str:
    return ", ".join(f"{name}={value}" for name, value in panel.key)


def _matrix(panel: Panel) -> np.ndarray:
    out = np.full((len(panel.row_values), len(panel.col_values)), np.nan)
    for i, r in enumerate(panel.row_values):
        for j, c in enumerate(panel.col_values):
            if (r, c) in panel.cells:
                out[i, j] = panel.cells[(r, c)]
    return out


def _grid(n_panels: int) -> tuple[int, int]:
    cols = min(n_panels, 2) or 1
    return math.ceil(n_panels / cols), cols


def _draw_heatmap(ax, panel: Panel, label: str) -> None:
    data = _matrix(panel)
    cmap = plt.get_cmap("viridis").copy()
    cmap.set_bad("lightgray")
    im = ax.imshow(
        np.ma.masked_invalid(data),
        origin="lower",
        aspect="auto",
        cmap=cmap,
        extent=(
            panel.col_values[0] - 0.5,
            panel.col_values[-1] + 0.5,
            panel.row_values[0] - 0.5,
            panel.row_values[-1] + 0.5,
        ),
    )
    # explicit gap markers on missing cells
    for i, r in enumerate(panel.row_values):
        for j, c in enumerate(panel.col_values):
            if np.isnan(data[i, j]):
                ax.plot(c, r, "x", color="red", markersize=8)
    ax.figure.colorbar(im, ax=ax, label=label)


def _draw_lines(ax, panel: Panel, figure_id: str) -> None:
    log_x = figure_id in ("fig4", "crossover")
    data = _matrix(panel)
    x = np.asarray(panel.col_values)
    row_label = AXIS_LABELS[figure_id][0]
    for i, r in enumerate(panel.row_values):
        ax.plot(x, data[i], marker="o", label=f"{row_label}={r:g}")
        for j in np.flatnonzero(np.isnan(data[i])):
            ax.plot(x[j], np.nanmean(data[i]), "x", color="red")
    if log_x:
        ax.set_xscale("log", base=2)
    if figure_id in _REFERENCE_LINE_FIGS:
        # independent-emitter baseline: per-excitation rate of one
        ax.axhline(1.0, color="black", linestyle="--", linewidth=1.0)
    ax.legend(fontsize=7)


def build_figure(recipe: FigureRecipe, rows: list[SweepRow]):
    """Assemble the matplotlib Figure for a recipe (not yet saved)."""
    fig_id = recipe.figure_id
    panels = pivot(fig_id, rows)
    nrows, ncols = _grid(len(panels))
    fig, axes = plt.subplots(
        nrows, ncols, figsize=recipe.size, squeeze=False, layout="constrained"
    )
    if fig_id in ("fig4", "crossover"):
        metric_label = " / ".join(
            f"{fam}: {m}" for fam, m in sorted(CROSSOVER_METRIC.items())
        )
    else:
        metric_label = FIGURE_METRIC[fig_id]
    row_label, col_label = AXIS_LABELS[fig_id]
    for ax, panel in zip(axes.flat, panels):
        if fig_id in _HEATMAP_FIGS:
            _draw_heatmap(ax, panel, metric_label)
            ax.set_ylabel(row_label)
        else:
            _draw_lines(ax, panel, fig_id)
            ax.set_ylabel(metric_label)
        ax.set_xlabel(col_label)
        ax.set_title(_panel_title(panel), fontsize=8)
    for ax in axes.flat[len(panels):]:
        ax.set_visible(False)
    fig.suptitle(fig_id)
    return fig


def render(recipe: FigureRecipe) -> str:
    """Read the input CSVs and write the image file; returns its path."""
    if recipe.output is None:
        raise ValueError("render needs an output path")
    rows = load_rows(recipe)
    fig = build_figure(recipe, rows)
    fig.savefig(recipe.output, dpi=recipe.dpi)
    plt.close(fig)
    return recipe.output
