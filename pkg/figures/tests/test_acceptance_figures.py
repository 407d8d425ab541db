"""Acceptance check for the figures package (skippable add-on).

Run with `pytest figures/tests/test_acceptance.py -s` for the report line.
"""

import pytest

figures = pytest.importorskip("figures")
pytest.importorskip("matplotlib")

import numpy as np

from figures import FigureRecipe, SWEEP_HEADER, load_rows, pivot_text
from figures.render import build_figure


def synthetic_preset(fig_id):
    """Rows shaped like the corresponding sweep preset's grid."""
    rows = []

    def add(family, nq, nex, kog, value):
        per_ex = value / nex
        rows.append(
            f"{family},{nq},{nex},{kog:.12g},0,0,0,0,"
            f"{0.1 * value:.12g},{0.5 * value:.12g},{value:.12g},"
            f"{per_ex:.12g},0.5,ok"
        )

    if fig_id == "fig1":
        for family in ("product", "dicke"):
            for kog in (1.0, 20.0):
                for nq in range(1, 8):
                    for nex in range(1, nq + 1):
                        add(family, nq, nex, kog, 0.2 * nq * nex / kog + 0.01)
    elif fig_id == "fig2":
        for kog in (1.0, 2.0, 5.0, 20.0):
            for nq in range(1, 9):
                for nex in range(1, nq + 1):
                    add("dicke", nq, nex, kog, 0.3 * nq * nex)
    elif fig_id == "fig4":
        for kog in (0.25, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0):
            for nq in range(1, 8):
                add("product", nq, 1, kog, 1.0 / (nq + kog))
                add("dicke", nq, (nq + 1) // 2, kog, nq * kog * 0.05)
    return SWEEP_HEADER + "\n" + "\n".join(rows) + "\n"


def test_criterion_figures_pivots_and_reference_line(tmp_path):
    stable = True
    for fig_id in ("fig1", "fig2", "fig4"):
        path = tmp_path / f"{fig_id}.csv"
        path.write_text(synthetic_preset(fig_id))
        recipe = FigureRecipe(fig_id, (str(path),))
        texts = {pivot_text(recipe, load_rows(recipe)) for _ in range(3)}
        stable = stable and len(texts) == 1

    path = tmp_path / "fig2.csv"
    recipe = FigureRecipe("fig2", (str(path),))
    fig = build_figure(recipe, load_rows(recipe))
    has_line = any(
        np.asarray(line.get_ydata(), dtype=float).size
        and np.all(np.asarray(line.get_ydata(), dtype=float) == 1.0)
        for ax in fig.axes
        for line in ax.get_lines()
    )
    ok = stable and has_line
    line = (
        f"[{'PASS' if ok else 'FAIL'}] figures pivots: fig1/fig2/fig4 pivot"
        f" tables byte-stable ({stable}), fig2 unit reference line ({has_line})"
    )
    print(line)
    assert ok, line
