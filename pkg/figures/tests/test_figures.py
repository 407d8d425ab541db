"""CSV contract, pivot tables, and rendering for the figures package."""

import pytest

from figures import (
    DataError,
    FigureRecipe,
    SWEEP_HEADER,
    load_rows,
    pivot_text,
    read_sweep_csv,
)
from figures.cli import main


def make_row(
    family="dicke",
    n_qubits=1,
    n_excited=1,
    kappa_over_g=20.0,
    omega_spread=0.0,
    gamma=0.0,
    gamma_phi=0.0,
    seed=0,
    value=1.0,
    status="ok",
):
    metrics = ["", "", "", "", ""] if status != "ok" else [
        f"{0.1 * value:.12g}",
        f"{0.5 * value:.12g}",
        f"{value:.12g}",
        f"{value / n_excited:.12g}",
        "0.5",
    ]
    fields = [
        family,
        str(n_qubits),
        str(n_excited),
        f"{kappa_over_g:.12g}",
        f"{omega_spread:.12g}",
        f"{gamma:.12g}",
        f"{gamma_phi:.12g}",
        str(seed),
        *metrics,
        status,
    ]
    return ",".join(fields)


def write_csv(path, rows):
    path.write_text(SWEEP_HEADER + "\n" + "\n".join(rows) + "\n")
    return str(path)


def grid_rows(families=("dicke",), n_qubits=(1, 2, 3), kogs=(20.0,), skip=()):
    rows = []
    for family in families:
        for kog in kogs:
            for nq in n_qubits:
                for nex in range(1, nq + 1):
                    if (family, kog, nq, nex) in skip:
                        continue
                    value = 0.25 * nq * nex + 0.01 * kog
                    rows.append(
                        make_row(family, nq, nex, kog, value=value)
                    )
    return rows


def test_read_roundtrip(tmp_path):
    path = write_csv(tmp_path / "s.csv", grid_rows())
    rows = read_sweep_csv(path)
    assert len(rows) == 6
    assert rows[0].family == "dicke"
    assert rows[-1].n_excited == 3


def test_header_mismatch_is_hard_error(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("family,n_qubits\n" + "dicke,1\n")
    with pytest.raises(DataError):
        read_sweep_csv(str(path))


def test_empty_inputs_rejected(tmp_path):
    empty = tmp_path / "empty.csv"
    empty.write_text("")
    with pytest.raises(DataError):
        read_sweep_csv(str(empty))
    header_only = tmp_path / "header.csv"
    header_only.write_text(SWEEP_HEADER + "\n")
    with pytest.raises(DataError):
        read_sweep_csv(str(header_only))


def test_failed_rows_become_gaps_with_warning(tmp_path, capsys):
    rows = grid_rows() + [
        make_row("dicke", 4, 1, 20.0, status="failed"),
        make_row("dicke", 4, 2, 20.0, value=2.0),
    ]
    path = write_csv(tmp_path / "s.csv", rows)
    recipe = FigureRecipe("fig2", (path,))
    text = pivot_text(recipe, load_rows(recipe))
    assert "warning: missing point" in capsys.readouterr().err
    # the n_qubits=4 column exists but its n_excited=1 cell is empty
    line = [l for l in text.splitlines() if l.startswith("1,")][0]
    assert line.endswith(",")


def test_duplicate_grid_point_rejected(tmp_path):
    rows = grid_rows() + [grid_rows()[0]]
    path = write_csv(tmp_path / "s.csv", rows)
    recipe = FigureRecipe("fig1", (path,))
    with pytest.raises(DataError):
        pivot_text(recipe, load_rows(recipe))


def test_pivot_text_byte_stable(tmp_path):
    path = write_csv(tmp_path / "s.csv", grid_rows(kogs=(1.0, 20.0)))
    recipe = FigureRecipe("fig1", (path,))
    first = pivot_text(recipe, load_rows(recipe))
    second = pivot_text(recipe, load_rows(recipe))
    assert first == second
    assert first.startswith("# fig1 pivot\n")
    assert "## family=dicke kappa_over_g=1\n" in first


def test_crossover_pivot_axes(tmp_path):
    rows = []
    for family in ("product", "dicke"):
        for kog in (0.25, 1.0, 4.0):
            for nq in (1, 2):
                rows.append(make_row(family, nq, 1, kog, value=nq / kog))
    path = write_csv(tmp_path / "s.csv", rows)
    recipe = FigureRecipe("fig4", (path,))
    text = pivot_text(recipe, load_rows(recipe))
    assert "n_qubits\\kappa_over_g,0.25,1,4" in text


def test_cli_data_only_file_output(tmp_path):
    path = write_csv(tmp_path / "s.csv", grid_rows())
    out1, out2 = tmp_path / "p1.txt", tmp_path / "p2.txt"
    for out in (out1, out2):
        assert main(["fig2", "--in", str(path), "--data-only", "--out", str(out)]) == 0
    assert out1.read_bytes() == out2.read_bytes()
    assert b"\r" not in out1.read_bytes()


def test_cli_error_exit_code(tmp_path, capsys):
    missing = str(tmp_path / "nope.csv")
    assert main(["fig1", "--in", missing, "--out", str(tmp_path / "x.png")]) == 1
    assert "error:" in capsys.readouterr().err


def test_render_writes_image(tmp_path):
    pytest.importorskip("matplotlib")
    path = write_csv(tmp_path / "s.csv", grid_rows(kogs=(1.0, 20.0)))
    out = tmp_path / "fig1.png"
    assert main(["fig1", "--in", str(path), "--out", str(out)]) == 0
    assert out.read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"


def test_fig2_draws_unit_reference_line(tmp_path):
    pytest.importorskip("matplotlib")
    import numpy as np

    from figures.render import build_figure

    path = write_csv(tmp_path / "s.csv", grid_rows())
    recipe = FigureRecipe("fig2", (path,))
    fig = build_figure(recipe, load_rows(recipe))
    found = False
    for ax in fig.axes:
        for line in ax.get_lines():
            y = np.asarray(line.get_ydata(), dtype=float)
            if y.size and np.all(y == 1.0):
                found = True
    assert found
