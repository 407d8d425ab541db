"""Sweep-CSV contract, figure recipes, and pivot-table construction.

This package talks to the simulator only through its sweep CSV files; the
header below is the full interface contract and is checked verbatim.
"""

from __future__ import annotations

import csv
import sys
from dataclasses import dataclass, field

# exact header emitted by `dickesim sweep`; anything else is rejected
SWEEP_HEADER = (
    "family,n_qubits,n_excited,kappa_over_g,omega_spread,gamma,gamma_phi,"
    "seed,max_n_ph,max_rate_n_ph,max_emission_rate,per_excitation_emission,"
    "argmax_tau_n_ph,status"
)

FIGURE_IDS = ("fig1", "fig2", "fig3", "fig4", "fig5", "crossover")

# metric plotted by each single-metric figure
FIGURE_METRIC = {
    "fig1": "max_n_ph",
    "fig2": "per_excitation_emission",
    "fig3": "max_rate_n_ph",
    "fig5": "per_excitation_emission",
}

# the crossover figure tracks a different metric per state family
CROSSOVER_METRIC = {"product": "max_n_ph", "dicke": "max_rate_n_ph"}


class DataError(Exception):
    """Malformed, empty, or contract-violating input CSV."""


@dataclass(frozen=True)
class SweepRow:
    family: str
    n_qubits: int
    n_excited: int
    kappa_over_g: float
    omega_spread: float
    gamma: float
    gamma_phi: float
    seed: int
    max_n_ph: float | None
    max_rate_n_ph: float | None
    max_emission_rate: float | None
    per_excitation_emission: float | None
    argmax_tau_n_ph: float | None
    status: str


@dataclass(frozen=True)
class FigureRecipe:
    figure_id: str
    inputs: tuple[str, ...]
    output: str | None = None
    data_only: bool = False
    dpi: int = 150
    size: tuple[float, float] = (9.0, 6.0)
    options: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.figure_id not in FIGURE_IDS:
            raise DataError(f"unknown figure id {self.figure_id!r}")
        if not self.inputs:
            raise DataError("at least one input CSV is required")


def _float_or_none(text: str) -> float | None:
    return None if text == "" else float(text)


def read_sweep_csv(path: str) -> list[SweepRow]:
    """Parse one sweep CSV, enforcing the header contract exactly."""
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise DataError(f"{path}: empty file") from None
        if ",".join(header) != SWEEP_HEADER:
            raise DataError(
                f"{path}: header does not match the sweep CSV contract"
            )
        rows = []
        for lineno, rec in enumerate(reader, start=2):
            if len(rec) != len(header):
                raise DataError(f"{path}:{lineno}: wrong field count")
            try:
                rows.append(
                    SweepRow(
                        family=rec[0],
                        n_qubits=int(rec[1]),
                        n_excited=int(rec[2]),
                        kappa_over_g=float(rec[3]),
                        omega_spread=float(rec[4]),
                        gamma=float(rec[5]),
                        gamma_phi=float(rec[6]),
                        seed=int(rec[7]),
                        max_n_ph=_float_or_none(rec[8]),
                        max_rate_n_ph=_float_or_none(rec[9]),
                        max_emission_rate=_float_or_none(rec[10]),
                        per_excitation_emission=_float_or_none(rec[11]),
                        argmax_tau_n_ph=_float_or_none(rec[12]),
                        status=rec[13],
                    )
                )
            except ValueError as exc:
                raise DataError(f"{path}:{lineno}: {exc}") from None
    if not rows:
        raise DataError(f"{path}: no data rows")
    return rows


def load_rows(recipe: FigureRecipe) -> list[SweepRow]:
    rows: list[SweepRow] = []
    for path in recipe.inputs:
        rows.extend(read_sweep_csv(path))
    return rows


def _metric_for(figure_id: str, row: SweepRow) -> float | None:
    if figure_id in ("fig4", "crossover"):
        name = CROSSOVER_METRIC.get(row.family)
        if name is None:
            return None
    else:
        name = FIGURE_METRIC[figure_id]
    return getattr(row, name)


def _panel_key(figure_id: str, row: SweepRow) -> tuple:
    if figure_id in ("fig4", "crossover"):
        return (("family", row.family),)
    if figure_id == "fig5":
        return (
            ("family", row.family),
            ("omega_spread", row.omega_spread),
            ("seed", row.seed),
        )
    return (("family", row.family), ("kappa_over_g", row.kappa_over_g))


def _cell_key(figure_id: str, row: SweepRow) -> tuple[float, float]:
    # (row coordinate, column coordinate) of the pivot matrix
    if figure_id in ("fig4", "crossover"):
        return (row.n_qubits, row.kappa_over_g)
    return (row.n_excited, row.n_qubits)


AXIS_LABELS = {
    "fig1": ("n_excited", "n_qubits"),
    "fig2": ("n_excited", "n_qubits"),
    "fig3": ("n_excited", "n_qubits"),
    "fig4": ("n_qubits", "kappa_over_g"),
    "crossover": ("n_qubits", "kappa_over_g"),
    "fig5": ("n_excited", "n_qubits"),
}


@dataclass
class Panel:
    key: tuple
    row_values: list[float]
    col_values: list[float]
    cells: dict[tuple[float, float], float]


def pivot(figure_id: str, rows: list[SweepRow]) -> list[Panel]:
    """Group rows into per-panel matrices; failed rows become gaps."""
    grouped: dict[tuple, dict[tuple[float, float], float]] = {}
    for row in rows:
        value = _metric_for(figure_id, row)
        key = _panel_key(figure_id, row)
        cell = _cell_key(figure_id, row)
        panel = grouped.setdefault(key, {})
        if row.status != "ok" or value is None:
            print(
                f"warning: missing point {key} {cell} (status {row.status})",
                file=sys.stderr,
            )
            continue
        if cell in panel:
            raise DataError(f"duplicate grid point {key} {cell}")
        panel[cell] = value
    panels = []
    for key in sorted(grouped):
        cells = grouped[key]
        row_values = sorted({r for r, _ in cells})
        col_values = sorted({c for _, c in cells})
        panels.append(Panel(key, row_values, col_values, cells))
    return panels


def _fmt(x: float) -> str:
    return f"{x:.12g}"


def pivot_text(recipe: FigureRecipe, rows: list[SweepRow]) -> str:
    """Deterministic plain-text pivot tables, one section per panel."""
    fig = recipe.figure_id
    row_label, col_label = AXIS_LABELS[fig]
    lines = [f"# {fig} pivot"]
    for panel in pivot(fig, rows):
        tag = " ".join(f"{name}={_fmt(float(v)) if isinstance(v, (int, float)) else v}"
                       for name, v in panel.key)
        lines.append(f"## {tag}")
        lines.append(
            f"{row_label}\\{col_label}," + ",".join(_fmt(c) for c in panel.col_values)
        )
        for r in panel.row_values:
            cells = [
                _fmt(panel.cells[(r, c)]) if (r, c) in panel.cells else ""
                for c in panel.col_values
            ]
            lines.append(_fmt(r) + "," + ",".join(cells))
    return "\n".join(lines) + "\n"
