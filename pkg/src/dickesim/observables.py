"""Photon and qubit observables, exact rates, and figures of merit.

Rates are computed algebraically as trace(O * L[rho]) rather than by
finite-differencing the sampled series, so the maxima of dn_ph/dtau are
insensitive to the sampling grid. All rates are reported per unit tau,
which normalizes the single-qubit bad-cavity decay rate to one.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .states import BlockDensityMatrix


@dataclass
class ObservableSeries:
    """Sampled trajectory: tau grid, populations, and exact rates."""

    tau: np.ndarray
    n_ph: np.ndarray
    n_q: np.ndarray
    rate_n_ph: np.ndarray
    rate_n_q: np.ndarray
    early_stopped: bool = False

    def __post_init__(self):
        n = len(self.tau)
        for name in ("n_ph", "n_q", "rate_n_ph", "rate_n_q"):
            if len(getattr(self, name)) != n:
                raise ValueError(f"{name} not aligned with tau grid")


@dataclass
class RunMetrics:
    """The per-run figures of merit: maxima over tau of the photon number,
    its growth rate, and the qubit emission rate (total and per initial
    excitation)."""

    max_n_ph: float
    max_rate_n_ph: float
    max_emission_rate: float
    per_excitation_emission: float
    argmax_tau_n_ph: float
    argmax_tau_rate_n_ph: float
    argmax_tau_emission: float


def expectations(rho: BlockDensityMatrix) -> tuple[float, float]:
    """Mean photon number and mean total upper-state population."""
    from .hilbert import enumerate_sector

    n_ph = 0.0
    n_q = 0.0
    for n, block in enumerate(rho.blocks):
        basis = enumerate_sector(rho.n_qubits, n)
        diag = np.real(np.diagonal(block))
        n_ph += float(diag @ basis.photon_counts())
        n_q += float(diag @ basis.popcounts())
    return n_ph, n_q


def per_qubit_populations(rho: BlockDensityMatrix) -> np.ndarray:
    """<sigma_j^+ sigma_j^-> for each qubit j."""
    from .hilbert import enumerate_sector

    out = np.zeros(rho.n_qubits)
    for n, block in enumerate(rho.blocks):
        basis = enumerate_sector(rho.n_qubits, n)
        diag = np.real(np.diagonal(block))
        for j in range(rho.n_qubits):
            bits = np.array([mask >> j & 1 for mask, _ in basis.states], dtype=float)
            out[j] += float(diag @ bits)
    return out


def exact_rates(cache, rho: BlockDensityMatrix) -> tuple[float, float]:
    """(dn_ph/dtau, dn_q/dtau) via trace(O * L[rho]); no finite differences."""
    from .dynamics import apply_liouvillian

    drho = apply_liouvillian(cache, rho)
    dph, dq = expectations(drho)  # linear in rho, so reuse the diagonals
    return dph * cache.dt_dtau, dq * cache.dt_dtau


def _refine_max(tau: np.ndarray, vals: np.ndarray) -> tuple[float, float]:
    """Grid argmax refined by a parabola through the three nearest samples."""
    i = int(np.argmax(vals))
    if i == 0 or i == len(vals) - 1:
        return float(vals[i]), float(tau[i])
    t0, t1, t2 = tau[i - 1], tau[i], tau[i + 1]
    v0, v1, v2 = vals[i - 1], vals[i], vals[i + 1]
    denom = (t0 - t1) * (t0 - t2) * (t1 - t2)
    a = (t2 * (v1 - v0) + t1 * (v0 - v2) + t0 * (v2 - v1)) / denom
    b = (t2**2 * (v0 - v1) + t1**2 * (v2 - v0) + t0**2 * (v1 - v2)) / denom
    if a >= 0:  # degenerate/flat; keep the grid point
        return float(v1), float(t1)
    t_star = -b / (2 * a)
    if not (t0 <= t_star <= t2):
        return float(v1), float(t1)
    c = v1 - a * t1**2 - b * t1
    return float(a * t_star**2 + b * t_star + c), float(t_star)


def extract_metrics(series: ObservableSeries, n_excitations: int) -> RunMetrics:
    """Maxima over the sampled run, with local quadratic refinement."""
    if len(series.tau) == 0:
        raise ValueError("empty series")
    if n_excitations < 1:
        raise ValueError("n_excitations must be >= 1")
    max_nph, t_nph = _refine_max(series.tau, series.n_ph)
    max_rph, t_rph = _refine_max(series.tau, series.rate_n_ph)
    max_em, t_em = _refine_max(series.tau, -series.rate_n_q)
    return RunMetrics(
        max_n_ph=max(max_nph, 0.0),
        max_rate_n_ph=max(max_rph, 0.0),
        max_emission_rate=max(max_em, 0.0),
        per_excitation_emission=max(max_em, 0.0) / n_excitations,
        argmax_tau_n_ph=t_nph,
        argmax_tau_rate_n_ph=t_rph,
        argmax_tau_emission=t_em,
    )
