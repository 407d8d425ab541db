"""Excitation-number sectors and block operators for qubits coupled to one cavity mode.

The RWA Hamiltonian conserves the total excitation number (excited qubits plus
photons), so the Hilbert space splits into sectors labelled by that number.
Every operator needed by the master equation is either block-diagonal in the
sectors (Hamiltonian, sigma_z) or lowers the sector by one (a, sigma_minus).
Operators are assembled once per (params, sector) as coordinate lists and
cached; the dynamics layer turns them into dense arrays.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from math import comb, sqrt

import numpy as np

MAX_QUBITS_DEFAULT = 12


@dataclass(frozen=True)
class SystemParams:
    """All physical rates and frequencies, in units where omega = 1.

    epsilons are the individual qubit transition frequencies; homogeneous
    systems have them all equal to omega. Rates: cavity decay kappa, qubit
    energy relaxation gamma, pure dephasing gamma_phi.
    """

    n_qubits: int
    g: float = 0.012
    omega: float = 1.0
    epsilons: tuple[float, ...] | None = None
    kappa: float = 0.0
    gamma: float = 0.0
    gamma_phi: float = 0.0
    max_qubits: int = MAX_QUBITS_DEFAULT

    def __post_init__(self):
        if self.n_qubits < 1:
            raise ValueError("n_qubits must be >= 1")
        if self.n_qubits > self.max_qubits:
            raise ValueError(
                f"n_qubits={self.n_qubits} exceeds cap {self.max_qubits}"
            )
        if self.g <= 0:
            raise ValueError("coupling g must be positive")
        for name in ("kappa", "gamma", "gamma_phi"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be >= 0")
        if self.epsilons is None:
            object.__setattr__(self, "epsilons", (self.omega,) * self.n_qubits)
        else:
            object.__setattr__(self, "epsilons", tuple(float(e) for e in self.epsilons))
        if len(self.epsilons) != self.n_qubits:
            raise ValueError("epsilons must have one entry per qubit")
        for e in self.epsilons:
            if not (0.0 < e < 2.0 * self.omega):
                raise ValueError(f"qubit frequency {e} outside (0, 2*omega)")


@dataclass(frozen=True)
class SectorBasis:
    """Ordered basis of one total-excitation sector.

    Each basis state is (qubit_bitmask, photon_count) with
    popcount(bitmask) + photon_count == sector_n. Ordering is ascending
    bitmask (photon count implied), which keeps every downstream artifact
    deterministic.
    """

    n_qubits: int
    sector_n: int
    states: tuple[tuple[int, int], ...]
    index_of: dict[tuple[int, int], int] = field(compare=False, hash=False)

    @property
    def dim(self) -> int:
        return len(self.states)

    def photon_counts(self) -> np.ndarray:
        return np.array([p for _, p in self.states], dtype=float)

    def popcounts(self) -> np.ndarray:
        return np.array([m.bit_count() for m, _ in self.states], dtype=float)


@lru_cache(maxsize=None)
def enumerate_sector(n_qubits: int, sector_n: int) -> SectorBasis:
    """Enumerate the basis of the sector with total excitation number sector_n."""
    if n_qubits < 1:
        raise ValueError("n_qubits must be >= 1")
    if sector_n < 0:
        raise ValueError("sector_n must be >= 0")
    states = []
    for mask in range(1 << n_qubits):
        k = mask.bit_count()
        if k <= sector_n:
            states.append((mask, sector_n - k))
    states = tuple(states)
    expected = sum(comb(n_qubits, k) for k in range(min(sector_n, n_qubits) + 1))
    assert len(states) == expected
    return SectorBasis(
        n_qubits=n_qubits,
        sector_n=sector_n,
        states=states,
        index_of={s: i for i, s in enumerate(states)},
    )


@dataclass(frozen=True)
class SparseBlockOperator:
    """One operator block in coordinate-list form.

    source_sector == target_sector for within-sector blocks (Hamiltonian,
    dephasing); lowering operators map sector N to N-1.
    """

    source_sector: int
    target_sector: int
    shape: tuple[int, int]
    rows: tuple[int, ...]
    cols: tuple[int, ...]
    vals: tuple[complex, ...]

    def to_array(self) -> np.ndarray:
        out = np.zeros(self.shape, dtype=complex)
        for r, c, v in zip(self.rows, self.cols, self.vals):
            out[r, c] += v
        return out


def build_hamiltonian(
    params: SystemParams, sector_n: int, rotating_frame: bool = True
) -> SparseBlockOperator:
    """Within-sector RWA Hamiltonian block.

    Diagonal: sum of epsilon_j over excited qubits plus omega * photons.
    Off-diagonal: g * sqrt(photons + 1) between states connected by one
    qubit flip-down / photon-up. In the rotating frame (default) omega *
    sector_n is subtracted from the diagonal, which is exact for photon and
    qubit populations and removes the fast phase at the cavity frequency.
    """
    basis = enumerate_sector(params.n_qubits, sector_n)
    rows, cols, vals = [], [], []
    for i, (mask, p) in enumerate(basis.states):
        diag = sum(params.epsilons[j] for j in range(params.n_qubits) if mask >> j & 1)
        diag += params.omega * p
        if rotating_frame:
            diag -= params.omega * sector_n
        rows.append(i)
        cols.append(i)
        vals.append(complex(diag))
        # couple (.. bit j set .., p) <-> (.. bit j clear .., p+1)
        for j in range(params.n_qubits):
            if mask >> j & 1:
                partner = basis.index_of[(mask & ~(1 << j), p + 1)]
                amp = complex(params.g * sqrt(p + 1))
                rows.extend((i, partner))
                cols.extend((partner, i))
                vals.extend((amp, amp))
    return SparseBlockOperator(
        source_sector=sector_n,
        target_sector=sector_n,
        shape=(basis.dim, basis.dim),
        rows=tuple(rows),
        cols=tuple(cols),
        vals=tuple(vals),
    )


def build_lowering(
    params: SystemParams, which: str | int, sector_n: int
) -> SparseBlockOperator:
    """Lowering operator block from sector_n to sector_n - 1.

    which = "photon" gives the cavity annihilation operator (amplitude
    sqrt(photons)); an integer j gives sigma_minus of qubit j (amplitude 1
    on states with bit j set).
    """
    if sector_n < 1:
        raise ValueError("lowering requires sector_n >= 1")
    src = enumerate_sector(params.n_qubits, sector_n)
    tgt = enumerate_sector(params.n_qubits, sector_n - 1)
    rows, cols, vals = [], [], []
    for i, (mask, p) in enumerate(src.states):
        if which == "photon":
            if p >= 1:
                rows.append(tgt.index_of[(mask, p - 1)])
                cols.append(i)
                vals.append(complex(sqrt(p)))
        else:
            j = int(which)
            if not 0 <= j < params.n_qubits:
                raise ValueError(f"qubit index {j} out of range")
            if mask >> j & 1:
                rows.append(tgt.index_of[(mask & ~(1 << j), p)])
                cols.append(i)
                vals.append(complex(1.0))
    return SparseBlockOperator(
        source_sector=sector_n,
        target_sector=sector_n - 1,
        shape=(tgt.dim, src.dim),
        rows=tuple(rows),
        cols=tuple(cols),
        vals=tuple(vals),
    )


def build_dephasing(n_qubits: int, j: int, sector_n: int) -> SparseBlockOperator:
    """Diagonal sigma_z block for qubit j: +1 on excited bit, -1 on ground."""
    if not 0 <= j < n_qubits:
        raise ValueError(f"qubit index {j} out of range")
    basis = enumerate_sector(n_qubits, sector_n)
    rows = tuple(range(basis.dim))
    vals = tuple(
        complex(1.0 if mask >> j & 1 else -1.0) for mask, _ in basis.states
    )
    return SparseBlockOperator(
        source_sector=sector_n,
        target_sector=sector_n,
        shape=(basis.dim, basis.dim),
        rows=rows,
        cols=rows,
        vals=vals,
    )
