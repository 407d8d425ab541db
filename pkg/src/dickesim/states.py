"""Initial-state families and the sector-blocked density matrix container.

Two pure-state families live in the top excitation sector: product states
(particular qubits excited, no entanglement) and Dicke states (excitations
symmetrically shared, multipartite entangled). Both start with zero photons.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb, sqrt

import numpy as np

from .hilbert import SectorBasis, enumerate_sector


@dataclass(frozen=True)
class PureSectorState:
    """Normalized pure state supported on a single excitation sector."""

    n_qubits: int
    sector_n: int
    amplitudes: np.ndarray

    def __post_init__(self):
        norm = np.linalg.norm(self.amplitudes)
        if abs(norm - 1.0) > 1e-12:
            raise ValueError(f"state not normalized: |psi| = {norm}")


@dataclass
class BlockDensityMatrix:
    """Density matrix stored as one Hermitian block per excitation sector.

    blocks[N] is the block over SectorBasis(N) for N = 0..n_excitations.
    Evolution from a sector-diagonal initial state never creates coherence
    between sectors, so this storage is exact.
    """

    n_qubits: int
    n_excitations: int
    blocks: list[np.ndarray]

    def trace(self) -> float:
        return float(sum(np.trace(b).real for b in self.blocks))

    def copy(self) -> "BlockDensityMatrix":
        return BlockDensityMatrix(
            self.n_qubits, self.n_excitations, [b.copy() for b in self.blocks]
        )


def _check_counts(n_qubits: int, n_excited: int) -> None:
    if n_excited < 1:
        raise ValueError("need at least one initial excitation")
    if n_excited > n_qubits:
        raise ValueError(f"cannot excite {n_excited} of {n_qubits} qubits")


def product_state(
    n_qubits: int, n_excited: int, mask: int | None = None
) -> PureSectorState:
    """Nonsymmetric state with particular qubits excited, zero photons.

    By default the n_excited highest-index qubits are excited; an explicit
    bitmask overrides that (only relevant under frequency disorder).
    """
    _check_counts(n_qubits, n_excited)
    if mask is None:
        mask = ((1 << n_excited) - 1) << (n_qubits - n_excited)
    if mask.bit_count() != n_excited:
        raise ValueError("mask popcount must equal n_excited")
    if mask >> n_qubits:
        raise ValueError("mask has bits beyond n_qubits")
    basis = enumerate_sector(n_qubits, n_excited)
    amp = np.zeros(basis.dim, dtype=complex)
    amp[basis.index_of[(mask, 0)]] = 1.0
    return PureSectorState(n_qubits, n_excited, amp)


def dicke_state(n_qubits: int, n_excited: int) -> PureSectorState:
    """Symmetric (Dicke) state: equal weight on every way of placing
    n_excited excitations among n_qubits qubits, zero photons."""
    _check_counts(n_qubits, n_excited)
    basis = enumerate_sector(n_qubits, n_excited)
    amp = np.zeros(basis.dim, dtype=complex)
    w = 1.0 / sqrt(comb(n_qubits, n_excited))
    for i, (mask, p) in enumerate(basis.states):
        if p == 0 and mask.bit_count() == n_excited:
            amp[i] = w
    return PureSectorState(n_qubits, n_excited, amp)


def to_density(state: PureSectorState) -> BlockDensityMatrix:
    """Lift a pure sector state to a block density matrix with all lower
    sectors empty."""
    n_ex = state.sector_n
    blocks = []
    for n in range(n_ex + 1):
        dim = enumerate_sector(state.n_qubits, n).dim
        blocks.append(np.zeros((dim, dim), dtype=complex))
    blocks[n_ex] = np.outer(state.amplitudes, state.amplitudes.conj())
    return BlockDensityMatrix(state.n_qubits, n_ex, blocks)


def vacuum_density(n_qubits: int, n_excitations: int) -> BlockDensityMatrix:
    """All weight on the zero-excitation state; used for CLI edge cases."""
    blocks = []
    for n in range(n_excitations + 1):
        dim = enumerate_sector(n_qubits, n).dim
        blocks.append(np.zeros((dim, dim), dtype=complex))
    blocks[0][0, 0] = 1.0
    return BlockDensityMatrix(n_qubits, n_excitations, blocks)
