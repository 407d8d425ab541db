"""Basis enumeration and operator-block construction checks."""

from math import comb, sqrt

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dickesim.dynamics import dense_hamiltonian
from dickesim.hilbert import (
    SystemParams,
    build_dephasing,
    build_hamiltonian,
    build_lowering,
    enumerate_sector,
)


def test_enumerate_two_qubits_one_excitation():
    basis = enumerate_sector(2, 1)
    assert set(basis.states) == {(0b01, 0), (0b10, 0), (0b00, 1)}
    assert basis.dim == 3


def test_enumerate_dimension_8_4():
    assert enumerate_sector(8, 4).dim == 163  # 1 + 8 + 28 + 56 + 70


def test_enumerate_vacuum_sector():
    basis = enumerate_sector(1, 0)
    assert basis.states == ((0, 0),)


@given(n_qubits=st.integers(1, 6), sector_n=st.integers(0, 8))
@settings(max_examples=60)
def test_enumerate_dimension_formula_and_ordering(n_qubits, sector_n):
    basis = enumerate_sector(n_qubits, sector_n)
    expected = sum(
        comb(n_qubits, k) for k in range(min(sector_n, n_qubits) + 1)
    )
    assert basis.dim == expected
    masks = [m for m, _ in basis.states]
    assert masks == sorted(masks)
    assert len(set(basis.states)) == basis.dim
    for mask, p in basis.states:
        assert mask.bit_count() + p == sector_n


def test_params_validation():
    with pytest.raises(ValueError):
        SystemParams(n_qubits=0)
    with pytest.raises(ValueError):
        SystemParams(n_qubits=1, g=-0.1)
    with pytest.raises(ValueError):
        SystemParams(n_qubits=1, kappa=-1.0)
    with pytest.raises(ValueError):
        SystemParams(n_qubits=2, epsilons=(1.0, 2.5))
    with pytest.raises(ValueError):
        SystemParams(n_qubits=13)


def test_single_qubit_jaynes_cummings_block():
    params = SystemParams(n_qubits=1, g=0.012)
    h = build_hamiltonian(params, 1, rotating_frame=False).to_array()
    np.testing.assert_allclose(h, [[1.0, 0.012], [0.012, 1.0]], atol=1e-15)


def test_rotating_frame_shifts_diagonal_only():
    params = SystemParams(n_qubits=2, g=0.05, epsilons=(0.98, 1.03))
    for n in range(3):
        lab = build_hamiltonian(params, n, rotating_frame=False).to_array()
        rot = build_hamiltonian(params, n, rotating_frame=True).to_array()
        np.testing.assert_allclose(lab - rot, np.eye(lab.shape[0]) * n, atol=1e-14)


def test_coupling_scales_linearly_with_g():
    diag_a = build_hamiltonian(SystemParams(n_qubits=3, g=0.01), 2).to_array()
    diag_b = build_hamiltonian(SystemParams(n_qubits=3, g=0.02), 2).to_array()
    off_a = diag_a - np.diag(np.diag(diag_a))
    off_b = diag_b - np.diag(np.diag(diag_b))
    np.testing.assert_allclose(2 * off_a, off_b, atol=1e-15)
    np.testing.assert_allclose(np.diag(diag_a), np.diag(diag_b), atol=1e-15)


def test_bosonic_matrix_elements_sector_two():
    g = 0.012
    params = SystemParams(n_qubits=2, g=g)
    basis = enumerate_sector(2, 2)
    h = build_hamiltonian(params, 2).to_array()
    i_qq = basis.index_of[(0b11, 0)]
    i_q_ph = basis.index_of[(0b01, 1)]
    i_phph = basis.index_of[(0b00, 2)]
    assert h[i_qq, i_q_ph] == pytest.approx(g * sqrt(1))
    assert h[i_phph, i_q_ph] == pytest.approx(g * sqrt(2))


def test_hamiltonian_hermitian_all_sectors():
    params = SystemParams(n_qubits=4, g=0.012, epsilons=(0.9, 1.0, 1.1, 1.05))
    for n in range(5):
        h = build_hamiltonian(params, n).to_array()
        assert np.abs(h - h.conj().T).max() < 1e-14


@pytest.mark.parametrize("n_qubits,sector_n", [(1, 1), (2, 2), (3, 2), (3, 3)])
def test_block_matches_dense_kronecker(n_qubits, sector_n):
    """Index-by-index equality against the full Kronecker-product build."""
    eps = tuple(1.0 + 0.01 * j for j in range(n_qubits))
    params = SystemParams(n_qubits=n_qubits, g=0.03, epsilons=eps)
    cutoff = sector_n
    dense = dense_hamiltonian(params, cutoff, rotating_frame=False)
    basis = enumerate_sector(n_qubits, sector_n)
    idx = [mask * (cutoff + 1) + p for mask, p in basis.states]
    block = build_hamiltonian(params, sector_n, rotating_frame=False).to_array()
    # entries agree to the last bits (summation order differs between the
    # two construction paths); off-sector entries are exactly zero
    np.testing.assert_allclose(dense[np.ix_(idx, idx)], block, atol=1e-14)
    # no matrix elements out of the sector
    other = sorted(set(range(dense.shape[0])) - set(idx))
    assert np.abs(dense[np.ix_(other, idx)]).max() == 0.0


def test_photon_lowering_amplitude():
    params = SystemParams(n_qubits=2, g=0.012)
    op = build_lowering(params, "photon", 2).to_array()
    src = enumerate_sector(2, 2)
    tgt = enumerate_sector(2, 1)
    i = src.index_of[(0b00, 2)]
    j = tgt.index_of[(0b00, 1)]
    assert op[j, i] == pytest.approx(sqrt(2))


def test_qubit_lowering_selects_set_bit():
    params = SystemParams(n_qubits=2, g=0.012)
    op = build_lowering(params, 0, 1).to_array()
    src = enumerate_sector(2, 1)
    tgt = enumerate_sector(2, 0)
    assert op[tgt.index_of[(0b00, 0)], src.index_of[(0b01, 0)]] == 1.0
    assert op[:, src.index_of[(0b10, 0)]].sum() == 0.0


@pytest.mark.parametrize("sector_n", [1, 2, 3])
def test_number_operator_from_lowering(sector_n):
    params = SystemParams(n_qubits=3, g=0.012)
    a = build_lowering(params, "photon", sector_n).to_array()
    n_op = a.conj().T @ a
    basis = enumerate_sector(3, sector_n)
    np.testing.assert_allclose(n_op, np.diag(basis.photon_counts()), atol=1e-14)


def test_dephasing_signs_and_involution():
    z = build_dephasing(2, 0, 1).to_array()
    basis = enumerate_sector(2, 1)
    assert z[basis.index_of[(0b01, 0)], basis.index_of[(0b01, 0)]] == 1.0
    assert z[basis.index_of[(0b00, 1)], basis.index_of[(0b00, 1)]] == -1.0
    for j in range(2):
        for n in range(3):
            zz = build_dephasing(2, j, n).to_array()
            np.testing.assert_array_equal(zz @ zz, np.eye(zz.shape[0]))
