"""Lindblad evolution of the sector-blocked density matrix.

The generator acts block-by-block: unitary commutator and anticommutator
decay within each sector, quantum-jump feed-down from the sector above.
Integration uses scipy's embedded Runge-Kutta 5(4) stepper on the packed
block vector, with trace conservation asserted at every accepted step.

Time bookkeeping: integration runs in physical time t (omega = 1 units);
sampling and reporting use the dimensionless tau = 4 t g^2 / kappa, the
single-qubit bad-cavity decay time. For kappa = 0 runs tau falls back to t.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy import sparse
from scipy.integrate import RK45

from .hilbert import (
    SystemParams,
    build_dephasing,
    build_hamiltonian,
    build_lowering,
    enumerate_sector,
)
from .observables import ObservableSeries
from .states import BlockDensityMatrix

TRACE_TOL = 1e-9
HERMITICITY_TOL = 1e-10
POSITIVITY_TOL = 1e-8


class IntegrationError(RuntimeError):
    """Integration could not continue; carries the last good tau."""

    def __init__(self, message: str, last_tau: float):
        super().__init__(f"{message} (last good tau = {last_tau:.6g})")
        self.last_tau = last_tau


class ConservationError(IntegrationError):
    """Trace, Hermiticity, or positivity drifted beyond tolerance."""


@dataclass
class IntegratorConfig:
    # one decade tighter than strictly needed for the observables so that
    # integration error never trips the positivity/trace guards
    rel_tol: float = 1e-9
    abs_tol: float = 1e-11
    tau_max: float = 10.0
    initial_step: float | None = None  # in tau units
    max_step: float = np.inf  # in tau units
    early_stop_threshold: float | None = None  # on total excitation
    sample_dtau: float = 0.005

    def __post_init__(self):
        if self.rel_tol <= 0 or self.abs_tol <= 0:
            raise ValueError("tolerances must be positive")
        if self.tau_max <= 0:
            raise ValueError("tau_max must be positive")


class LiouvillianCache:
    """Dense per-sector operator blocks plus packing metadata.

    Immutable after construction; safe to share read-only across workers.
    Rebuilding with identical params yields bit-identical arrays.
    """

    def __init__(
        self,
        params: SystemParams,
        n_excitations: int,
        rotating_frame: bool = True,
    ):
        if n_excitations < 0:
            raise ValueError("n_excitations must be >= 0")
        self.params = params
        self.n_excitations = n_excitations
        self.rotating_frame = rotating_frame
        nq = params.n_qubits

        self.bases = [enumerate_sector(nq, n) for n in range(n_excitations + 1)]
        self.dims = [b.dim for b in self.bases]
        self.hamiltonians = [
            build_hamiltonian(params, n, rotating_frame).to_array()
            for n in range(n_excitations + 1)
        ]
        self._h_sparse = [sparse.csr_matrix(h) for h in self.hamiltonians]
        # lowering blocks, indexed by source sector (>= 1)
        self.photon_lowering = {
            n: build_lowering(params, "photon", n).to_array()
            for n in range(1, n_excitations + 1)
        }
        self.qubit_lowerings = {
            n: [build_lowering(params, j, n).to_array() for j in range(nq)]
            for n in range(1, n_excitations + 1)
        }
        # jump feed-down as index gathers: every lowering operator here has
        # at most one entry per column, so L rho L^dag is a weighted
        # submatrix of rho
        self._ph_gather = {}
        self._qb_gather = {}
        for n in range(1, n_excitations + 1):
            op = build_lowering(params, "photon", n)
            src = np.array(op.cols, dtype=np.intp)
            tgt = np.array(op.rows, dtype=np.intp)
            w = np.array(op.vals, dtype=complex).real
            self._ph_gather[n] = (src, tgt, np.outer(w, w))
            per_qubit = []
            for j in range(nq):
                opj = build_lowering(params, j, n)
                per_qubit.append(
                    (np.array(opj.cols, dtype=np.intp),
                     np.array(opj.rows, dtype=np.intp))
                )
            self._qb_gather[n] = per_qubit
        # sum_c L_c^dag L_c is diagonal in this basis
        self.decay_diag = [
            params.kappa * b.photon_counts() + params.gamma * b.popcounts()
            for b in self.bases
        ]
        self.nph_diag = [b.photon_counts() for b in self.bases]
        self.nq_diag = [b.popcounts() for b in self.bases]
        if params.gamma_phi > 0:
            self.dephasing_mask = []
            for n in range(n_excitations + 1):
                zs = [
                    np.real(build_dephasing(nq, j, n).to_array().diagonal())
                    for j in range(nq)
                ]
                m = sum(np.outer(z, z) for z in zs) - nq
                self.dephasing_mask.append(params.gamma_phi * m)
        else:
            self.dephasing_mask = None

        self.offsets = np.concatenate(([0], np.cumsum([d * d for d in self.dims])))
        self.total_size = int(self.offsets[-1])
        diag_idx = []
        for n, d in enumerate(self.dims):
            off = self.offsets[n]
            diag_idx.extend(off + i * (d + 1) for i in range(d))
        self.diag_indices = np.array(diag_idx, dtype=np.intp)
        nph = np.concatenate(self.nph_diag)
        nqv = np.concatenate(self.nq_diag)
        self._nph_flat = nph
        self._nq_flat = nqv
        # tau = 4 t g^2 / kappa; dt/dtau is the single-qubit decay time
        self.dt_dtau = (
            params.kappa / (4.0 * params.g**2) if params.kappa > 0 else 1.0
        )

    # -- packing ---------------------------------------------------------

    def pack(self, rho: BlockDensityMatrix) -> np.ndarray:
        if rho.n_excitations != self.n_excitations or rho.n_qubits != self.params.n_qubits:
            raise ValueError("density matrix does not match cache dimensions")
        y = np.empty(self.total_size, dtype=complex)
        for n, block in enumerate(rho.blocks):
            if block.shape != (self.dims[n], self.dims[n]):
                raise ValueError(f"sector {n} block has wrong shape {block.shape}")
            y[self.offsets[n] : self.offsets[n + 1]] = block.ravel()
        return y

    def unpack(self, y: np.ndarray) -> BlockDensityMatrix:
        blocks = [
            y[self.offsets[n] : self.offsets[n + 1]].reshape(d, d).copy()
            for n, d in enumerate(self.dims)
        ]
        return BlockDensityMatrix(self.params.n_qubits, self.n_excitations, blocks)

    # -- generator -------------------------------------------------------

    def rhs(self, t: float, y: np.ndarray) -> np.ndarray:
        """d(rho)/dt on the packed vector, physical time units.

        The commutator is evaluated as -i(A - A^dag) with A = H rho, which
        is exact for Hermitian rho and keeps the output exactly
        Hermiticity-preserving against roundoff.
        """
        p = self.params
        out = np.empty_like(y)
        for n in range(self.n_excitations + 1):
            d = self.dims[n]
            rho = y[self.offsets[n] : self.offsets[n + 1]].reshape(d, d)
            a = self._h_sparse[n] @ rho
            drho = -1j * (a - a.conj().T)
            dd = self.decay_diag[n]
            drho -= 0.5 * (dd[:, None] * rho + rho * dd[None, :])
            if self.dephasing_mask is not None:
                drho += self.dephasing_mask[n] * rho
            if n < self.n_excitations:
                du = self.dims[n + 1]
                rho_up = y[self.offsets[n + 1] : self.offsets[n + 2]].reshape(du, du)
                if p.kappa > 0:
                    src, tgt, w2 = self._ph_gather[n + 1]
                    drho[np.ix_(tgt, tgt)] += p.kappa * (
                        w2 * rho_up[np.ix_(src, src)]
                    )
                if p.gamma > 0:
                    for src, tgt in self._qb_gather[n + 1]:
                        drho[np.ix_(tgt, tgt)] += p.gamma * rho_up[np.ix_(src, src)]
            out[self.offsets[n] : self.offsets[n + 1]] = drho.ravel()
        return out

    def trace_of(self, y: np.ndarray) -> float:
        return float(y[self.diag_indices].real.sum())

    def observables_of(self, y: np.ndarray) -> tuple[float, float]:
        diag = y[self.diag_indices].real
        return float(diag @ self._nph_flat), float(diag @ self._nq_flat)


def apply_liouvillian(
    cache: LiouvillianCache, rho: BlockDensityMatrix
) -> BlockDensityMatrix:
    """Apply the full Lindblad generator once; returns d(rho)/dt."""
    return cache.unpack(cache.rhs(0.0, cache.pack(rho)))


def _check_state_quality(cache, y, tau):
    for n, d in enumerate(cache.dims):
        rho = y[cache.offsets[n] : cache.offsets[n + 1]].reshape(d, d)
        herm = np.abs(rho - rho.conj().T).max()
        if herm > HERMITICITY_TOL:
            raise ConservationError(
                f"sector {n} Hermiticity defect {herm:.3e}", tau
            )
        if d > 0:
            wmin = np.linalg.eigvalsh(0.5 * (rho + rho.conj().T)).min()
            if wmin < -POSITIVITY_TOL:
                raise ConservationError(
                    f"sector {n} negative eigenvalue {wmin:.3e}", tau
                )


def evolve(
    cache: LiouvillianCache,
    rho0: BlockDensityMatrix,
    config: IntegratorConfig | None = None,
    sample_grid: np.ndarray | None = None,
    return_snapshots: bool = False,
    n_quality_checks: int = 10,
):
    """Integrate rho(tau) and sample observables on a tau grid.

    Returns an ObservableSeries (and, if requested, ~10 density-matrix
    snapshots as (tau, BlockDensityMatrix) pairs). Trace conservation is
    asserted at every accepted step; Hermiticity and positivity at the
    snapshot points. Trace drift is never renormalized away.
    """
    if config is None:
        config = IntegratorConfig()
    if sample_grid is None:
        nsteps = int(round(config.tau_max / config.sample_dtau))
        sample_grid = np.linspace(0.0, config.tau_max, nsteps + 1)
    sample_grid = np.asarray(sample_grid, dtype=float)
    if sample_grid.size == 0 or sample_grid[0] != 0.0:
        raise ValueError("sample grid must start at tau = 0")

    n_ex = cache.n_excitations
    thr = config.early_stop_threshold
    if thr is None:
        thr = 1e-4 * max(n_ex, 1)

    scale = cache.dt_dtau
    t_grid = sample_grid * scale
    y0 = cache.pack(rho0)
    tr0 = cache.trace_of(y0)
    if abs(tr0 - 1.0) > 1e-9:
        raise ValueError(f"initial state trace {tr0} != 1")

    solver = RK45(
        cache.rhs,
        0.0,
        y0,
        t_bound=t_grid[-1],
        rtol=config.rel_tol,
        atol=config.abs_tol,
        max_step=config.max_step * scale,
        first_step=None if config.initial_step is None else config.initial_step * scale,
    )

    snap_stride = max(len(sample_grid) // max(n_quality_checks, 1), 1)
    taus, nphs, nqs, rphs, rqs = [], [], [], [], []
    snapshots = []

    def take_sample(idx: int, y: np.ndarray):
        nph, nq = cache.observables_of(y)
        dy = cache.rhs(0.0, y)
        diag = dy[cache.diag_indices].real
        rph = float(diag @ cache._nph_flat) * scale
        rq = float(diag @ cache._nq_flat) * scale
        taus.append(sample_grid[idx])
        nphs.append(nph)
        nqs.append(nq)
        rphs.append(rph)
        rqs.append(rq)
        if idx % snap_stride == 0:
            _check_state_quality(cache, y, sample_grid[idx])
            if return_snapshots:
                snapshots.append((sample_grid[idx], cache.unpack(y)))

    take_sample(0, y0)
    next_idx = 1
    stopped = False
    while solver.status == "running" and next_idx < len(sample_grid):
        try:
            solver.step()
        except Exception as exc:  # scipy raises on invalid internal state
            raise IntegrationError(str(exc), taus[-1]) from exc
        if solver.status == "failed":
            raise IntegrationError("step size underflow", taus[-1])
        tr = cache.trace_of(solver.y)
        if abs(tr - 1.0) > TRACE_TOL:
            raise ConservationError(
                f"trace drift {tr - 1.0:.3e}", solver.t / scale
            )
        interp = solver.dense_output()
        while next_idx < len(sample_grid) and t_grid[next_idx] <= solver.t + 1e-15:
            take_sample(next_idx, interp(t_grid[next_idx]))
            next_idx += 1
        nph_now, nq_now = cache.observables_of(solver.y)
        if nph_now + nq_now < thr:
            stopped = True
            break

    series = ObservableSeries(
        tau=np.array(taus),
        n_ph=np.array(nphs),
        n_q=np.array(nqs),
        rate_n_ph=np.array(rphs),
        rate_n_q=np.array(rqs),
        early_stopped=stopped,
    )
    if return_snapshots:
        return series, snapshots
    return series


# -- dense brute-force oracle (validation only) --------------------------

DENSE_MAX_QUBITS = 4
DENSE_MAX_EXCITATIONS = 3


def dense_operators(n_qubits: int, photon_cutoff: int):
    """Kronecker-product operators on the full (unblocked) Hilbert space.

    Basis index = qubit_bitmask * (photon_cutoff + 1) + photon_count, with
    qubit j on bit j of the mask.
    """
    dph = photon_cutoff + 1
    a_ph = np.diag(np.sqrt(np.arange(1, dph)), k=1).astype(complex)
    eye_ph = np.eye(dph, dtype=complex)
    sm = np.array([[0, 1], [0, 0]], dtype=complex)  # |0><1|, |1> excited
    sz = np.diag([-1.0, 1.0]).astype(complex)
    eye2 = np.eye(2, dtype=complex)

    def qubit_op(j, op):
        left = np.eye(1 << (n_qubits - 1 - j), dtype=complex)
        right = np.eye(1 << j, dtype=complex)
        return np.kron(np.kron(np.kron(left, op), right), eye_ph)

    dim_q = 1 << n_qubits
    a_full = np.kron(np.eye(dim_q, dtype=complex), a_ph)
    sminus = [qubit_op(j, sm) for j in range(n_qubits)]
    szs = [qubit_op(j, sz) for j in range(n_qubits)]
    return a_full, sminus, szs


def dense_hamiltonian(
    params: SystemParams, photon_cutoff: int, rotating_frame: bool = True
) -> np.ndarray:
    a, sminus, _ = dense_operators(params.n_qubits, photon_cutoff)
    n_ph = a.conj().T @ a
    h = params.omega * n_ph
    n_tot = n_ph.copy()
    for j, s in enumerate(sminus):
        n_j = s.conj().T @ s
        h = h + params.epsilons[j] * n_j
        h = h + params.g * (a.conj().T @ s + a @ s.conj().T)
        n_tot = n_tot + n_j
    if rotating_frame:
        h = h - params.omega * n_tot
    return h


def embed_blocks(rho: BlockDensityMatrix, photon_cutoff: int) -> np.ndarray:
    """Place sector blocks into the full Kronecker-product space."""
    nq = rho.n_qubits
    dph = photon_cutoff + 1
    dim = (1 << nq) * dph
    out = np.zeros((dim, dim), dtype=complex)
    for n, block in enumerate(rho.blocks):
        basis = enumerate_sector(nq, n)
        idx = np.array(
            [mask * dph + p for mask, p in basis.states], dtype=np.intp
        )
        if (np.array([p for _, p in basis.states]) > photon_cutoff).any():
            raise ValueError("photon cutoff too small for this sector")
        out[np.ix_(idx, idx)] = block
    return out


def dense_oracle_evolve(
    params: SystemParams,
    rho0_dense: np.ndarray,
    t_grid: np.ndarray,
    photon_cutoff: int,
    rotating_frame: bool = True,
    rel_tol: float = 1e-8,
    abs_tol: float = 1e-10,
) -> np.ndarray:
    """Brute-force Lindblad integration on the full Hilbert space.

    Refuses anything large; this exists purely to cross-check the block
    solver and the exactness of the photon truncation.
    """
    nq = params.n_qubits
    if nq > DENSE_MAX_QUBITS:
        raise ValueError(f"dense oracle capped at {DENSE_MAX_QUBITS} qubits")
    if photon_cutoff > DENSE_MAX_EXCITATIONS + 2:
        raise ValueError("dense oracle photon cutoff too large")
    dim = (1 << nq) * (photon_cutoff + 1)
    if rho0_dense.shape != (dim, dim):
        raise ValueError("rho0 shape does not match cutoff")

    h = dense_hamiltonian(params, photon_cutoff, rotating_frame)
    a, sminus, szs = dense_operators(nq, photon_cutoff)
    channels = []
    if params.kappa > 0:
        channels.append((params.kappa, a))
    if params.gamma > 0:
        channels.extend((params.gamma, s) for s in sminus)
    lsq = sum(r * (L.conj().T @ L) for r, L in channels) if channels else None

    gphi = params.gamma_phi

    def rhs(t, y):
        rho = y.reshape(dim, dim)
        drho = -1j * (h @ rho - rho @ h)
        for r, L in channels:
            drho += r * (L @ rho @ L.conj().T)
        if lsq is not None:
            drho -= 0.5 * (lsq @ rho + rho @ lsq)
        if gphi > 0:
            for z in szs:
                drho += gphi * (z @ rho @ z - rho)
        return drho.ravel()

    from scipy.integrate import solve_ivp

    sol = solve_ivp(
        rhs,
        (t_grid[0], t_grid[-1]),
        rho0_dense.ravel().astype(complex),
        t_eval=t_grid,
        method="RK45",
        rtol=rel_tol,
        atol=abs_tol,
    )
    if not sol.success:
        raise IntegrationError(sol.message, float(sol.t[-1]) if len(sol.t) else 0.0)
    return sol.y.T.reshape(len(t_grid), dim, dim)
