"""Self-contained oracle suite behind the `verify` CLI command.

Three independent cross-checks of the block solver: the closed-form
single-excitation solution, brute-force dense evolution on the full
Hilbert space, and insensitivity to raising the photon cutoff beyond the
initial excitation number.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .analytic import single_excitation_populations
from .dynamics import (
    IntegratorConfig,
    LiouvillianCache,
    dense_oracle_evolve,
    embed_blocks,
    evolve,
)
from .hilbert import SystemParams
from .states import dicke_state, product_state, to_density


@dataclass
class CheckResult:
    name: str
    passed: bool
    observed: float
    tolerance: float

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return (
            f"[{status}] {self.name}: observed error {self.observed:.3e}"
            f" (tolerance {self.tolerance:.1e})"
        )


def _trace_distance(a: np.ndarray, b: np.ndarray) -> float:
    return 0.5 * float(np.linalg.svd(a - b, compute_uv=False).sum())


def check_analytic(
    kappa_over_g: float, g: float = 0.012, tau_max: float = 3.0, perturb: float = 0.0
) -> CheckResult:
    """Block solver vs the closed-form single-excitation solution."""
    kappa = kappa_over_g * g
    params = SystemParams(n_qubits=1, g=g, kappa=kappa)
    cache = LiouvillianCache(params, 1)
    if perturb:
        # test hook: deliberately corrupt the Hamiltonian (negative control)
        cache.hamiltonians[1] = cache.hamiltonians[1] * (1.0 + perturb)
        cache._h_sparse[1] = cache._h_sparse[1] * (1.0 + perturb)
    rho0 = to_density(product_state(1, 1))
    config = IntegratorConfig(tau_max=tau_max, early_stop_threshold=0.0)
    series = evolve(cache, rho0, config)
    t = series.tau * cache.dt_dtau
    n_q_ref, n_ph_ref = single_excitation_populations(g, kappa, t)
    err = max(
        np.abs(series.n_q - n_q_ref).max(), np.abs(series.n_ph - n_ph_ref).max()
    )
    tol = 1e-7
    return CheckResult(
        f"analytic single-excitation, kappa/g={kappa_over_g:g}", err < tol, err, tol
    )


def check_dense_equivalence(
    n_qubits: int = 3,
    n_excited: int = 2,
    kappa_over_g: float = 5.0,
    gamma_over_g: float = 0.02,
    gamma_phi_over_g: float = 0.01,
    tau_max: float = 5.0,
    g: float = 0.012,
    rel_tol: float = 1e-10,
    abs_tol: float = 1e-12,
) -> CheckResult:
    """Block solver vs brute-force evolution on the full Hilbert space."""
    params = SystemParams(
        n_qubits=n_qubits,
        g=g,
        kappa=kappa_over_g * g,
        gamma=gamma_over_g * g,
        gamma_phi=gamma_phi_over_g * g,
    )
    cache = LiouvillianCache(params, n_excited)
    rho0 = to_density(dicke_state(n_qubits, n_excited))
    tau_grid = np.linspace(0.0, tau_max, 51)
    config = IntegratorConfig(
        rel_tol=rel_tol, abs_tol=abs_tol, tau_max=tau_max, early_stop_threshold=0.0
    )
    series, snaps = evolve(
        cache, rho0, config, sample_grid=tau_grid, return_snapshots=True,
        n_quality_checks=len(tau_grid),
    )
    cutoff = n_excited + 2
    t_grid = tau_grid * cache.dt_dtau
    dense_traj = dense_oracle_evolve(
        params,
        embed_blocks(rho0, cutoff),
        t_grid,
        cutoff,
        rel_tol=rel_tol,
        abs_tol=abs_tol,
    )
    err = 0.0
    for (tau, rho_block), rho_dense in zip(snaps, dense_traj):
        err = max(err, _trace_distance(embed_blocks(rho_block, cutoff), rho_dense))
    tol = 1e-8
    return CheckResult("dense vs block equivalence", err < tol, err, tol)


def check_truncation(
    n_qubits: int = 2,
    n_excited: int = 2,
    kappa_over_g: float = 5.0,
    tau_max: float = 3.0,
    g: float = 0.012,
) -> CheckResult:
    """Raising the dense photon cutoff must not change n_ph at all.

    Under the rotating-wave coupling with only lowering dissipators, no
    sector above the initial excitation number is ever populated, so the
    photon truncation at the initial excitation number is exact. Both runs
    use very tight tolerances so the comparison is not dominated by
    ordinary integration error; the population that leaks above the
    original cutoff is also measured directly.
    """
    params = SystemParams(n_qubits=n_qubits, g=g, kappa=kappa_over_g * g)
    rho0 = to_density(dicke_state(n_qubits, n_excited))
    t_grid = np.linspace(0.0, tau_max * params.kappa / (4 * g**2), 21)
    results = []
    leaked = 0.0
    for cutoff in (n_excited, n_excited + 2):
        traj = dense_oracle_evolve(
            params, embed_blocks(rho0, cutoff), t_grid, cutoff,
            rel_tol=1e-13, abs_tol=1e-15,
        )
        dph = cutoff + 1
        nph_op = np.kron(
            np.eye(1 << n_qubits), np.diag(np.arange(dph, dtype=float))
        )
        results.append(
            np.array([np.trace(r @ nph_op).real for r in traj])
        )
        if cutoff > n_excited:
            high = np.kron(
                np.eye(1 << n_qubits),
                np.diag((np.arange(dph) > n_excited).astype(float)),
            )
            leaked = max(
                float(np.trace(r @ high).real) for r in traj
            )
    err = max(float(np.abs(results[0] - results[1]).max()), abs(leaked))
    tol = 1e-12
    return CheckResult("photon truncation exactness", err < tol, err, tol)


def run_verification(perturb: float = 0.0) -> list[CheckResult]:
    checks = [check_analytic(kog, perturb=perturb) for kog in (0.5, 5.0, 20.0)]
    checks.append(check_dense_equivalence())
    checks.append(check_truncation())
    return checks
