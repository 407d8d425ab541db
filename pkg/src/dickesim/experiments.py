"""Parameter sweeps: trapping/superradiance grids, disorder, relaxation scans.

A sweep is a deterministic nested grid (family, n_qubits, n_excited,
kappa/g, disorder width, seed). Grid points are independent work items;
they may run in parallel, and results are merged in grid order so a sweep
is reproducible bit-for-bit given the spec and seeds.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from math import ceil

import numpy as np

from .dynamics import IntegrationError, IntegratorConfig, LiouvillianCache, evolve
from .hilbert import SystemParams
from .observables import RunMetrics, extract_metrics
from .states import dicke_state, product_state, to_density

FAMILIES = ("product", "dicke")


def sample_disorder(
    omega: float, width: float, n_qubits: int, seed: int
) -> tuple[float, ...]:
    """Qubit frequencies drawn uniformly from [omega - width/2, omega + width/2].

    Philox is counter-based, so identical seeds give identical draws on any
    platform regardless of how many other streams exist.
    """
    if width < 0:
        raise ValueError("disorder width must be >= 0")
    if width == 0:
        return (omega,) * n_qubits
    rng = np.random.Generator(np.random.Philox(key=seed))
    draws = omega + width * (rng.random(n_qubits) - 0.5)
    return tuple(float(e) for e in draws)


@dataclass(frozen=True)
class SweepSpec:
    """Grid definition for one sweep.

    n_excited may be an explicit tuple, a policy string ("all" = 1..n_q,
    "half" = ceil(n_q/2), "one" = 1), or a mapping family -> policy/tuple.
    gamma and gamma_phi are absolute rates in omega = 1 units.
    """

    families: tuple[str, ...] = ("product", "dicke")
    n_qubits: tuple[int, ...] = tuple(range(1, 8))
    n_excited: object = "all"
    kappa_over_g: tuple[float, ...] = (1.0, 20.0)
    omega_spread: tuple[float, ...] = (0.0,)
    seeds: tuple[int, ...] = (0,)
    g: float = 0.012
    omega: float = 1.0
    gamma: float = 0.0
    gamma_phi: float = 0.0
    integrator: IntegratorConfig = field(default_factory=IntegratorConfig)

    def __post_init__(self):
        for f in self.families:
            if f not in FAMILIES:
                raise ValueError(f"unknown state family {f!r}")

    def excitations_for(self, family: str, n_qubits: int) -> tuple[int, ...]:
        policy = self.n_excited
        if isinstance(policy, dict):
            policy = policy[family]
        if isinstance(policy, str):
            if policy == "all":
                return tuple(range(1, n_qubits + 1))
            if policy == "half":
                return (ceil(n_qubits / 2),)
            if policy == "one":
                return (1,)
            raise ValueError(f"unknown n_excited policy {policy!r}")
        return tuple(n for n in policy if n <= n_qubits)


@dataclass(frozen=True)
class SweepPoint:
    family: str
    n_qubits: int
    n_excited: int
    kappa_over_g: float
    omega_spread: float
    seed: int


@dataclass
class SweepRow:
    point: SweepPoint
    gamma: float
    gamma_phi: float
    metrics: RunMetrics | None
    status: str  # "ok" or "failed"
    error: str = ""


@dataclass
class SweepResult:
    spec: SweepSpec
    rows: list[SweepRow]


def grid_points(spec: SweepSpec) -> list[SweepPoint]:
    """The sweep grid in its canonical (deterministic) order."""
    pts = []
    for family in spec.families:
        for nq in spec.n_qubits:
            for nex in spec.excitations_for(family, nq):
                for kog in spec.kappa_over_g:
                    for width in spec.omega_spread:
                        for seed in spec.seeds:
                            pts.append(
                                SweepPoint(family, nq, nex, kog, width, seed)
                            )
    return pts


def run_point(spec: SweepSpec, point: SweepPoint) -> SweepRow:
    """Evolve one grid point and extract its metrics."""
    epsilons = sample_disorder(
        spec.omega, point.omega_spread, point.n_qubits, point.seed
    )
    params = SystemParams(
        n_qubits=point.n_qubits,
        g=spec.g,
        omega=spec.omega,
        epsilons=epsilons,
        kappa=point.kappa_over_g * spec.g,
        gamma=spec.gamma,
        gamma_phi=spec.gamma_phi,
    )
    make = product_state if point.family == "product" else dicke_state
    rho0 = to_density(make(point.n_qubits, point.n_excited))
    cache = LiouvillianCache(params, point.n_excited)
    try:
        series = evolve(cache, rho0, spec.integrator)
        metrics = extract_metrics(series, point.n_excited)
    except IntegrationError as exc:
        return SweepRow(point, spec.gamma, spec.gamma_phi, None, "failed", str(exc))
    return SweepRow(point, spec.gamma, spec.gamma_phi, metrics, "ok")


def _worker(args):
    return run_point(*args)


def run_sweep(spec: SweepSpec, jobs: int = 1) -> SweepResult:
    """Run every grid point; per-point failures become flagged rows."""
    points = grid_points(spec)
    if jobs <= 1 or len(points) <= 1:
        rows = [run_point(spec, p) for p in points]
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(_worker, [(spec, p) for p in points]))
    return SweepResult(spec=spec, rows=rows)


def superradiance_indicator(metrics: RunMetrics) -> tuple[bool, float]:
    """Collective emission faster than independent emitters?

    The per-excitation emission rate equals 1 (in tau units) for a single
    independent qubit; anything above that is superradiant.
    """
    margin = metrics.per_excitation_emission - 1.0
    return margin > 0.0, margin


def quadratic_scaling_fit(
    n_qubits_values, rates
) -> tuple[float, float]:
    """Power-law exponent of rate vs n_qubits by log-log least squares.

    Returns (exponent, rms residual in log space).
    """
    nq = np.asarray(n_qubits_values, dtype=float)
    r = np.asarray(rates, dtype=float)
    if len(nq) < 3:
        raise ValueError("need at least 3 points for a power-law fit")
    if (r <= 0).any() or (nq <= 0).any():
        raise ValueError("power-law fit needs positive data")
    coeffs, res = np.polyfit(np.log(nq), np.log(r), 1, full=True)[:2]
    rms = float(np.sqrt(res[0] / len(nq))) if len(res) else 0.0
    return float(coeffs[0]), rms


# -- presets mirroring the published parameter grids ---------------------


def preset_spec(name: str) -> SweepSpec:
    base = SweepSpec()
    if name == "fig1":
        return replace(
            base,
            families=("product", "dicke"),
            n_qubits=tuple(range(1, 8)),
            n_excited="all",
            kappa_over_g=(1.0, 20.0),
        )
    if name == "fig2":
        return replace(
            base,
            families=("dicke",),
            n_qubits=tuple(range(1, 9)),
            n_excited="all",
            kappa_over_g=(1.0, 2.0, 5.0, 20.0),
        )
    if name == "fig3":
        return replace(
            base,
            families=("product", "dicke"),
            n_qubits=tuple(range(1, 8)),
            n_excited="all",
            kappa_over_g=(1.0, 20.0),
        )
    if name in ("fig4", "crossover"):
        return replace(
            base,
            families=("product", "dicke"),
            n_qubits=tuple(range(1, 8)),
            n_excited={"product": "one", "dicke": "half"},
            kappa_over_g=(0.25, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0),
        )
    if name == "fig5":
        return replace(
            base,
            families=("product", "dicke"),
            n_qubits=tuple(range(1, 8)),
            n_excited="all",
            kappa_over_g=(5.0,),
            omega_spread=(0.3,),
            seeds=(0,),
        )
    raise ValueError(f"unknown preset {name!r}")


PRESETS = ("fig1", "fig2", "fig3", "fig4", "fig5", "crossover")
