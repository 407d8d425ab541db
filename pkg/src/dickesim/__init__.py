"""Dissipative Tavis-Cummings dynamics for mesoscopic qubit ensembles.

Simulates the Lindblad evolution of N qubits coupled to one leaky cavity
mode, exploiting excitation-number conservation to store the density matrix
as per-sector blocks, and provides the sweep machinery to map out radiation
trapping vs superradiance as functions of initial state, ensemble size,
cavity quality, disorder, and qubit relaxation.
"""

from .analytic import single_excitation_populations
from .dynamics import (
    IntegrationError,
    IntegratorConfig,
    LiouvillianCache,
    apply_liouvillian,
    dense_oracle_evolve,
    evolve,
)
from .experiments import (
    SweepSpec,
    quadratic_scaling_fit,
    run_sweep,
    sample_disorder,
    superradiance_indicator,
)
from .hilbert import (
    SectorBasis,
    SparseBlockOperator,
    SystemParams,
    build_dephasing,
    build_hamiltonian,
    build_lowering,
    enumerate_sector,
)
from .observables import (
    ObservableSeries,
    RunMetrics,
    exact_rates,
    expectations,
    extract_metrics,
)
from .states import (
    BlockDensityMatrix,
    PureSectorState,
    dicke_state,
    product_state,
    to_density,
)

__version__ = "0.1.0"

__all__ = [
    "SystemParams", "SectorBasis", "SparseBlockOperator",
    "enumerate_sector", "build_hamiltonian", "build_lowering", "build_dephasing",
    "PureSectorState", "BlockDensityMatrix",
    "product_state", "dicke_state", "to_density",
    "LiouvillianCache", "IntegratorConfig", "IntegrationError",
    "apply_liouvillian", "evolve", "dense_oracle_evolve",
    "ObservableSeries", "RunMetrics",
    "expectations", "exact_rates", "extract_metrics",
    "SweepSpec", "run_sweep", "sample_disorder",
    "superradiance_indicator", "quadratic_scaling_fit",
    "single_excitation_populations",
]
