"""Statevector simulation of amplified minimum search over gridded domains,
plus a classical-pivot hybrid and brute-force baselines."""

__version__ = "0.1.0"

from .baseline import GridMinimum, RefinedMinimum, grid_brute_min, refine_min
from .encoding import GridLayout, VariableSpec, square_layout
from .grover import (
    amplify,
    iterate,
    measured_success_probability,
    optimal_iterations,
    success_probability,
)
from .minsearch import (
    BARITOMPA_ENTRIES,
    EnsembleStats,
    NumericFailure,
    Schedule,
    SearchResult,
    SearchSetup,
    SearchTrace,
    StopRule,
    adapted_grover_min,
    run_ensemble,
)
from .objectives import (
    GOLDSTEIN_PRICE,
    LJ_TRIMER,
    SHUBERT,
    ClusterGeometry,
    Objective,
    build_fixed_core,
    cluster_energy,
    free_atom_objective,
    get_objective,
    gp_eval,
    lj_pair,
    shubert_eval,
    trimer_energy,
)
from .pivot import (
    GrowthConfig,
    GrowthResult,
    PivotConfig,
    PivotSearchResult,
    PivotState,
    ProbeSet,
    boltzmann_weights,
    generate_probes,
    lj_growth,
    pivot_grover_search,
    resample,
    select_pivots,
)
from .statevector import (
    MAX_QUBITS,
    MarkedSet,
    Statevector,
    dense_reference_operators,
    diffusion,
    marked_probability,
    phase_flip,
    sample,
    uniform_superposition,
)

__all__ = [
    "BARITOMPA_ENTRIES",
    "ClusterGeometry",
    "EnsembleStats",
    "GOLDSTEIN_PRICE",
    "GridLayout",
    "GridMinimum",
    "GrowthConfig",
    "GrowthResult",
    "LJ_TRIMER",
    "MAX_QUBITS",
    "MarkedSet",
    "NumericFailure",
    "Objective",
    "PivotConfig",
    "PivotSearchResult",
    "PivotState",
    "ProbeSet",
    "RefinedMinimum",
    "SHUBERT",
    "Schedule",
    "SearchResult",
    "SearchSetup",
    "SearchTrace",
    "Statevector",
    "StopRule",
    "VariableSpec",
    "adapted_grover_min",
    "amplify",
    "boltzmann_weights",
    "build_fixed_core",
    "cluster_energy",
    "dense_reference_operators",
    "diffusion",
    "free_atom_objective",
    "generate_probes",
    "get_objective",
    "gp_eval",
    "grid_brute_min",
    "iterate",
    "lj_growth",
    "lj_pair",
    "marked_probability",
    "measured_success_probability",
    "optimal_iterations",
    "phase_flip",
    "pivot_grover_search",
    "refine_min",
    "resample",
    "run_ensemble",
    "sample",
    "select_pivots",
    "shubert_eval",
    "square_layout",
    "success_probability",
    "trimer_energy",
    "uniform_superposition",
]
