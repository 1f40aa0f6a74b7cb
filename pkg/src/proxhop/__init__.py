"""Proximal basin hopping: global optimization by softmax-weighted local
minimization of Gaussian samples, plus baselines and verification tools."""

from .barycenter import WeightedSampleSet, concentration_threshold, draw_samples, weighted_mean
from .baselines import metropolis_accept, metropolis_probability, run_bh, run_zop
from .objectives import (
    Objective,
    ScalingLawDataset,
    generate_synthetic_scaling_data,
    get_objective,
    griewank,
    lennard_jones,
    rastrigin,
    scaling_law_objective,
)
from .pbh import (
    IterationRecord,
    PbhConfig,
    RunTrace,
    adaptive_delta_update,
    pbh_step,
    run_pbh,
)
from .solvers import LocalSolver

__all__ = [
    "Objective",
    "ScalingLawDataset",
    "rastrigin",
    "griewank",
    "lennard_jones",
    "scaling_law_objective",
    "generate_synthetic_scaling_data",
    "get_objective",
    "LocalSolver",
    "WeightedSampleSet",
    "draw_samples",
    "weighted_mean",
    "concentration_threshold",
    "PbhConfig",
    "IterationRecord",
    "RunTrace",
    "pbh_step",
    "run_pbh",
    "adaptive_delta_update",
    "run_bh",
    "run_zop",
    "metropolis_probability",
    "metropolis_accept",
]

__version__ = "0.1.0"
