"""Gaussian phase-space dynamics of quadratic open quantum systems.

Closed quadratic flows, exact reduction to subsystem Fokker-Planck
generators, quantum admissibility checks and a set of reference models.
"""

from .dynamics import Propagator, closed_trajectory, evolve_gaussian, propagate
from .fokker_planck import (
    FPGenerator,
    admissibility,
    dstar_matrix,
    evolve_moments,
    min_diffusion_bound_1d,
    solve_lyapunov,
    steady_state,
)
from .phase_space import (
    AdmissibilityReport,
    GaussianState,
    QuadraticModel,
    SymplecticForm,
    check_state_admissible,
    evaluate_wigner,
    purity,
    standard_symplectic,
    transform_frame,
)
from .reduction import effective_fp, effective_generator, reduce, split_blocks

__version__ = "0.1.0"

__all__ = [
    "AdmissibilityReport",
    "FPGenerator",
    "GaussianState",
    "Propagator",
    "QuadraticModel",
    "SymplecticForm",
    "admissibility",
    "check_state_admissible",
    "closed_trajectory",
    "dstar_matrix",
    "effective_fp",
    "effective_generator",
    "evaluate_wigner",
    "evolve_gaussian",
    "evolve_moments",
    "min_diffusion_bound_1d",
    "propagate",
    "purity",
    "reduce",
    "solve_lyapunov",
    "split_blocks",
    "standard_symplectic",
    "steady_state",
    "transform_frame",
]
