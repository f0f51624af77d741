"""Concrete quadratic systems and their closed-form reference results."""

from .continuum import ContinuumBath, ContinuumCoefficients, continuum_fp, principal_value, rwa_gate
from .coupled import (
    CoupledPairSpec,
    bateman,
    bateman_blocks,
    bateman_drift,
    coupled_pair,
    coupled_pair_R11_closed_form,
    normal_frequencies,
)
from .magnetic import MagneticModel, MagneticSpec, magnetic_model
from .thermostat import BathSpec, bath_model, discretize_bath, perturbative_mu_D, reservoir_covariance

__all__ = [
    "BathSpec",
    "ContinuumBath",
    "ContinuumCoefficients",
    "CoupledPairSpec",
    "MagneticModel",
    "MagneticSpec",
    "bateman",
    "bateman_blocks",
    "bateman_drift",
    "bath_model",
    "continuum_fp",
    "coupled_pair",
    "coupled_pair_R11_closed_form",
    "discretize_bath",
    "magnetic_model",
    "normal_frequencies",
    "perturbative_mu_D",
    "principal_value",
    "reservoir_covariance",
    "rwa_gate",
]
