"""Exact evolution of closed quadratic systems.

The classical flow ``<q>' = -Sigma B <q> - Sigma C`` has the solution
``q(t) = R(t) [q(0) - Delta(t)]`` with ``R' = -Sigma B R`` and
``Delta' = R^-1 Sigma C``.  Gaussian states are transported along it.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
from numpy.typing import NDArray
from scipy.linalg import expm

from .errors import DimensionMismatch, ToleranceNotMet
from .phase_space import GaussianState, QuadraticModel


def drift_from_hamiltonian(model: QuadraticModel) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
    """Return ``(-Sigma B, -Sigma C)``."""
    S = model.sigma.matrix
    return -S @ model.B, -S @ model.C


@dataclass(frozen=True)
class Propagator:
    """``R(t)``, ``Delta(t)`` and their exact time derivatives."""

    R: NDArray[np.float64]
    delta: NDArray[np.float64]
    t: float
    Rdot: NDArray[np.float64]
    delta_dot: NDArray[np.float64]
    model: QuadraticModel

    def symplectic_residual(self) -> float:
        """``max |R Sigma R^T - Sigma|``."""
        S = self.model.sigma.matrix
        return float(np.abs(self.R @ S @ self.R.T - S).max())


def _displacement(generator: NDArray, source: NDArray, t: float) -> NDArray:
    """``int_0^t exp(generator s) ds @ source`` from one augmented exponential.

    Works for singular generators (free motion), where the closed form
    ``generator^-1 (exp(generator t) - I) source`` does not exist.
    """
    n = generator.shape[0]
    aug = np.zeros((n + 1, n + 1))
    aug[:n, :n] = generator
    aug[:n, n] = source
    return expm(aug * t)[:n, n]


def propagate(model: QuadraticModel, t: float, tol: float = 1e-10) -> Propagator:
    """Propagator of a time-independent quadratic model at time ``t``.

    Raises :class:`ToleranceNotMet` if the computed ``R`` violates
    ``R Sigma R^T = Sigma`` by more than ``tol * |Sigma| * max(1, |R|^2)``.
    """
    if not np.isfinite(t):
        raise ValueError("t must be finite")
    if tol <= 0:
        raise ValueError("tol must be positive")
    A, _ = drift_from_hamiltonian(model)
    S = model.sigma.matrix
    R = expm(A * t)
    SC = S @ model.C
    if np.any(SC):
        delta = _displacement(-A, SC, t)
    else:
        delta = np.zeros(model.dim)
    prop = Propagator(
        R=R,
        delta=delta,
        t=float(t),
        Rdot=A @ R,
        delta_dot=S @ R.T @ model.C,
        model=model,
    )
    growth = max(1.0, np.linalg.norm(R, 2) ** 2)
    if prop.symplectic_residual() > tol * np.abs(S).max() * growth:
        raise ToleranceNotMet(
            f"symplectic residual {prop.symplectic_residual():.3g} exceeds tolerance at t={t}"
        )
    return prop


def evolve_gaussian(state: GaussianState, prop: Propagator) -> GaussianState:
    """``mean -> R (mean - Delta)``, ``cov -> R cov R^T``."""
    if state.dim != prop.R.shape[0]:
        raise DimensionMismatch(f"state has dimension {state.dim}, propagator {prop.R.shape[0]}")
    R = prop.R
    cov = R @ state.cov @ R.T
    return GaussianState(R @ (state.mean - prop.delta), 0.5 * (cov + cov.T), state.hbar, state.sigma)


def closed_trajectory(
    model: QuadraticModel, state: GaussianState, times: Sequence[float], tol: float = 1e-10
) -> list[GaussianState]:
    """Evolve ``state`` (given at t = 0) to each of ``times``.

    Uniform grids starting at 0 are stepped with one propagator (the flow is
    a semigroup); this keeps large reservoirs to a single exponential.
    """
    times = np.asarray(times, dtype=float)
    if times.size == 0:
        return []
    steps = np.diff(times)
    uniform = times.size > 2 and np.allclose(steps, steps[0], rtol=1e-12, atol=0.0) and steps[0] > 0
    if not uniform:
        return [evolve_gaussian(state, propagate(model, t, tol)) for t in times]
    out = [evolve_gaussian(state, propagate(model, times[0], tol))]
    step = propagate(model, steps[0], tol)
    for _ in steps:
        out.append(evolve_gaussian(out[-1], step))
    return out


def subsystem_trajectory(
    model: QuadraticModel, state: GaussianState, times: Sequence[float], k: int, tol: float = 1e-10
) -> list[GaussianState]:
    """Moments of the first ``k`` phase-space components along the closed flow.

    Only the top ``k`` rows of ``R(t)`` are carried, which keeps the cost of
    each step at ``k x dim x dim`` for large reservoirs.  ``state`` is given at
    ``times[0]``.
    """
    if state.dim != model.dim:
        raise DimensionMismatch(f"state has dimension {state.dim}, model {model.dim}")
    times = np.asarray(times, dtype=float)
    sigma = model.sigma.block(0, k)
    steps = np.diff(times)
    uniform = steps.size > 0 and np.allclose(steps, steps[0], rtol=1e-12, atol=0.0) and steps[0] > 0
    if np.any(model.C) or not uniform:
        full = [evolve_gaussian(state, propagate(model, t - times[0], tol)) for t in times]
        return [s.marginal(0, k) for s in full]
    R = propagate(model, steps[0], tol).R
    P = np.eye(model.dim)[:k]
    out = []
    for i in range(times.size):
        if i:
            P = P @ R
        cov = P @ state.cov @ P.T
        out.append(GaussianState(P @ state.mean, 0.5 * (cov + cov.T), state.hbar, sigma))
    return out
