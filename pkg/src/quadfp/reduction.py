"""Averaging a closed Gaussian flow over reservoir variables.

With the phase space split as ``q = (Q, xi)`` and a factorized initial state
whose reservoir part is Gaussian with covariance ``F`` and mean ``gamma``,
the subsystem moments obey

    mean_Q(t) = R11 mean_Q(0) + delta*,      delta* = R12 gamma - R11 Delta_Q - R12 Delta_xi
    cov_Q(t)  = R11 cov_Q(0) R11^T + M*,     M*     = R12 F R12^T

and the effective Fokker-Planck coefficients follow as
``A = R11' R11^-1``, ``K = delta*' - A delta*`` and
``D = sym[(R12' - A R12) F R12^T]``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.typing import ArrayLike, NDArray

from .dynamics import Propagator, propagate
from .errors import BadSplit, CorrelatedInitialState, DimensionMismatch, NotPositiveDefinite, SingularR11
from .fokker_planck import FPGenerator
from .phase_space import GaussianState, QuadraticModel

R11_CONDITION_LIMIT = 1e12


def _sym(X: NDArray) -> NDArray:
    return 0.5 * (X + X.T)


@dataclass(frozen=True)
class PropagatorBlocks:
    R11: NDArray[np.float64]
    R12: NDArray[np.float64]
    R21: NDArray[np.float64]
    R22: NDArray[np.float64]
    delta_Q: NDArray[np.float64]
    delta_xi: NDArray[np.float64]
    R11dot: NDArray[np.float64]
    R12dot: NDArray[np.float64]
    # (R Delta')_Q, i.e. the subsystem slice of Sigma C
    source_Q: NDArray[np.float64]
    t: float

    @property
    def R(self) -> NDArray[np.float64]:
        return np.block([[self.R11, self.R12], [self.R21, self.R22]])

    @property
    def n_sub(self) -> int:
        return self.R11.shape[0] // 2


def split_blocks(prop: Propagator, n_sub: int | None = None) -> PropagatorBlocks:
    """Slice a propagator along the subsystem/reservoir boundary."""
    n_sub = prop.model.n_sub if n_sub is None else n_sub
    N = prop.model.n_dof
    if not 1 <= n_sub < N:
        raise BadSplit(f"n_sub must satisfy 1 <= n_sub < {N}, got {n_sub}")
    k = 2 * n_sub
    R, Rd = prop.R, prop.Rdot
    source = prop.R @ prop.delta_dot
    return PropagatorBlocks(
        R11=R[:k, :k],
        R12=R[:k, k:],
        R21=R[k:, :k],
        R22=R[k:, k:],
        delta_Q=prop.delta[:k],
        delta_xi=prop.delta[k:],
        R11dot=Rd[:k, :k],
        R12dot=Rd[:k, k:],
        source_Q=source[:k],
        t=prop.t,
    )


def _check_reservoir(blocks: PropagatorBlocks, F: ArrayLike, gamma_res: ArrayLike | None):
    F = np.asarray(F, dtype=float)
    m = blocks.R12.shape[1]
    if F.shape != (m, m):
        raise DimensionMismatch(f"reservoir covariance must be {m} x {m}, got {F.shape}")
    if not np.allclose(F, F.T, rtol=0.0, atol=1e-12 * max(1.0, np.abs(F).max())):
        raise NotPositiveDefinite("reservoir covariance is not symmetric")
    try:
        np.linalg.cholesky(F)
    except np.linalg.LinAlgError as exc:
        raise NotPositiveDefinite("reservoir covariance is not positive definite") from exc
    gamma = np.zeros(m) if gamma_res is None else np.asarray(gamma_res, dtype=float)
    if gamma.shape != (m,):
        raise DimensionMismatch(f"reservoir mean must have length {m}")
    return _sym(F), gamma


@dataclass(frozen=True)
class ReducedPropagator:
    """Averaged propagator: ``Q' -> N(R11 Q' + delta*, M*)``."""

    R11: NDArray[np.float64]
    Mstar: NDArray[np.float64]
    delta_star: NDArray[np.float64]
    t: float

    def apply(self, state: GaussianState) -> GaussianState:
        """Subsystem state at ``t`` from the subsystem state at 0."""
        if state.dim != self.R11.shape[0]:
            raise DimensionMismatch("subsystem state has the wrong dimension")
        cov = self.R11 @ state.cov @ self.R11.T + self.Mstar
        return GaussianState(self.R11 @ state.mean + self.delta_star, _sym(cov), state.hbar, state.sigma)


def reduce(blocks: PropagatorBlocks, F: ArrayLike, gamma_res: ArrayLike | None = None) -> ReducedPropagator:
    F, gamma = _check_reservoir(blocks, F, gamma_res)
    R12 = blocks.R12
    Mstar = _sym(R12 @ F @ R12.T)
    delta_star = R12 @ gamma - blocks.R11 @ blocks.delta_Q - R12 @ blocks.delta_xi
    return ReducedPropagator(blocks.R11, Mstar, delta_star, blocks.t)


@dataclass(frozen=True)
class FPCoefficients:
    A: NDArray[np.float64]
    K: NDArray[np.float64]
    D: NDArray[np.float64]
    t: float
    r11_condition: float = 1.0


def effective_fp(
    blocks: PropagatorBlocks,
    F: ArrayLike,
    gamma_res: ArrayLike | None = None,
    cond_limit: float = R11_CONDITION_LIMIT,
) -> FPCoefficients:
    """Effective drift matrix, drift vector and diffusion matrix at ``blocks.t``.

    All derivatives are exact slices of ``(-Sigma B) R``.  Raises
    :class:`SingularR11` instead of regularizing when ``R11`` is
    (numerically) singular.
    """
    F, gamma = _check_reservoir(blocks, F, gamma_res)
    R11, R12 = blocks.R11, blocks.R12
    cond = float(np.linalg.cond(R11))
    if not np.isfinite(cond) or cond > cond_limit:
        raise SingularR11(f"R11 is singular at t={blocks.t} (cond={cond:.3g})", cond, blocks.t)
    A = np.linalg.solve(R11.T, blocks.R11dot.T).T
    D = _sym((blocks.R12dot - A @ R12) @ F @ R12.T)
    shift = gamma - blocks.delta_xi
    delta_star = R12 @ shift - R11 @ blocks.delta_Q
    delta_star_dot = blocks.R12dot @ shift - blocks.R11dot @ blocks.delta_Q - blocks.source_Q
    K = delta_star_dot - A @ delta_star
    return FPCoefficients(A=A, K=K, D=D, t=blocks.t, r11_condition=cond)


def diffusion_from_moments(blocks: PropagatorBlocks, F: ArrayLike, A: ArrayLike) -> NDArray[np.float64]:
    """``(M*' - A M* - M* A^T) / 2`` with ``M*'`` from the product rule."""
    F = np.asarray(F, dtype=float)
    A = np.asarray(A, dtype=float)
    R12, R12d = blocks.R12, blocks.R12dot
    M = R12 @ F @ R12.T
    Mdot = R12d @ F @ R12.T + R12 @ F @ R12d.T
    return _sym(0.5 * (Mdot - A @ M - M @ A.T))


def split_factorized(state: GaussianState, n_sub: int, atol: float = 0.0) -> tuple[GaussianState, GaussianState]:
    """Split a joint state into subsystem and reservoir parts.

    Raises :class:`CorrelatedInitialState` when the cross-covariance block
    exceeds ``atol``; the reduction is exact only for product states.
    """
    k = 2 * n_sub
    if not 0 < k < state.dim:
        raise BadSplit(f"cannot split a {state.dim}-dimensional state at n_sub={n_sub}")
    cross = state.cov[:k, k:]
    if np.abs(cross).max() > atol:
        raise CorrelatedInitialState(f"subsystem-reservoir covariance {np.abs(cross).max():.3g} is nonzero")
    return state.marginal(0, k), state.marginal(k, state.dim)


def effective_generator(
    model: QuadraticModel,
    F: ArrayLike,
    gamma_res: ArrayLike | None = None,
    tol: float = 1e-10,
) -> FPGenerator:
    """Time-dependent subsystem generator, evaluated on demand."""
    k = 2 * model.n_sub
    if not 0 < model.n_sub < model.n_dof:
        raise BadSplit("model has no subsystem/reservoir split")

    def coefficients(t: float) -> FPCoefficients:
        return effective_fp(split_blocks(propagate(model, t, tol)), F, gamma_res)

    return FPGenerator(
        A=lambda t: coefficients(t).A,
        K=lambda t: coefficients(t).K,
        D=lambda t: coefficients(t).D,
        sigma=model.sigma.block(0, k),
        hbar=model.hbar,
        family=coefficients,
    )
