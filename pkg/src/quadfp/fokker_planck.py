"""Gaussian-moment dynamics of a linear Fokker-Planck generator.

For ``dW/dt = -d_a[(A q + K)_a W] + D_ab d_a d_b W`` the first and second
moments obey

    <q>' = A <q> + K,        M' = A M + M A^T + 2 D,

and the generator respects the uncertainty relations for every initial
state iff ``D + (i hbar / 4)(A Sigma + Sigma A^T)`` is nonnegative.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence, Union

import numpy as np
from numpy.typing import NDArray
from scipy.integrate import solve_ivp

from .errors import (
    DimensionMismatch,
    NotHurwitz,
    SingularLyapunov,
    ToleranceNotMet,
    WrongDimension,
)
from .phase_space import ADMISSIBILITY_TOL, AdmissibilityReport, GaussianState, SymplecticForm, hermitian_report

Coefficient = Union[NDArray[np.float64], Callable[[float], NDArray[np.float64]]]


@dataclass(frozen=True)
class FPGenerator:
    """Drift matrix ``A``, drift vector ``K``, diffusion ``D`` and commutator form.

    Each coefficient is either an array or a callable of time.  ``family``,
    when given, returns an object with ``A``, ``K``, ``D`` attributes for a
    time ``t`` in one call and takes precedence over the per-coefficient
    callables.
    """

    A: Coefficient
    K: Coefficient | None
    D: Coefficient
    sigma: SymplecticForm
    hbar: float = 1.0
    family: Callable[[float], object] | None = None

    def __post_init__(self):
        if self.is_constant:
            A, K, _ = self.at(0.0)
            D = np.asarray(self.D, float)
            n = self.sigma.dim
            if A.shape != (n, n) or D.shape != (n, n) or K.shape != (n,):
                raise DimensionMismatch(f"generator coefficients must match dimension {n}")
            if not np.allclose(D, D.T, rtol=0.0, atol=1e-14 * max(1.0, np.abs(D).max())):
                raise DimensionMismatch("diffusion matrix must be symmetric")

    @property
    def dim(self) -> int:
        return self.sigma.dim

    @property
    def is_constant(self) -> bool:
        return self.family is None and not any(callable(c) for c in (self.A, self.K, self.D))

    def at(self, t: float) -> tuple[NDArray, NDArray, NDArray]:
        if self.family is not None:
            c = self.family(t)
            return np.asarray(c.A, float), np.asarray(c.K, float), np.asarray(c.D, float)

        def ev(c):
            return np.asarray(c(t) if callable(c) else c, dtype=float)

        K = np.zeros(self.sigma.dim) if self.K is None else ev(self.K)
        D = ev(self.D)
        return ev(self.A), K, 0.5 * (D + D.T)


def dstar_matrix(gen: FPGenerator, t: float = 0.0) -> NDArray[np.complex128]:
    """``D + (i hbar / 4)(A Sigma + Sigma A^T)``."""
    A, _, D = gen.at(t)
    S = gen.sigma.matrix
    return D + 0.25j * gen.hbar * (A @ S + S @ A.T)


def admissibility(gen: FPGenerator, t: float = 0.0, tol: float = ADMISSIBILITY_TOL) -> AdmissibilityReport:
    return hermitian_report(dstar_matrix(gen, t), gen.hbar, tol)


def min_diffusion_bound_1d(gen: FPGenerator, t: float = 0.0, tol: float = ADMISSIBILITY_TOL) -> tuple[float, float, bool]:
    """One degree of freedom: compare ``det D`` with ``hbar^2 (Tr A)^2 / 16``.

    The determinant test presumes a nonnegative diagonal; a diffusion matrix
    with a negative diagonal entry fails regardless.
    """
    if gen.dim != 2:
        raise WrongDimension(f"bound applies to one degree of freedom, generator has dimension {gen.dim}")
    A, _, D = gen.at(t)
    det_d = float(np.linalg.det(D))
    bound = gen.hbar**2 * float(np.trace(A)) ** 2 / 16.0
    scale = max(abs(det_d), bound, gen.hbar**2 * tol)
    passed = det_d - bound >= -tol * scale and D[0, 0] >= 0 and D[1, 1] >= 0
    return det_d, bound, bool(passed)


def _pack(mean: NDArray, cov: NDArray) -> NDArray:
    return np.concatenate([mean, cov.ravel()])


def evolve_moments(
    gen: FPGenerator,
    state: GaussianState,
    t_grid: Sequence[float],
    rtol: float = 1e-11,
    atol: float = 1e-13,
) -> list[GaussianState]:
    """Integrate the mean and covariance equations; ``state`` sits at ``t_grid[0]``."""
    if state.dim != gen.dim:
        raise DimensionMismatch(f"state dimension {state.dim} != generator dimension {gen.dim}")
    t_grid = np.asarray(t_grid, dtype=float)
    n = gen.dim
    if t_grid.size == 1:
        return [GaussianState(state.mean, state.cov, gen.hbar, gen.sigma)]

    if gen.is_constant:
        A0, K0, D0 = gen.at(0.0)

        def coeffs(t):
            return A0, K0, D0
    else:
        coeffs = gen.at

    def rhs(t, y):
        A, K, D = coeffs(t)
        m = y[:n]
        M = y[n:].reshape(n, n)
        AM = A @ M
        return _pack(A @ m + K, AM + AM.T + 2.0 * D)

    sol = solve_ivp(
        rhs,
        (t_grid[0], t_grid[-1]),
        _pack(state.mean, state.cov),
        method="DOP853",
        t_eval=t_grid,
        rtol=rtol,
        atol=atol,
    )
    if not sol.success:
        raise ToleranceNotMet(f"moment integration failed: {sol.message}")
    out = []
    for y in sol.y.T:
        M = y[n:].reshape(n, n)
        out.append(GaussianState(y[:n], 0.5 * (M + M.T), gen.hbar, gen.sigma))
    return out


def solve_lyapunov(A: NDArray, Q: NDArray) -> NDArray[np.float64]:
    """Solve ``A X + X A^T + Q = 0`` by a direct Kronecker-product solve."""
    A = np.asarray(A, dtype=float)
    n = A.shape[0]
    eye = np.eye(n)
    # row-major vec: vec(A X) = (A kron I) vec X, vec(X A^T) = (I kron A) vec X
    L = np.kron(A, eye) + np.kron(eye, A)
    try:
        x = np.linalg.solve(L, -np.asarray(Q, dtype=float).ravel())
    except np.linalg.LinAlgError as exc:
        raise SingularLyapunov("Lyapunov operator is singular") from exc
    X = x.reshape(n, n)
    return 0.5 * (X + X.T)


def steady_state(gen: FPGenerator, residual_tol: float = 1e-10) -> GaussianState:
    """Stationary Gaussian state of a constant Hurwitz generator."""
    if not gen.is_constant:
        raise ValueError("steady state requires constant coefficients")
    A, K, D = gen.at(0.0)
    lam = np.linalg.eigvals(A)
    if np.max(lam.real) >= 0:
        raise NotHurwitz(f"drift matrix has eigenvalue with Re >= 0 (max Re = {np.max(lam.real):.3g})")
    F0 = solve_lyapunov(A, 2.0 * D)
    res = np.abs(A @ F0 + F0 @ A.T + 2.0 * D).max()
    scale = max(np.abs(2.0 * D).max(), np.abs(A).max() * np.abs(F0).max(), np.finfo(float).tiny)
    if res > residual_tol * scale:
        raise SingularLyapunov(f"Lyapunov residual {res:.3g} above tolerance")
    mean = -np.linalg.solve(A, K)
    return GaussianState(mean, F0, gen.hbar, gen.sigma)
