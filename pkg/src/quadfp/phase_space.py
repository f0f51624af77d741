"""Phase-space value types: symplectic forms, quadratic models, Gaussian states.

Coordinates are ordered subsystem-major.  A system split into groups of
``n_1, n_2, ...`` degrees of freedom uses

    q = (p_1..p_{n_1}, x_1..x_{n_1}, p_{n_1+1}..., x_{n_1+1}...)

so every group is a contiguous slice with momenta first.  The commutator
convention is ``[q_a, q_b] = -i hbar Sigma_ab``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy.linalg import block_diag

from .errors import (
    DimensionMismatch,
    InadmissibleState,
    InvalidModel,
    SingularCovariance,
    SingularTransform,
)

ADMISSIBILITY_TOL = 1e-10


def _frozen(a: ArrayLike, dtype=float) -> NDArray:
    arr = np.array(a, dtype=dtype, copy=True)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class SymplecticForm:
    """Antisymmetric, nondegenerate commutator matrix."""

    matrix: NDArray[np.float64]

    def __post_init__(self):
        m = _frozen(self.matrix)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] % 2:
            raise DimensionMismatch(f"symplectic form must be 2N x 2N, got {m.shape}")
        if not np.array_equal(m.T, -m):
            raise InvalidModel("symplectic form must be exactly antisymmetric")
        if abs(np.linalg.det(m)) <= 0.0:
            raise InvalidModel("symplectic form is degenerate")
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def n_dof(self) -> int:
        return self.dim // 2

    @property
    def inverse(self) -> NDArray[np.float64]:
        return np.linalg.inv(self.matrix)

    def block(self, start: int, stop: int) -> "SymplecticForm":
        """Diagonal block on phase-space indices ``start:stop``."""
        return SymplecticForm(self.matrix[start:stop, start:stop])


def standard_symplectic(n_dof: int) -> SymplecticForm:
    """``[[0, I], [-I, 0]]`` for the ordering (p_1..p_N, x_1..x_N)."""
    if n_dof < 1:
        raise ValueError("n_dof must be positive")
    eye = np.eye(n_dof)
    zero = np.zeros((n_dof, n_dof))
    return SymplecticForm(np.block([[zero, eye], [-eye, zero]]))


def grouped_symplectic(*group_dofs: int) -> SymplecticForm:
    """Block-diagonal form for subsystem-major ordering with the given groups."""
    return SymplecticForm(block_diag(*(standard_symplectic(n).matrix for n in group_dofs)))


def permutation_matrix(order: Sequence[int]) -> NDArray[np.float64]:
    """Matrix ``T`` with ``(T q)_k = q[order[k]]``."""
    order = list(order)
    if sorted(order) != list(range(len(order))):
        raise ValueError("order must be a permutation of range(n)")
    T = np.zeros((len(order), len(order)))
    T[np.arange(len(order)), order] = 1.0
    return T


def interleaved_order(n_dof: int) -> list[int]:
    """Index order taking (p_1..p_N, x_1..x_N) to (p_1, x_1, p_2, x_2, ...)."""
    return [k for j in range(n_dof) for k in (j, n_dof + j)]


@dataclass(frozen=True)
class QuadraticModel:
    """Closed system with Hamiltonian ``H = q B q / 2 + C q``.

    ``n_sub`` counts the subsystem degrees of freedom, which occupy the
    first ``2 n_sub`` phase-space components.  ``diagnostics`` carries
    flags a constructor wants downstream code to see, e.g.
    ``"unstable/indefinite energy"`` for negative masses.
    """

    B: NDArray[np.float64]
    C: NDArray[np.float64] | None = None
    sigma: SymplecticForm | None = None
    n_sub: int = 0
    hbar: float = 1.0
    labels: tuple[str, ...] | None = None
    diagnostics: tuple[str, ...] = ()

    def __post_init__(self):
        B = _frozen(self.B)
        if B.ndim != 2 or B.shape[0] != B.shape[1] or B.shape[0] % 2:
            raise DimensionMismatch(f"B must be 2N x 2N, got {B.shape}")
        if not np.allclose(B, B.T, rtol=0.0, atol=1e-14 * max(1.0, np.abs(B).max())):
            raise InvalidModel("B must be symmetric")
        B = _frozen(0.5 * (B + B.T))
        dim = B.shape[0]
        C = _frozen(np.zeros(dim) if self.C is None else self.C)
        if C.shape != (dim,):
            raise DimensionMismatch(f"C must have length {dim}, got {C.shape}")
        n_dof = dim // 2
        sigma = self.sigma
        if sigma is None:
            sigma = grouped_symplectic(self.n_sub, n_dof - self.n_sub) if 0 < self.n_sub < n_dof else standard_symplectic(n_dof)
        if sigma.dim != dim:
            raise DimensionMismatch("sigma and B dimensions differ")
        if not 0 <= self.n_sub <= n_dof:
            raise InvalidModel(f"n_sub must lie in [0, {n_dof}]")
        if not self.hbar > 0:
            raise InvalidModel("hbar must be positive")
        labels = self.labels or tuple(default_labels(n_dof, self.n_sub))
        if len(labels) != dim:
            raise DimensionMismatch("one label per phase-space component")
        object.__setattr__(self, "B", B)
        object.__setattr__(self, "C", C)
        object.__setattr__(self, "sigma", sigma)
        object.__setattr__(self, "labels", tuple(labels))

    @property
    def dim(self) -> int:
        return self.B.shape[0]

    @property
    def n_dof(self) -> int:
        return self.dim // 2

    @property
    def n_res(self) -> int:
        return self.n_dof - self.n_sub


def default_labels(n_dof: int, n_sub: int = 0) -> list[str]:
    """Coordinate names ``p1, x1, ...`` following the grouped ordering."""
    groups = [(0, n_sub), (n_sub, n_dof)] if 0 < n_sub < n_dof else [(0, n_dof)]
    labels = []
    for lo, hi in groups:
        labels += [f"p{k + 1}" for k in range(lo, hi)]
        labels += [f"x{k + 1}" for k in range(lo, hi)]
    return labels


@dataclass(frozen=True)
class AdmissibilityReport:
    """Verdict of a Hermitian nonnegativity test.

    ``passed`` holds iff ``min_eigenvalue >= -tolerance_used * max(scale, hbar)``.
    ``boundary`` flags verdicts whose minimum eigenvalue is zero within that
    same band (vacuum states, RWA equality cases).
    """

    min_eigenvalue: float
    scale: float
    passed: bool
    tolerance_used: float
    boundary: bool = False

    def as_dict(self) -> dict:
        return {
            "min_eigenvalue": self.min_eigenvalue,
            "scale": self.scale,
            "passed": self.passed,
            "tolerance_used": self.tolerance_used,
            "boundary": self.boundary,
        }


def hermitian_report(H: NDArray, hbar: float = 1.0, tol: float = ADMISSIBILITY_TOL) -> AdmissibilityReport:
    """Nonnegativity verdict for a Hermitian matrix."""
    H = np.asarray(H)
    H = 0.5 * (H + H.conj().T)
    eig = np.linalg.eigvalsh(H)
    scale = float(np.abs(eig).max()) if eig.size else 0.0
    band = tol * max(scale, hbar)
    lo = float(eig.min())
    return AdmissibilityReport(
        min_eigenvalue=lo,
        scale=scale,
        passed=lo >= -band,
        tolerance_used=tol,
        boundary=abs(lo) <= band,
    )


@dataclass(frozen=True)
class GaussianState:
    """Mean vector and symmetrized covariance matrix of a Gaussian state.

    ``sigma`` defaults to the standard form for ``len(mean) // 2`` degrees
    of freedom.  ``admissible`` is evaluated once at construction.
    """

    mean: NDArray[np.float64]
    cov: NDArray[np.float64]
    hbar: float = 1.0
    sigma: SymplecticForm | None = None
    admissible: bool = field(init=False, default=False)

    def __post_init__(self):
        mean = _frozen(self.mean)
        cov = np.array(self.cov, dtype=float)
        if mean.ndim != 1 or mean.size % 2:
            raise DimensionMismatch(f"mean must be a 2N vector, got shape {mean.shape}")
        if cov.shape != (mean.size, mean.size):
            raise DimensionMismatch(f"cov must be {mean.size} x {mean.size}, got {cov.shape}")
        scale = max(1.0, np.abs(cov).max())
        if not np.allclose(cov, cov.T, rtol=0.0, atol=1e-12 * scale):
            raise DimensionMismatch("cov must be symmetric")
        cov = _frozen(0.5 * (cov + cov.T))
        sigma = self.sigma or standard_symplectic(mean.size // 2)
        if sigma.dim != mean.size:
            raise DimensionMismatch("sigma does not match the state dimension")
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "cov", cov)
        object.__setattr__(self, "sigma", sigma)
        rep = hermitian_report(cov - 0.5j * self.hbar * sigma.matrix, self.hbar)
        object.__setattr__(self, "admissible", rep.passed)

    @property
    def dim(self) -> int:
        return self.mean.size

    @property
    def n_dof(self) -> int:
        return self.mean.size // 2

    def marginal(self, start: int, stop: int) -> "GaussianState":
        """Reduced state on phase-space indices ``start:stop``."""
        return GaussianState(
            self.mean[start:stop],
            self.cov[start:stop, start:stop],
            self.hbar,
            self.sigma.block(start, stop),
        )

    @classmethod
    def vacuum(cls, omega: float, mass: float = 1.0, hbar: float = 1.0, mean=None) -> "GaussianState":
        """Ground state of one oscillator in (p, x) ordering."""
        return cls.thermal(omega, 0.0, mass, hbar, mean)

    @classmethod
    def thermal(cls, omega: float, kT: float, mass: float = 1.0, hbar: float = 1.0, mean=None) -> "GaussianState":
        f = thermal_variance(omega, kT, hbar) / mass
        cov = np.diag([mass**2 * omega**2 * f, f])
        return cls(np.zeros(2) if mean is None else mean, cov, hbar)


def thermal_variance(omega: float, kT: float, hbar: float = 1.0) -> float:
    """Coordinate variance ``(hbar / 2 omega) coth(hbar omega / 2 kT)`` of a unit-mass oscillator."""
    if kT < 0:
        raise ValueError("temperature must be nonnegative")
    if kT == 0:
        return hbar / (2.0 * omega)
    return hbar / (2.0 * omega) / np.tanh(hbar * omega / (2.0 * kT))


def product_state(*states: GaussianState) -> GaussianState:
    """Uncorrelated joint state in grouped ordering."""
    hbar = states[0].hbar
    sigma = SymplecticForm(block_diag(*(s.sigma.matrix for s in states)))
    return GaussianState(
        np.concatenate([s.mean for s in states]),
        block_diag(*(s.cov for s in states)),
        hbar,
        sigma,
    )


def transform_frame(
    T: ArrayLike,
    sigma: SymplecticForm,
    A: ArrayLike | None = None,
    D: ArrayLike | None = None,
    tol: float = 1e-12,
) -> tuple[SymplecticForm, NDArray | None, NDArray | None]:
    """Change variables ``q' = T q``.

    Returns ``(T Sigma T^T, T A T^-1, T D T^T)``; the drift and diffusion
    entries are ``None`` when not supplied.
    """
    T = np.asarray(T, dtype=float)
    if T.shape != (sigma.dim, sigma.dim):
        raise DimensionMismatch(f"T must be {sigma.dim} x {sigma.dim}")
    cond = np.linalg.cond(T)
    if not np.isfinite(cond) or cond > 1.0 / tol:
        raise SingularTransform(f"transform is numerically singular (cond={cond:.3g})")
    S = T @ sigma.matrix @ T.T
    sigma_new = SymplecticForm(0.5 * (S - S.T))
    A_new = None if A is None else T @ np.asarray(A, dtype=float) @ np.linalg.inv(T)
    D_new = None
    if D is not None:
        D_new = T @ np.asarray(D, dtype=float) @ T.T
        D_new = 0.5 * (D_new + D_new.T)
    return sigma_new, A_new, D_new


def uncertainty_matrix(state: GaussianState, sigma: SymplecticForm | None = None) -> NDArray[np.complex128]:
    """``Phi = cov - (i hbar / 2) Sigma``."""
    sigma = sigma or state.sigma
    if sigma.dim != state.dim:
        raise DimensionMismatch("state and symplectic form dimensions differ")
    return state.cov - 0.5j * state.hbar * sigma.matrix


def check_state_admissible(
    state: GaussianState, sigma: SymplecticForm | None = None, tol: float = ADMISSIBILITY_TOL
) -> AdmissibilityReport:
    return hermitian_report(uncertainty_matrix(state, sigma), state.hbar, tol)


def purity(state: GaussianState, tol: float = ADMISSIBILITY_TOL) -> float:
    """``Tr rho^2 = (hbar/2)^M (det cov)^(-1/2)`` for M degrees of freedom."""
    sign, logdet = np.linalg.slogdet(state.cov)
    if sign <= 0:
        raise InadmissibleState("covariance is not positive definite")
    M = state.n_dof
    log_mu = M * np.log(state.hbar / 2.0) - 0.5 * logdet
    if log_mu > tol:
        raise InadmissibleState(f"det cov below (hbar/2)^(2M): purity would be {np.exp(log_mu):.6g}")
    return float(np.exp(log_mu))


def evaluate_wigner(state: GaussianState, point: ArrayLike) -> float:
    """Gaussian Wigner function, normalized against ``dq / (2 pi hbar)^N``."""
    point = np.asarray(point, dtype=float)
    if point.shape != state.mean.shape:
        raise DimensionMismatch("point and state dimensions differ")
    try:
        L = np.linalg.cholesky(state.cov)
    except np.linalg.LinAlgError as exc:
        raise SingularCovariance("covariance is not positive definite") from exc
    y = np.linalg.solve(L, point - state.mean)
    log_det = 2.0 * np.log(np.diag(L)).sum()
    return float(state.hbar**state.n_dof * np.exp(-0.5 * log_det - 0.5 * y @ y))
