import numpy as np
import pytest
from hypothesis import settings
from scipy.linalg import expm

from quadfp.phase_space import GaussianState, QuadraticModel, SymplecticForm, standard_symplectic

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


def random_model(rng, n_dof, n_sub=0, hbar=1.0, with_C=False, scale=1.0):
    X = rng.normal(size=(2 * n_dof, 2 * n_dof)) * scale
    B = 0.5 * (X + X.T)
    C = rng.normal(size=2 * n_dof) if with_C else None
    return QuadraticModel(B, C, n_sub=n_sub, hbar=hbar)


def random_symplectic(rng, sigma: SymplecticForm, scale=0.5):
    """``expm(Sigma H)`` for random symmetric ``H`` preserves ``Sigma``."""
    n = sigma.dim
    X = rng.normal(size=(n, n)) * scale
    return expm(sigma.matrix @ (0.5 * (X + X.T)))


def random_admissible_state(rng, n_dof, hbar=1.0, sigma=None, mixed=True):
    """``(hbar/2) S diag(nu, nu) S^T`` with ``nu >= 1`` and symplectic ``S``."""
    sigma = sigma or standard_symplectic(n_dof)
    S = random_symplectic(rng, sigma)
    nu = 1.0 + (rng.exponential(size=n_dof) if mixed else np.zeros(n_dof))
    cov = 0.5 * hbar * S @ np.diag(np.concatenate([nu, nu])) @ S.T
    return GaussianState(rng.normal(size=2 * n_dof), cov, hbar, sigma)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
