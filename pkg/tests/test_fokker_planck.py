import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.linalg import solve_continuous_lyapunov, sqrtm

from conftest import random_admissible_state, random_model
from quadfp.dynamics import closed_trajectory, drift_from_hamiltonian
from quadfp.errors import DimensionMismatch, NotHurwitz, WrongDimension
from quadfp.fokker_planck import (
    FPGenerator,
    admissibility,
    dstar_matrix,
    evolve_moments,
    min_diffusion_bound_1d,
    solve_lyapunov,
    steady_state,
)
from quadfp.phase_space import GaussianState, check_state_admissible, standard_symplectic

S1 = standard_symplectic(1)


def damped(gamma, w0=1.0, D=None, hbar=1.0):
    A = np.array([[-2 * gamma, -(w0**2)], [1.0, 0.0]])
    return FPGenerator(A, None, np.zeros((2, 2)) if D is None else np.asarray(D, float), S1, hbar)


def test_generator_validation():
    with pytest.raises(DimensionMismatch):
        FPGenerator(np.eye(2), None, np.eye(3), S1)
    with pytest.raises(DimensionMismatch):
        FPGenerator(np.eye(2), None, np.array([[1.0, 0.5], [0.0, 1.0]]), S1)


def test_hamiltonian_dstar_zero():
    model = random_model(np.random.default_rng(0), 2)
    A, _ = drift_from_hamiltonian(model)
    gen = FPGenerator(A, None, np.zeros((4, 4)), model.sigma)
    assert np.abs(dstar_matrix(gen)).max() < 1e-14
    rep = admissibility(gen)
    assert rep.passed and rep.boundary


def test_damped_boundary_instance():
    rep = admissibility(damped(0.1, D=np.diag([0.05, 0.05])))
    assert rep.min_eigenvalue == pytest.approx(0.0, abs=1e-15)
    assert rep.passed and rep.boundary


def test_damped_dp_only_fails():
    assert not admissibility(damped(0.1, D=np.diag([0.3, 0.0]))).passed


@pytest.mark.parametrize("Dp,Dx,Dpx,gamma,ok", [(0.2, 0.2, 0.0, 0.3, True), (0.2, 0.1, 0.05, 0.3, False)])
def test_damped_law(Dp, Dx, Dpx, gamma, ok):
    gen = damped(gamma, D=[[Dp, Dpx], [Dpx, Dx]])
    assert admissibility(gen).passed is ok
    assert (Dp * Dx - Dpx**2 - gamma**2 / 4 >= 0) is ok


def test_min_diffusion_bound():
    g = 0.2
    detD, bound, ok = min_diffusion_bound_1d(damped(g, D=np.diag([g / 2, g / 2])))
    assert detD == pytest.approx(bound) and ok
    _, _, ok = min_diffusion_bound_1d(damped(g, D=np.diag([g / 2, 0.0])))
    assert not ok
    gen = FPGenerator(np.array([[0.0, -1.0], [1.0, 0.0]]), None, np.zeros((2, 2)), S1)
    detD, bound, ok = min_diffusion_bound_1d(gen)
    assert bound == 0 and ok
    with pytest.raises(WrongDimension):
        min_diffusion_bound_1d(FPGenerator(np.zeros((4, 4)), None, np.zeros((4, 4)), standard_symplectic(2)))


def test_moments_match_closed_flow(rng):
    model = random_model(rng, 2, scale=0.5)
    A, _ = drift_from_hamiltonian(model)
    gen = FPGenerator(A, None, np.zeros((4, 4)), model.sigma)
    s = random_admissible_state(rng, 2)
    ts = np.linspace(0, 2, 5)
    for a, b in zip(evolve_moments(gen, s, ts), closed_trajectory(model, s, ts)):
        assert np.allclose(a.cov, b.cov, atol=1e-9 * np.abs(b.cov).max())
        assert np.allclose(a.mean, b.mean, atol=1e-9 * max(1, np.abs(b.mean).max()))


def test_uncertainty_violation_slope():
    gamma, hbar = 0.1, 1.0
    gen = damped(gamma, hbar=hbar)
    s = GaussianState(np.zeros(2), np.diag([hbar / 2, hbar / 2]), hbar)
    alpha = np.array([1j, 1.0])
    h = 1e-4
    traj = evolve_moments(gen, s, [0.0, h, 2 * h])
    vals = [np.real(alpha.conj() @ (st.cov - 0.5j * hbar * S1.matrix) @ alpha) for st in traj]
    slope = (-3 * vals[0] + 4 * vals[1] - vals[2]) / (2 * h)
    assert slope == pytest.approx(-2 * hbar * gamma, rel=1e-3)
    assert not check_state_admissible(traj[-1]).passed


def test_necessity_eigenvector_construction():
    # for D* with a negative eigenvalue, start from the pure state whose Phi
    # annihilates the offending direction; Phi then turns negative at small t
    gamma, hbar = 0.2, 1.0
    gen = damped(gamma, D=np.diag([0.02, 0.02]), hbar=hbar)
    assert not admissibility(gen).passed
    s = GaussianState(np.zeros(2), np.diag([hbar / 2, hbar / 2]), hbar)
    end = evolve_moments(gen, s, [0.0, 1e-3])[-1]
    assert check_state_admissible(end).min_eigenvalue < 0


def test_lyapunov_against_scipy(rng):
    for n in (2, 4, 6, 8):
        X = rng.normal(size=(n, n))
        A = X - (np.abs(np.linalg.eigvals(X).real).max() + 0.5) * np.eye(n)
        Y = rng.normal(size=(n, n))
        Q = Y @ Y.T
        assert np.allclose(solve_lyapunov(A, Q), solve_continuous_lyapunov(A, -Q), atol=1e-10 * np.abs(Q).max())


def test_steady_state_rwa_oscillator():
    w0, gamma, f0 = 1.3, 0.1, 0.6
    A = np.array([[-gamma, -(w0**2)], [1.0, -gamma]])
    D = np.diag([gamma * w0**2 * f0, gamma * f0])
    ss = steady_state(FPGenerator(A, np.zeros(2), D, S1))
    assert np.allclose(ss.cov, np.diag([w0**2 * f0, f0]), atol=1e-13)


def test_steady_state_mean():
    A = np.array([[-0.5, -1.0], [1.0, -0.5]])
    K = np.array([0.2, -0.1])
    ss = steady_state(FPGenerator(A, K, 0.1 * np.eye(2), S1))
    assert np.allclose(A @ ss.mean + K, 0)


def test_not_hurwitz():
    with pytest.raises(NotHurwitz):
        steady_state(FPGenerator(np.array([[0.0, 0.0], [1.0, 0.0]]), None, np.eye(2), S1))


def test_time_dependent_generator():
    gen = FPGenerator(lambda t: np.array([[-t, 0.0], [0.0, -t]]), None, np.zeros((2, 2)), S1)
    assert not gen.is_constant
    out = evolve_moments(gen, GaussianState(np.ones(2), np.eye(2)), [0.0, 1.0])
    assert np.allclose(out[-1].mean, np.exp(-0.5))


def _admissible_generator(rng, n, hbar=1.0):
    S = standard_symplectic(n).matrix
    A = rng.normal(size=(2 * n, 2 * n))
    K = A @ S + S @ A.T
    X = rng.normal(size=(2 * n, 2 * n))
    D = 0.25 * hbar * np.real(sqrtm(K.T @ K)) + rng.uniform(0, 0.3) * X @ X.T
    return FPGenerator(A, rng.normal(size=2 * n), 0.5 * (D + D.T), standard_symplectic(n), hbar)


@given(st.integers(0, 2**32 - 1), st.sampled_from([1, 2]))
def test_sufficiency_property(seed, n):
    rng = np.random.default_rng(seed)
    gen = _admissible_generator(rng, n)
    assert admissibility(gen).passed
    s = random_admissible_state(rng, n)
    A, _, _ = gen.at(0)
    T = 10 / np.linalg.norm(A, 2)
    for out in evolve_moments(gen, s, np.linspace(0, T, 15)):
        rep = check_state_admissible(out)
        assert rep.min_eigenvalue >= -1e-8 * max(rep.scale, 1.0)


@given(st.integers(0, 2**32 - 1))
def test_steady_state_is_fixed_point(seed):
    rng = np.random.default_rng(seed)
    X = rng.normal(size=(4, 4))
    A = X - (np.abs(np.linalg.eigvals(X).real).max() + 0.3) * np.eye(4)
    Y = rng.normal(size=(4, 4))
    gen = FPGenerator(A, rng.normal(size=4), Y @ Y.T, standard_symplectic(2))
    ss = steady_state(gen)
    end = evolve_moments(gen, ss, [0.0, 5.0])[-1]
    assert np.allclose(end.cov, ss.cov, atol=1e-8 * np.abs(ss.cov).max())
    assert np.allclose(end.mean, ss.mean, atol=1e-8 * max(1, np.abs(ss.mean).max()))


def test_convergence_to_steady_state():
    A = np.array([[-0.4, -1.0], [1.0, -0.4]])
    gen = FPGenerator(A, None, 0.2 * np.eye(2), S1)
    ss = steady_state(gen)
    T = 30 / 0.4
    end = evolve_moments(gen, GaussianState(np.ones(2), np.eye(2)), [0.0, T])[-1]
    assert np.allclose(end.cov, ss.cov, atol=1e-8)
