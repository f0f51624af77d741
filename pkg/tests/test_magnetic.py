import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from quadfp.errors import InvalidModel
from quadfp.fokker_planck import admissibility, steady_state
from quadfp.models.magnetic import (
    MagneticSpec,
    diffusion_coefficients,
    diffusion_coefficients_hyperbolic,
    equilibrium_covariance,
    equilibrium_covariance_hyperbolic,
    high_temperature_coefficients,
    magnetic_drift,
    magnetic_model,
    magnetic_sigma,
)
from quadfp.phase_space import GaussianState, check_state_admissible


def random_spec(rng, beta=None):
    m = rng.uniform(0.5, 2.0)
    w0 = rng.uniform(0.3, 2.0)
    wc = rng.uniform(0.0, 3.0)
    Om = np.hypot(wc, 2 * w0)
    if beta is None:
        beta = np.inf if rng.random() < 0.2 else 10 ** rng.uniform(-3, 3) / Om
    return MagneticSpec(m, w0, wc, rng.uniform(0, 0.2), rng.uniform(0, 0.2), beta, hbar=rng.uniform(0.5, 1.5))


def test_spec_validation():
    with pytest.raises(InvalidModel):
        MagneticSpec(-1.0, 1.0, 1.0, 0.1, 0.1)
    with pytest.raises(InvalidModel):
        MagneticSpec(1.0, 0.0, 0.0, 0.1, 0.1)
    with pytest.raises(InvalidModel):
        MagneticSpec(1.0, 1.0, 1.0, -0.1, 0.1)
    with pytest.raises(InvalidModel):
        MagneticSpec(1.0, 1.0, 1.0, 0.1, 0.1, beta=0.0)


def test_normal_modes():
    s = MagneticSpec(1.0, 1.3, 0.7, 0.1, 0.2)
    assert s.Omega == pytest.approx(np.sqrt(0.49 + 4 * 1.69))
    assert s.omega_plus * s.omega_minus == pytest.approx(1.69, rel=1e-14)
    assert s.omega_plus - s.omega_minus == pytest.approx(0.7, rel=1e-12)


def test_sigma_commutators():
    S = magnetic_sigma(1.5, 0.8).matrix
    # [pi_x, pi_y] = i hbar m omega_c  <=>  Sigma_{pi_x pi_y} = -m omega_c
    assert S[0, 1] == pytest.approx(-1.2) and S[0, 2] == 1.0 and np.array_equal(S, -S.T)


def test_drift_equal_damping_matches_closed_form():
    m, w0, wc, g0 = 1.2, 0.9, 0.6, 0.05
    A = magnetic_drift(MagneticSpec(m, w0, wc, g0, g0))
    k = m * w0**2
    expected = np.array(
        [[-g0, wc, -k, 0], [-wc, -g0, 0, -k], [1 / m, 0, -g0, 0], [0, 1 / m, 0, -g0]]
    )
    assert np.allclose(A, expected, atol=1e-15)


def test_equal_damping_diffusion():
    m, w0, wc, g0, beta, hbar = 1.2, 0.9, 0.6, 0.05, 1.7, 0.8
    s = MagneticSpec(m, w0, wc, g0, g0, beta, hbar)
    Om = s.Omega
    tO, tw = 0.5 * beta * hbar * Om, 0.5 * beta * hbar * wc
    Q = np.cosh(tO) - np.cosh(tw)
    d_pi = m * hbar * g0 / (2 * Om * Q) * ((wc**2 + 2 * w0**2) * np.sinh(tO) - wc * Om * np.sinh(tw))
    d_a = hbar * g0 / (2 * Om * Q) * (wc * np.sinh(tO) - Om * np.sinh(tw))
    d_rho = hbar * g0 / (m * Om * Q) * np.sinh(tO)
    assert np.allclose(diffusion_coefficients(s), (d_pi, d_a, d_rho), rtol=1e-12)


def test_equilibrium_closed_form():
    s = MagneticSpec(1.1, 0.8, 1.4, 0.05, 0.02, beta=0.9, hbar=1.2)
    M = equilibrium_covariance(s)
    assert np.allclose(M, equilibrium_covariance_hyperbolic(s), rtol=1e-12)
    assert M[0, 3] == M[3, 0] == -M[1, 2] and M[0, 0] == M[1, 1] and M[2, 2] == M[3, 3]


@given(st.integers(0, 2**32 - 1))
def test_coth_and_hyperbolic_forms_agree(seed):
    rng = np.random.default_rng(seed)
    s = random_spec(rng)
    if np.isinf(s.beta) or s.beta * s.hbar * s.Omega > 500:
        return
    assert np.allclose(diffusion_coefficients(s), diffusion_coefficients_hyperbolic(s), rtol=1e-9, atol=0)
    # the sinh / Q form cancels in the off-diagonal entry at small beta; compare at matrix scale
    M = equilibrium_covariance(s)
    assert np.allclose(M, equilibrium_covariance_hyperbolic(s), rtol=1e-9, atol=1e-9 * np.abs(M).max())


def test_hyperbolic_form_domain():
    with pytest.raises(ValueError):
        diffusion_coefficients_hyperbolic(MagneticSpec(1.0, 1.0, 1.0, 0.1, 0.1))


@given(st.integers(0, 2**32 - 1))
def test_lyapunov_residual(seed):
    s = random_spec(np.random.default_rng(seed))
    mm = magnetic_model(s)
    A, _, D = mm.generator.at(0.0)
    M = mm.equilibrium
    res = np.abs(A @ M + M @ A.T + 2 * D).max()
    assert res <= 1e-10 * max(np.abs(2 * D).max(), 1e-300)


@given(st.integers(0, 2**32 - 1))
def test_equilibrium_admissible(seed):
    s = random_spec(np.random.default_rng(seed))
    st_ = GaussianState(np.zeros(4), equilibrium_covariance(s), s.hbar, magnetic_sigma(s.m, s.omega_c))
    assert check_state_admissible(st_).passed


def test_zero_temperature_equilibrium_is_pure():
    s = MagneticSpec(1.0, 0.7, 0.5, 0.1, 0.1, hbar=1.0)
    st_ = GaussianState(np.zeros(4), equilibrium_covariance(s), 1.0, magnetic_sigma(1.0, 0.5))
    rep = check_state_admissible(st_)
    assert rep.passed and rep.boundary


def test_steady_state_recovers_equilibrium(rng):
    for _ in range(20):
        s = random_spec(rng)
        if s.gamma_plus == 0 or s.gamma_minus == 0:
            continue
        mm = magnetic_model(s)
        ss = steady_state(mm.generator)
        assert np.allclose(ss.cov, mm.equilibrium, rtol=1e-9, atol=1e-9 * np.abs(mm.equilibrium).max())


def test_high_temperature_limits():
    s0 = MagneticSpec(1.3, 0.8, 0.6, 0.07, 0.03, hbar=1.0)
    beta = 1e-3 / (s0.hbar * s0.Omega)
    s = MagneticSpec(s0.m, s0.omega0, s0.omega_c, s0.gamma_plus, s0.gamma_minus, beta, s0.hbar)
    got = diffusion_coefficients(s)
    hi = high_temperature_coefficients(s)
    for a, b in zip(got, hi):
        assert a == pytest.approx(b, rel=1e-2)
    assert hi[0] == pytest.approx(s.m * s.alpha / beta)


def test_free_particle_limit():
    m, wc, g, beta, hbar = 1.4, 0.9, 0.05, 2.0, 1.1
    s = MagneticSpec(m, 0.0, wc, g, 0.0, beta, hbar)
    assert s.Omega == wc and s.omega_plus == wc and s.omega_minus == 0
    assert s.alpha == g and s.eta == 0 and s.epsilon == -g / wc
    cw = 1 / np.tanh(0.5 * beta * hbar * wc)
    d_pi, d_a, d_rho = diffusion_coefficients(s)
    assert d_pi == pytest.approx(0.5 * g * m * hbar * wc * cw, rel=1e-14)
    assert d_a == pytest.approx(0.5 * g * hbar * cw, rel=1e-14)
    assert d_rho == pytest.approx(g * hbar / (2 * m * wc) * cw, rel=1e-14)


def test_second_order_equations():
    # exact derivatives of the mean from the drift satisfy the coupled second-order equations
    s = MagneticSpec(1.0, 0.8, 0.6, 0.07, 0.03)
    A = magnetic_drift(s)
    gp, gm, wp, wm, wc, w0 = s.gamma_plus, s.gamma_minus, s.omega_plus, s.omega_minus, s.omega_c, s.omega0
    rng = np.random.default_rng(5)
    for _ in range(5):
        q = rng.normal(size=4)
        dq, ddq = A @ q, A @ A @ q
        x, y, xd, yd, xdd, ydd = q[2], q[3], dq[2], dq[3], ddq[2], ddq[3]
        c = gm * wp - gp * wm
        e1 = xdd + (gm + gp) * xd - wc * yd + (w0**2 + gm * gp) * x - c * y
        e2 = ydd + (gm + gp) * yd + wc * xd + (w0**2 + gm * gp) * y + c * x
        assert abs(e1) < 1e-12 and abs(e2) < 1e-12


def test_generator_admissible_at_equilibrium_temperatures(rng):
    for _ in range(20):
        s = random_spec(rng)
        assert admissibility(magnetic_model(s).generator).passed


def test_from_density():
    s = MagneticSpec.from_density(1.0, 0.8, 0.6, nu=lambda w: 2.0, delta=lambda w: 0.1 + 0.05j * w)
    ref = MagneticSpec(1.0, 0.8, 0.6, 0, 0)
    wp, wm = ref.omega_plus, ref.omega_minus
    assert s.gamma_plus == pytest.approx(2 * np.pi * (0.01 + 0.0025 * wp**2))
    assert s.gamma_minus == pytest.approx(2 * np.pi * (0.01 + 0.0025 * wm**2))
