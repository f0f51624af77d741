import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.integrate import quad

from quadfp.errors import PVNotConverged, WindowExcludesResonance
from quadfp.models.continuum import (
    ContinuumBath,
    continuum_fp,
    principal_value,
    rwa_damping,
    rwa_gate,
    zero_temperature_violation,
)


def cauchy_oracle(phi, w0, a, b):
    val, _ = quad(lambda w: phi(w) / (w + w0), a, b, weight="cauchy", wvar=w0, epsabs=1e-14, epsrel=1e-13, limit=200)
    return val


@pytest.mark.parametrize(
    "phi",
    [
        lambda w: np.ones_like(w),
        lambda w: w**2 * np.exp(-w),
        lambda w: np.cos(3 * w) + 0.5 * w,
    ],
)
@pytest.mark.parametrize("window", [(0.3, 2.5), (0.9, 1.1), (0.5, 4.0)])
def test_pv_against_cauchy(phi, window):
    w0 = 1.0
    ref = cauchy_oracle(phi, w0, *window)
    val = principal_value(phi, w0, *window)
    assert val == pytest.approx(ref, rel=1e-9, abs=1e-12)


def test_pv_window_errors():
    with pytest.raises(WindowExcludesResonance):
        principal_value(np.ones_like, 3.0, 0.5, 2.0)
    with pytest.raises(PVNotConverged):
        principal_value(lambda w: np.sin(400 * w**2), 1.0, 0.5, 2.0, rtol=1e-15, max_level=3)


def test_continuum_window_error():
    bath = ContinuumBath(1.0, 0.5, 2.0, g=0.1)
    with pytest.raises(WindowExcludesResonance):
        continuum_fp(bath, 2.5)


def test_zero_coupling():
    c = continuum_fp(ContinuumBath(3.0, 0.5, 2.0), 1.0)
    assert not c.mu.any() and not c.D.any() and c.gamma == 0


def cancellation_bath(w0=1.0, half=0.5, f=2.0, hbar=1.0):
    """``v = z = 0`` with ``g = sqrt(w) a(x)``, ``u = sqrt(w) b(x)`` and ``nu, f, a, b`` even in ``x - x0``."""
    x0 = w0**2

    def even(c0, c2):
        return lambda w: c0 + c2 * (np.asarray(w) ** 2 - x0) ** 2

    a, b = even(0.12, 0.3), even(0.07, -0.1)
    return ContinuumBath(
        nu=even(4.0, 2.0),
        omega_min=np.sqrt(x0 - half),
        omega_max=np.sqrt(x0 + half),
        g=lambda w: np.sqrt(w) * a(w),
        u=lambda w: np.sqrt(w) * b(w),
        f=even(f, 0.5),
        hbar=hbar,
    )


def test_cancellation_hypothesis_proportionalities():
    w0 = 1.0
    bath = cancellation_bath(w0)
    c = continuum_fp(bath, w0)
    mag = max(np.abs(c.mu).max(), 1.0)
    assert max(abs(v) for v in c.pv.values()) <= 1e-12 * mag
    f0 = float(bath.fns["f"](w0))
    mu, D = c.mu, c.D
    assert D[0, 0] == pytest.approx(-(w0**2) * f0 * mu[0, 0], rel=1e-9)
    assert D[1, 1] == pytest.approx(-f0 * mu[1, 1], rel=1e-9)
    assert D[0, 1] == pytest.approx(-f0 * mu[0, 1], rel=1e-9)
    assert D[0, 1] == pytest.approx(-(w0**2) * f0 * mu[1, 0], rel=1e-9)
    assert c.gamma == pytest.approx(-0.5 * np.trace(mu), rel=1e-12)


def test_rwa_flat_case():
    w0, nu, u0, g0 = 1.2, 3.0, 0.04, 0.07
    bath = ContinuumBath(nu, w0 - 0.2, w0 + 0.2, z=g0 / w0**2, v=-u0, u=u0, g=g0)
    c = continuum_fp(bath, w0)
    gamma = rwa_damping(w0, nu, u0, g0)
    assert gamma == pytest.approx(np.pi * nu * (u0**2 + g0**2 / w0**2))
    assert c.gamma == pytest.approx(gamma, rel=1e-12)
    # constant couplings leave kappa(w) nonzero off resonance, so the diagonal form
    # holds for the on-resonance parts; the principal-value terms enter separately
    pv = c.pv
    assert c.mu[0, 0] - pv["kappa"] == pytest.approx(-gamma, rel=1e-12)
    assert c.mu[1, 1] + pv["kappa"] == pytest.approx(-gamma, rel=1e-12)
    assert abs(c.mu[0, 1] - pv["mu12"]) < 1e-15 and abs(c.mu[1, 0] + pv["mu21"]) < 1e-15
    assert c.mu[0, 0] + c.mu[1, 1] == pytest.approx(-2 * gamma, rel=1e-12)


def rwa_everywhere(w0=1.0):
    def g(w):
        return 0.1 * np.asarray(w)

    def u(w):
        return 0.05 + 0.02 * np.asarray(w)

    return ContinuumBath(
        nu=lambda w: 2.0 + np.asarray(w),
        omega_min=0.4,
        omega_max=2.5,
        z=lambda w: g(w) / np.asarray(w) ** 2,
        v=lambda w: -u(w),
        u=u,
        g=g,
        f=lambda w: 0.5 / np.tanh(0.5 * np.asarray(w) / 0.3) / np.asarray(w),
    )


def test_rwa_at_all_frequencies():
    w0 = 1.0
    bath = rwa_everywhere(w0)
    c = continuum_fp(bath, w0)
    mu, D = c.mu, c.D
    c0 = bath.at(w0)
    f0 = float(c0["f"][()])
    assert abs(bath.at(np.linspace(0.5, 2, 7))["kappa"]).max() < 1e-15
    assert D[0, 0] == pytest.approx(w0**2 * D[1, 1], rel=1e-8)
    assert D[1, 1] == pytest.approx(c.gamma * f0, rel=1e-8)
    assert mu[0, 0] == pytest.approx(-c.gamma, rel=1e-10) and mu[1, 1] == pytest.approx(-c.gamma, rel=1e-10)

    def nd(w):
        x = bath.at(w)
        return x["nu"] * x["delta"]

    ref12 = cauchy_oracle(lambda w: nd(w) * (w0**2 + w**2), w0, bath.omega_min, bath.omega_max)
    ref21 = cauchy_oracle(nd, w0, bath.omega_min, bath.omega_max)
    assert mu[0, 1] == pytest.approx(ref12, rel=1e-8)
    # G = w^2 Z = w Delta doubles the integrand of mu21 relative to the printed form
    assert mu[1, 0] == pytest.approx(-2 * ref21, rel=1e-8)

    def f_gamma(w):
        x = bath.at(w)
        return x["f"] * np.pi * x["nu"] * x["delta"]

    d12, _ = quad(f_gamma, bath.omega_min, bath.omega_max, epsabs=1e-14, epsrel=1e-12)
    assert D[0, 1] == pytest.approx(-d12 / np.pi, rel=1e-8)
    assert D[0, 1] < 0


def test_omega_star_variants():
    # the bracket presumes mu12 = w0^2 mu21, i.e. vanishing integrals
    w0 = 1.0
    c = continuum_fp(cancellation_bath(w0), w0)
    assert c.mu[0, 1] == pytest.approx(w0**2 * c.mu[1, 0], rel=1e-9)
    assert c.omega_star == pytest.approx(np.sqrt(c.omega_star_bracket))
    ev = np.linalg.eigvals(c.A)
    assert abs(ev[0].imag) == pytest.approx(c.omega_star, rel=1e-10)


def test_gate_rwa_passes_with_equality():
    w0 = 1.3
    for g, u in [(0.2, 0.1), (0.0, 0.3), (0.5, 0.0), (-0.2, 0.4)]:
        res = rwa_gate(w0, g / w0**2, -u, u, g)
        assert res.passed
        assert zero_temperature_violation(w0, g / w0**2, -u, u, g) <= 1e-12 * (u**2 + g**2)
        assert res.lhs == pytest.approx(res.rhs, rel=1e-12)


@pytest.mark.parametrize("which", ["z", "v", "u", "g"])
def test_gate_single_coupling_fails(which):
    c = dict(z=0.0, v=0.0, u=0.0, g=0.0)
    c[which] = 0.3
    assert not rwa_gate(1.1, **c).passed


def test_gate_delta_zero_fails():
    # g-only coupling: Delta = 0 but G > 0
    res = rwa_gate(1.0, 0.0, 0.0, 0.0, 0.5)
    assert not res.passed and res.lhs == 0 and res.rhs > 0


@given(
    st.floats(-1, 1), st.floats(-1, 1), st.floats(-1, 1), st.floats(-1, 1), st.floats(0.3, 3.0)
)
def test_gate_pass_set_is_rwa(z, v, u, g, w0):
    res = rwa_gate(w0, z, v, u, g)
    viol = zero_temperature_violation(w0, z, v, u, g)
    scale = u**2 + v**2 + (w0 * z) ** 2 + (g / w0) ** 2
    if scale == 0:
        return
    assert res.passed == (viol <= 1e-12 * scale)
    if res.passed:
        assert abs(u + v) <= 1e-5 * np.sqrt(scale) and abs(w0 * z - g / w0) <= 1e-5 * np.sqrt(scale)


def test_gate_high_temperature_passes():
    # non-RWA coupling with Delta > 0 passes once f0 is large
    w0, z, v, u, g = 1.0, 0.1, 0.05, 0.2, 0.3
    assert g * z - u * v > 0
    assert not rwa_gate(w0, z, v, u, g).passed
    assert rwa_gate(w0, z, v, u, g, f0=100.0).passed


def test_gate_rejects_sub_vacuum_f0():
    with pytest.raises(ValueError):
        rwa_gate(1.0, 0.0, 0.0, 0.1, 0.0, f0=0.1)
