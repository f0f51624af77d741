"""Two coupled oscillators and Bateman's dual (mirror) oscillator.

Phase-space ordering is ``(p1, x1, p2, x2)``; oscillator 1 is the subsystem.
"""

from __future__ import annotations

import cmath
import warnings
from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from ..errors import InvalidModel, UnsupportedCouplingPattern
from ..phase_space import QuadraticModel

UNSTABLE_FLAG = "unstable/indefinite energy"


@dataclass(frozen=True)
class CoupledPairSpec:
    """Free oscillators plus ``g_pp p1 p2 + g_px p1 x2 + g_xp x1 p2 + g_xx x1 x2``.

    Masses may be negative (the opposite-mass model); such models are
    flagged, never rejected.
    """

    m1: float
    m2: float
    omega1: float
    omega2: float
    g_pp: float = 0.0
    g_px: float = 0.0
    g_xp: float = 0.0
    g_xx: float = 0.0

    def __post_init__(self):
        if self.m1 * self.m2 == 0:
            raise InvalidModel("masses must be nonzero")

    @property
    def delta(self) -> float:
        """Determinant of the coupling block of the drift matrix."""
        return self.g_pp * self.g_xx - self.g_px * self.g_xp

    @property
    def g(self) -> float:
        m1, m2, w1, w2 = self.m1, self.m2, self.omega1, self.omega2
        return (
            self.g_xx**2 / (m1 * m2)
            + m1 / m2 * w1**2 * self.g_px**2
            + m2 / m1 * w2**2 * self.g_xp**2
            + m1 * m2 * w1**2 * w2**2 * self.g_pp**2
        )


def coupled_pair(spec: CoupledPairSpec, hbar: float = 1.0, C=None) -> QuadraticModel:
    m1, m2, w1, w2 = spec.m1, spec.m2, spec.omega1, spec.omega2
    # H = q B q / 2 with q = (p1, x1, p2, x2)
    B = np.array(
        [
            [1 / m1, 0.0, spec.g_pp, spec.g_px],
            [0.0, m1 * w1**2, spec.g_xp, spec.g_xx],
            [spec.g_pp, spec.g_xp, 1 / m2, 0.0],
            [spec.g_px, spec.g_xx, 0.0, m2 * w2**2],
        ]
    )
    diagnostics = ()
    if m1 < 0 or m2 < 0:
        diagnostics = (UNSTABLE_FLAG,)
        warnings.warn(f"negative mass in coupled pair ({m1}, {m2}): {UNSTABLE_FLAG}", RuntimeWarning, stacklevel=2)
    return QuadraticModel(B, C, n_sub=1, hbar=hbar, labels=("p1", "x1", "p2", "x2"), diagnostics=diagnostics)


def normal_frequencies(spec: CoupledPairSpec) -> NDArray[np.complex128]:
    """``[w+, -w+, w-, -w-]`` from the closed-form roots of the biquadratic."""
    w1s, w2s = spec.omega1**2, spec.omega2**2
    d = spec.delta
    P = cmath.sqrt(w1s * w2s + d * d - spec.g)
    half_sum = 0.5 * (w1s + w2s)
    a = cmath.sqrt(half_sum + P + d)
    b = cmath.sqrt(half_sum - P + d)
    wp = (a + b) / np.sqrt(2.0)
    wm = (a - b) / np.sqrt(2.0)
    return np.array([wp, -wp, wm, -wm])


def normal_frequencies_from_drift(spec: CoupledPairSpec) -> NDArray[np.complex128]:
    """``i`` times the eigenvalues of the drift matrix."""
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        model = coupled_pair(spec)
    A = -model.sigma.matrix @ model.B
    return 1j * np.linalg.eigvals(A)


def _unstable_pair_frequencies(spec: CoupledPairSpec) -> tuple[float, float, float, float]:
    d2 = 0.25 * (spec.omega1**2 - spec.omega2**2) ** 2
    root = np.sqrt(spec.g + d2)
    s = 0.5 * (spec.omega1**2 + spec.omega2**2)
    omega = np.sqrt(root + s)
    lam = np.sqrt(root - s)
    rho_plus = 0.5 + 0.25 * (spec.omega1**2 - spec.omega2**2) / root
    return omega, lam, rho_plus, 1.0 - rho_plus


def unstable_frequencies(spec: CoupledPairSpec) -> tuple[float, float]:
    """Real frequency and growth rate ``(w, lambda)`` for ``Delta = 0, g > w1^2 w2^2``."""
    omega, lam, _, _ = _unstable_pair_frequencies(spec)
    return omega, lam


def coupled_pair_R11_closed_form(spec: CoupledPairSpec, t: float) -> NDArray[np.float64]:
    """Subsystem block of the propagator in the unstable regime.

    Covers coordinate coupling (``g_xx`` with optional ``g_xp``) and
    momentum coupling (``g_pp`` with ``g_px``), both with ``Delta = 0`` and
    ``g > w1^2 w2^2``.
    """
    coord = spec.g_pp == 0 and spec.g_px == 0 and spec.g_xx != 0
    mom = spec.g_xx == 0 and spec.g_xp == 0 and spec.g_pp != 0 and spec.g_px != 0
    if not (coord or mom):
        raise UnsupportedCouplingPattern("closed form needs g_xx (+ g_xp) or g_pp + g_px coupling")
    if spec.delta != 0 or spec.g <= spec.omega1**2 * spec.omega2**2:
        raise UnsupportedCouplingPattern("closed form needs Delta = 0 and g > w1^2 w2^2")
    omega, lam, rp, rm = _unstable_pair_frequencies(spec)
    m1, w1 = spec.m1, spec.omega1
    c = rp * np.cos(omega * t) + rm * np.cosh(lam * t)
    s_over = rp / omega * np.sin(omega * t) + rm / lam * np.sinh(lam * t)
    if coord:
        return np.array(
            [
                [c, m1 * (-omega * rp * np.sin(omega * t) + lam * rm * np.sinh(lam * t))],
                [s_over / m1, c],
            ]
        )
    # the sinh term of the lower-left entry enters with a minus sign (checked against exp(A t))
    return np.array(
        [
            [c, -m1 * w1**2 * s_over],
            [(omega * rp * np.sin(omega * t) - lam * rm * np.sinh(lam * t)) / (m1 * w1**2), c],
        ]
    )


def opposite_mass_spec(omega0: float, g_pp: float, g_px: float) -> CoupledPairSpec:
    """``m1 = 1, m2 = -1`` resonant pair with ``g_xp = g_px``, ``g_xx = -w0^2 g_pp``."""
    return CoupledPairSpec(1.0, -1.0, omega0, omega0, g_pp=g_pp, g_px=g_px, g_xp=g_px, g_xx=-(omega0**2) * g_pp)


def opposite_mass_rate(spec: CoupledPairSpec) -> float:
    return float(np.sqrt(abs(spec.delta)))


def _rotation(omega0: float, t: float) -> NDArray[np.float64]:
    c, s = np.cos(omega0 * t), np.sin(omega0 * t)
    return np.array([[c, -omega0 * s], [s / omega0, c]])


def opposite_mass_R11(omega0: float, rate: float, t: float) -> NDArray[np.float64]:
    return np.cosh(rate * t) * _rotation(omega0, t)


def opposite_mass_drift(omega0: float, rate: float, t: float) -> NDArray[np.float64]:
    th = rate * np.tanh(rate * t)
    return np.array([[th, -(omega0**2)], [1.0, th]])


def bateman(omega0: float, gamma: float, hbar: float = 1.0) -> QuadraticModel:
    """``H = p1 p2 + w0^2 x1 x2 + gamma (x2 p2 - x1 p1)``."""
    if omega0 <= 0:
        raise InvalidModel("omega0 must be positive")
    B = np.array(
        [
            [0.0, -gamma, 1.0, 0.0],
            [-gamma, 0.0, 0.0, omega0**2],
            [1.0, 0.0, 0.0, gamma],
            [0.0, omega0**2, gamma, 0.0],
        ]
    )
    return QuadraticModel(B, n_sub=1, hbar=hbar, labels=("p1", "x1", "p2", "x2"))


def bateman_blocks(omega0: float, gamma: float, t: float) -> tuple[NDArray, NDArray]:
    """Closed-form ``(R11, R12)``."""
    eg, emg = np.exp(gamma * t), np.exp(-gamma * t)
    R11 = np.cos(omega0 * t) * np.diag([eg, emg])
    R12 = np.sin(omega0 * t) * np.array([[0.0, -omega0 * eg], [emg / omega0, 0.0]])
    return R11, R12


def bateman_drift(omega0: float, gamma: float, t: float) -> NDArray[np.float64]:
    """Effective drift ``R11' R11^-1`` of the damped member.

    This is ``diag(gamma - w0 tan w0 t, -gamma - w0 tan w0 t)``: the
    logarithmic derivative of ``cos(w0 t) e^{+-gamma t}``.
    """
    tn = omega0 * np.tan(omega0 * t)
    return np.diag([gamma - tn, -gamma - tn])
