"""Isotropic 2D oscillator in a uniform magnetic field, weakly damped.

Ordering is ``(pi_x, pi_y, x, y)`` with kinetic momenta, so the commutator
form carries ``[pi_x, pi_y] = i hbar m omega_c``.

With ``s = beta hbar w+ / 2`` and ``d = beta hbar w- / 2`` the hyperbolic
ratios of the equilibrium and diffusion formulas reduce to

    sinh(s + d) / Q = (coth s + coth d) / 2,   sinh(s - d) / Q = (coth d - coth s) / 2,

with ``Q = cosh(s + d) - cosh(s - d)``.  The coth form is used throughout;
it is finite at ``beta = inf`` and avoids overflow at large ``beta``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np
from numpy.typing import NDArray

from ..errors import InvalidModel
from ..fokker_planck import FPGenerator
from ..phase_space import SymplecticForm


@dataclass(frozen=True)
class MagneticSpec:
    m: float
    omega0: float
    omega_c: float
    gamma_plus: float
    gamma_minus: float
    beta: float = np.inf
    hbar: float = 1.0

    def __post_init__(self):
        if self.m <= 0 or self.omega0 < 0 or self.omega_c < 0:
            raise InvalidModel("need m > 0, omega0 >= 0, omega_c >= 0")
        if self.omega0 == 0 and self.omega_c == 0:
            raise InvalidModel("omega0 and omega_c cannot both vanish")
        if self.gamma_plus < 0 or self.gamma_minus < 0:
            raise InvalidModel("damping rates must be nonnegative")
        if not self.beta > 0:
            raise InvalidModel("beta must be positive (inf allowed)")

    @classmethod
    def from_density(
        cls,
        m: float,
        omega0: float,
        omega_c: float,
        nu: Callable[[float], float],
        delta: Callable[[float], complex],
        beta: float = np.inf,
        hbar: float = 1.0,
    ) -> "MagneticSpec":
        """Damping rates ``pi nu(w) |delta(w)|^2`` at the two normal frequencies."""
        Om = np.hypot(omega_c, 2 * omega0)
        wp, wm = 0.5 * (Om + omega_c), 0.5 * (Om - omega_c)
        gp = np.pi * nu(wp) * abs(delta(wp)) ** 2
        gm = np.pi * nu(wm) * abs(delta(wm)) ** 2 if wm > 0 else 0.0
        return cls(m, omega0, omega_c, float(gp), float(gm), beta, hbar)

    @property
    def Omega(self) -> float:
        return float(np.hypot(self.omega_c, 2 * self.omega0))

    @property
    def omega_plus(self) -> float:
        return 0.5 * (self.Omega + self.omega_c)

    @property
    def omega_minus(self) -> float:
        # w- = w0^2 / w+ avoids cancellation when omega_c >> omega0
        return self.omega0**2 / self.omega_plus

    @property
    def alpha(self) -> float:
        return (self.gamma_plus * self.omega_plus + self.gamma_minus * self.omega_minus) / self.Omega

    @property
    def eta(self) -> float:
        return (self.gamma_plus * self.omega_minus + self.gamma_minus * self.omega_plus) / self.Omega

    @property
    def epsilon(self) -> float:
        return (self.gamma_minus - self.gamma_plus) / self.Omega


def magnetic_sigma(m: float, omega_c: float) -> SymplecticForm:
    return SymplecticForm(
        np.array(
            [
                [0.0, -m * omega_c, 1.0, 0.0],
                [m * omega_c, 0.0, 0.0, 1.0],
                [-1.0, 0.0, 0.0, 0.0],
                [0.0, -1.0, 0.0, 0.0],
            ]
        )
    )


def _coth_half(beta: float, hbar: float, w: float) -> float:
    """``coth(beta hbar w / 2)``; 1 at zero temperature, inf for ``w = 0``."""
    if w == 0:
        return np.inf
    if np.isinf(beta):
        return 1.0
    return 1.0 / np.tanh(0.5 * beta * hbar * w)


def _wc(weight: float, coth: float) -> float:
    """``weight * coth`` with ``0 * inf = 0`` (a mode that is not coupled)."""
    return 0.0 if weight == 0 else weight * coth


def _pattern(a: float, b: float, c: float) -> NDArray[np.float64]:
    return np.array(
        [
            [a, 0.0, 0.0, b],
            [0.0, a, -b, 0.0],
            [0.0, -b, c, 0.0],
            [b, 0.0, 0.0, c],
        ]
    )


def magnetic_drift(spec: MagneticSpec) -> NDArray[np.float64]:
    m, w, k = spec.m, spec.omega_c, spec.m * spec.omega0**2
    al, et, ep = spec.alpha, spec.eta, spec.epsilon
    return np.array(
        [
            [-al, w, -k, k * ep],
            [-w, -al, -k * ep, -k],
            [1 / m, -ep / m, -et, 0.0],
            [ep / m, 1 / m, 0.0, -et],
        ]
    )


def diffusion_coefficients(spec: MagneticSpec) -> tuple[float, float, float]:
    """``(D_pi, D_a, D_rho)``."""
    cp = _coth_half(spec.beta, spec.hbar, spec.omega_plus)
    cm = _coth_half(spec.beta, spec.hbar, spec.omega_minus)
    gp, gm, wp, wm = spec.gamma_plus, spec.gamma_minus, spec.omega_plus, spec.omega_minus
    k = spec.hbar / (2 * spec.Omega)
    d_pi = spec.m * k * (_wc(gp * wp**2, cp) + _wc(gm * wm**2, cm))
    d_a = k * (_wc(gp * wp, cp) - _wc(gm * wm, cm))
    d_rho = k / spec.m * (_wc(gp, cp) + _wc(gm, cm))
    return d_pi, d_a, d_rho


def diffusion_coefficients_hyperbolic(spec: MagneticSpec) -> tuple[float, float, float]:
    """Same coefficients in the ``sinh / Q`` form; finite ``beta`` and ``omega0 > 0`` only."""
    if np.isinf(spec.beta) or spec.omega0 == 0:
        raise ValueError("hyperbolic form needs finite beta and omega0 > 0")
    bO = 0.5 * spec.beta * spec.hbar * spec.Omega
    bw = 0.5 * spec.beta * spec.hbar * spec.omega_c
    Q = np.cosh(bO) - np.cosh(bw)
    sO, sw = np.sinh(bO), np.sinh(bw)
    gp, gm, wp, wm = spec.gamma_plus, spec.gamma_minus, spec.omega_plus, spec.omega_minus
    k = spec.hbar / (2 * spec.Omega * Q)
    d_pi = spec.m * k * ((gp * wp**2 + gm * wm**2) * sO - (gp * wp**2 - gm * wm**2) * sw)
    d_a = k * ((gp * wp - gm * wm) * sO - (gp * wp + gm * wm) * sw)
    d_rho = k / spec.m * ((gp + gm) * sO - (gp - gm) * sw)
    return d_pi, d_a, d_rho


def high_temperature_coefficients(spec: MagneticSpec) -> tuple[float, float, float]:
    """``beta -> 0`` limits ``(m kT alpha, -kT epsilon, kT eta / (m w0^2))``."""
    kT = 1.0 / spec.beta
    return spec.m * kT * spec.alpha, -kT * spec.epsilon, kT * spec.eta / (spec.m * spec.omega0**2)


def equilibrium_covariance(spec: MagneticSpec) -> NDArray[np.float64]:
    """Thermal covariance of the undamped oscillator; ``inf`` entries when ``omega0 = 0``."""
    cp = _coth_half(spec.beta, spec.hbar, spec.omega_plus)
    cm = _coth_half(spec.beta, spec.hbar, spec.omega_minus)
    wp, wm = spec.omega_plus, spec.omega_minus
    k = spec.hbar / (2 * spec.Omega)
    m_pi = spec.m * k * (wp**2 * cp + _wc(wm**2, cm))
    m_a = k * (wp * cp - _wc(wm, cm))
    m_rho = k / spec.m * (cp + cm)
    return _pattern(m_pi, m_a, m_rho)


def equilibrium_covariance_hyperbolic(spec: MagneticSpec) -> NDArray[np.float64]:
    if np.isinf(spec.beta) or spec.omega0 == 0:
        raise ValueError("hyperbolic form needs finite beta and omega0 > 0")
    w, Om, h, m = spec.omega_c, spec.Omega, spec.hbar, spec.m
    bO, bw = 0.5 * spec.beta * h * Om, 0.5 * spec.beta * h * w
    Q = np.cosh(bO) - np.cosh(bw)
    m_pi = m * h * Om / (4 * Q) * ((1 + w**2 / Om**2) * np.sinh(bO) - 2 * w / Om * np.sinh(bw))
    m_rho = h * np.sinh(bO) / (m * Om * Q)
    m_a = h / (2 * Q) * (w / Om * np.sinh(bO) - np.sinh(bw))
    return _pattern(m_pi, m_a, m_rho)


@dataclass(frozen=True)
class MagneticModel:
    generator: FPGenerator
    equilibrium: NDArray[np.float64]
    D_pi: float
    D_a: float
    D_rho: float
    spec: MagneticSpec


def magnetic_model(spec: MagneticSpec) -> MagneticModel:
    d_pi, d_a, d_rho = diffusion_coefficients(spec)
    gen = FPGenerator(
        A=magnetic_drift(spec),
        K=np.zeros(4),
        D=_pattern(d_pi, d_a, d_rho),
        sigma=magnetic_sigma(spec.m, spec.omega_c),
        hbar=spec.hbar,
    )
    return MagneticModel(gen, equilibrium_covariance(spec), d_pi, d_a, d_rho, spec)
