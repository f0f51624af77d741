"""Oscillator coupled to a discrete set of unit-mass bath oscillators.

Interaction: ``sum_i (z_i p_i p_0 + v_i p_i x_0 + u_i x_i p_0 + g_i x_i x_0)``.
Phase-space ordering is ``(p_0, x_0, p_1..p_M, x_1..x_M)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy.linalg import block_diag

from ..errors import InvalidModel
from ..phase_space import QuadraticModel, thermal_variance


def _arr(x, n=None) -> NDArray[np.float64]:
    a = np.array(x, dtype=float, ndmin=1)
    if n is not None and a.size == 1 and n != 1:
        a = np.full(n, a.item())
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class Bilinears:
    """Per-mode coupling combinations ``Delta, kappa, G, Z``."""

    delta: NDArray[np.float64]
    kappa: NDArray[np.float64]
    G: NDArray[np.float64]
    Z: NDArray[np.float64]


def bilinears(omega, z, v, u, g) -> Bilinears:
    omega, z, v, u, g = (np.asarray(a, dtype=float) for a in (omega, z, v, u, g))
    return Bilinears(
        delta=g * z - u * v,
        kappa=omega * z * v + g * u / omega,
        G=omega * v**2 + g**2 / omega,
        Z=omega * z**2 + u**2 / omega,
    )


@dataclass(frozen=True)
class BathSpec:
    """Bath frequencies, couplings and per-mode coordinate variances ``f_i``.

    ``f`` defaults to the zero-temperature value ``hbar / (2 omega_i)``.
    """

    omegas: NDArray[np.float64]
    z: NDArray[np.float64] = 0.0
    v: NDArray[np.float64] = 0.0
    u: NDArray[np.float64] = 0.0
    g: NDArray[np.float64] = 0.0
    f: NDArray[np.float64] | None = None
    hbar: float = 1.0
    bilinears: Bilinears = field(init=False, repr=False)

    def __post_init__(self):
        om = _arr(self.omegas)
        n = om.size
        if np.any(om <= 0):
            raise InvalidModel("bath frequencies must be positive")
        object.__setattr__(self, "omegas", om)
        for name in ("z", "v", "u", "g"):
            a = _arr(getattr(self, name), n)
            if a.shape != (n,):
                raise InvalidModel(f"coupling {name} must have one entry per mode")
            object.__setattr__(self, name, a)
        f = _arr(self.hbar / (2.0 * om) if self.f is None else self.f, n)
        if f.shape != (n,):
            raise InvalidModel("f must have one entry per mode")
        if np.any(f < (self.hbar / (2.0 * om)) * (1 - 1e-12)):
            raise InvalidModel("f_i below hbar / (2 omega_i) violates the uncertainty relation")
        object.__setattr__(self, "f", f)
        object.__setattr__(self, "bilinears", bilinears(om, self.z, self.v, self.u, self.g))

    @property
    def n_modes(self) -> int:
        return self.omegas.size


def thermal_bath_variances(omegas: ArrayLike, kT: float, hbar: float = 1.0) -> NDArray[np.float64]:
    return np.array([thermal_variance(w, kT, hbar) for w in np.atleast_1d(omegas)])


def mixture_variance(omega: float, temperatures: Sequence[float], weights: Sequence[float], hbar: float = 1.0) -> float:
    """Weighted combination of thermal variances for independent sub-baths."""
    w = np.asarray(weights, dtype=float)
    if np.any(w < 0) or not np.isclose(w.sum(), 1.0, rtol=0, atol=1e-12):
        raise InvalidModel("mixture weights must be nonnegative and sum to 1")
    return float(sum(a * thermal_variance(omega, kT, hbar) for a, kT in zip(w, temperatures)))


def discretize_bath(
    omega0: float,
    spacing: float,
    n_modes: int,
    z: float | Callable = 0.0,
    v: float | Callable = 0.0,
    u: float | Callable = 0.0,
    g: float | Callable = 0.0,
    kT: float = 0.0,
    hbar: float = 1.0,
) -> BathSpec:
    """Equally spaced modes centred on ``omega0``; density of states ``1 / spacing``.

    Couplings are constants or callables of frequency.
    """
    omegas = omega0 + spacing * (np.arange(n_modes) - 0.5 * (n_modes - 1))

    def ev(c):
        return np.asarray(c(omegas), dtype=float) if callable(c) else np.full(n_modes, float(c))

    return BathSpec(omegas, ev(z), ev(v), ev(u), ev(g), thermal_bath_variances(omegas, kT, hbar), hbar)


def bath_hamiltonian(omega0: float, spec: BathSpec) -> NDArray[np.float64]:
    M = spec.n_modes
    n = 2 + 2 * M
    B = np.zeros((n, n))
    B[0, 0] = 1.0
    B[1, 1] = omega0**2
    ip = 2 + np.arange(M)
    ix = 2 + M + np.arange(M)
    B[ip, ip] = 1.0
    B[ix, ix] = spec.omegas**2
    for row, col, c in ((ip, 0, spec.z), (ip, 1, spec.v), (ix, 0, spec.u), (ix, 1, spec.g)):
        B[row, col] = c
        B[col, row] = c
    return B


def bath_model(omega0: float, spec: BathSpec, C=None) -> QuadraticModel:
    """Subsystem oscillator (unit mass, frequency ``omega0``) plus bath."""
    M = spec.n_modes
    labels = ("p0", "x0") + tuple(f"p_{i + 1}" for i in range(M)) + tuple(f"x_{i + 1}" for i in range(M))
    return QuadraticModel(bath_hamiltonian(omega0, spec), C, n_sub=1, hbar=spec.hbar, labels=labels)


def reservoir_covariance(spec: BathSpec) -> NDArray[np.float64]:
    """``diag(omega_i^2 f_i) + diag(f_i)`` in (momenta, coordinates) order."""
    return block_diag(np.diag(spec.omegas**2 * spec.f), np.diag(spec.f))


def _kernels(omegas: NDArray, omega0: float, t: float):
    """``S+-`` and ``C+-`` with the resonant terms in removable-singularity form."""
    dm = omegas - omega0
    dp = omegas + omega0
    # sin(d t)/d and (1 - cos d t)/d written so that d -> 0 is exact
    s_m = t * np.sinc(dm * t / np.pi)
    s_p = t * np.sinc(dp * t / np.pi)
    c_m = np.sin(0.5 * dm * t) * t * np.sinc(0.5 * dm * t / np.pi)
    c_p = np.sin(0.5 * dp * t) * t * np.sinc(0.5 * dp * t / np.pi)
    return s_m + s_p, s_m - s_p, c_m + c_p, c_m - c_p


def perturbative_mu_D(omega0: float, spec: BathSpec, t: float) -> tuple[NDArray, NDArray]:
    """Lowest-order drift correction ``mu = A - A_11`` and diffusion ``D`` at time ``t``."""
    Sp, Sm, Cp, Cm = _kernels(spec.omegas, omega0, t)
    b = spec.bilinears
    dl, ka, G, Z = b.delta, b.kappa, b.G, b.Z
    w0 = omega0
    mu = 0.5 * np.array(
        [
            [np.sum(-dl * Sp - G * Sm / w0 + ka * Cp), np.sum(w0 * ka * Sm + w0 * dl * Cm + G * Cp)],
            [np.sum(ka * Sm / w0 - dl * Cm / w0 - Z * Cp), np.sum(-dl * Sp - w0 * Z * Sm - ka * Cp)],
        ]
    )
    wf = spec.omegas * spec.f
    d11 = 0.5 * np.sum(wf * (G * Sp + w0 * dl * Sm - w0 * ka * Cm))
    d22 = 0.5 * np.sum(wf * (Z * Sp + dl * Sm / w0 + ka * Cm / w0))
    d12 = 0.5 * np.sum(wf * (-ka * Sp + (w0**2 * Z - G) * Cm / (2.0 * w0)))
    return mu, np.array([[d11, d12], [d12, d22]])


def predicted_damping(omega0: float, density: float, z: float, v: float, u: float, g: float) -> float:
    """Weak-coupling damping rate ``(pi nu / 4)[2 Delta + w0 Z + G / w0]`` at ``omega0``."""
    b = bilinears(omega0, z, v, u, g)
    return float(0.25 * np.pi * density * (2 * b.delta + omega0 * b.Z + b.G / omega0))
