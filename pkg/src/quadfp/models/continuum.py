"""Continuum weak-coupling limit of the oscillator + thermostat model.

Coupling constants, density of states and the bath variance function are
functions of frequency.  At times ``t >> 1/omega0`` the reduced generator is
time independent, with on-resonance terms fixed by values at ``omega0`` and
off-resonance terms given by principal-value integrals

    P int phi(w) / (w^2 - omega0^2) dw.

The integrals are evaluated in ``x = w^2``, where the symmetric-reflection
cancellation of off-resonance contributions is exact.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, NamedTuple

import numpy as np
from numpy.typing import NDArray

from ..errors import PVNotConverged, WindowExcludesResonance
from .thermostat import bilinears

Fn = Callable[[NDArray[np.float64]], NDArray[np.float64]]

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(20)


def _as_fn(c: float | Fn) -> Fn:
    if callable(c):
        return c
    val = float(c)
    return lambda w: np.full(np.shape(w), val)


@dataclass(frozen=True)
class ContinuumBath:
    """Continuous thermostat on ``[omega_min, omega_max]``.

    All of ``nu, z, v, u, g, f`` accept a constant or a vectorized callable
    of frequency.  ``f`` defaults to the zero-temperature ``hbar / (2 w)``.
    """

    nu: float | Fn
    omega_min: float
    omega_max: float
    z: float | Fn = 0.0
    v: float | Fn = 0.0
    u: float | Fn = 0.0
    g: float | Fn = 0.0
    f: float | Fn | None = None
    hbar: float = 1.0
    pv_rtol: float = 1e-10
    pv_max_level: int = 14
    fns: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if not 0 < self.omega_min < self.omega_max:
            raise ValueError("window must satisfy 0 < omega_min < omega_max")
        fns = {k: _as_fn(getattr(self, k)) for k in ("nu", "z", "v", "u", "g")}
        fns["f"] = (lambda w: self.hbar / (2.0 * np.asarray(w))) if self.f is None else _as_fn(self.f)
        object.__setattr__(self, "fns", fns)

    def at(self, w) -> dict[str, NDArray[np.float64]]:
        """Density, variance and the coupling bilinears at frequencies ``w``."""
        w = np.asarray(w, dtype=float)
        c = {k: np.asarray(fn(w), dtype=float) for k, fn in self.fns.items()}
        b = bilinears(w, c["z"], c["v"], c["u"], c["g"])
        return {"nu": c["nu"], "f": c["f"], "delta": b.delta, "kappa": b.kappa, "G": b.G, "Z": b.Z}


def _gauss(fn: Callable, a: float, b: float, panels: int) -> tuple[float, float]:
    """Composite Gauss-Legendre value and absolute-value integral."""
    edges = np.linspace(a, b, panels + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[1:] + edges[:-1])
    s = (mid[:, None] + half[:, None] * _GL_NODES[None, :]).ravel()
    w = (half[:, None] * _GL_WEIGHTS[None, :]).ravel()
    y = fn(s)
    return float(w @ y), float(w @ np.abs(y))


def principal_value(
    phi: Fn,
    omega0: float,
    omega_min: float,
    omega_max: float,
    rtol: float = 1e-10,
    max_level: int = 14,
    atol: float = 0.0,
) -> float:
    """``P int_{omega_min}^{omega_max} phi(w) / (w^2 - omega0^2) dw``.

    With ``x = w^2`` and ``h(x) = phi(sqrt x) / (2 sqrt x)`` the singular part
    is folded onto ``int_0^r [h(x0 + s) - h(x0 - s)] / s ds`` and the rest of
    the window is a regular integral.  Panels double until successive values
    agree to ``rtol`` relative to the integral of the absolute integrand, or
    to ``atol``.  An integrand that cancels identically is pure rounding
    noise, so callers that can see the uncancelled magnitude pass ``atol``.
    """
    if not omega_min < omega0 < omega_max:
        raise WindowExcludesResonance(f"omega0={omega0} outside window [{omega_min}, {omega_max}]")
    x0, a, b = omega0**2, omega_min**2, omega_max**2
    r = min(x0 - a, b - x0)

    def h(x):
        sx = np.sqrt(x)
        return np.asarray(phi(sx), dtype=float) / (2.0 * sx)

    def folded(s):
        return (h(x0 + s) - h(x0 - s)) / s

    def tail(x):
        return h(x) / (x - x0)

    if b - x0 > r * (1 + 1e-15):
        tail_range = (x0 + r, b)
    elif x0 - a > r * (1 + 1e-15):
        tail_range = (a, x0 - r)
    else:
        tail_range = None

    prev = None
    for level in range(2, max_level + 1):
        panels = 2**level
        val, mag = _gauss(folded, 0.0, r, panels)
        if tail_range is not None:
            tv, tm = _gauss(tail, *tail_range, panels)
            val, mag = val + tv, mag + tm
        if prev is not None and abs(val - prev) <= max(rtol * max(abs(val), mag), atol):
            return val
        prev = val
    raise PVNotConverged(f"principal-value integral not converged after {2**max_level} panels")


@dataclass(frozen=True)
class ContinuumCoefficients:
    mu: NDArray[np.float64]
    D: NDArray[np.float64]
    gamma: float
    omega0: float
    pv: dict[str, float]

    @property
    def A(self) -> NDArray[np.float64]:
        """Full drift matrix: free oscillator in ``(p, x)`` plus ``mu``."""
        return np.array([[0.0, -(self.omega0**2)], [1.0, 0.0]]) + self.mu

    @property
    def omega_star_bracket(self) -> float:
        """``omega0^2 - (mu11 - mu22)^2 / 4 - mu12 mu21`` as printed (no root)."""
        m = self.mu
        return float(self.omega0**2 - 0.25 * (m[0, 0] - m[1, 1]) ** 2 - m[0, 1] * m[1, 0])

    @property
    def omega_star(self) -> float:
        """Oscillation frequency of ``A``: the square root of the bracket (nan if overdamped)."""
        br = self.omega_star_bracket
        return float(np.sqrt(br)) if br >= 0 else float("nan")


def continuum_fp(bath: ContinuumBath, omega0: float) -> ContinuumCoefficients:
    """Time-independent ``mu = A - A_free``, diffusion ``D`` and damping ``gamma``."""
    if not bath.omega_min < omega0 < bath.omega_max:
        raise WindowExcludesResonance(f"omega0={omega0} outside window [{bath.omega_min}, {bath.omega_max}]")
    w0 = omega0
    c0 = {k: float(v) for k, v in bath.at(w0).items()}
    nu0, f0, dl0, ka0, G0, Z0 = (c0[k] for k in ("nu", "f", "delta", "kappa", "G", "Z"))
    hp = 0.5 * np.pi * nu0

    integrands = {
        "kappa": lambda w, c: w * c["kappa"] * c["nu"],
        "mu12": lambda w, c: c["nu"] * (w0**2 * c["delta"] + w * c["G"]),
        "mu21": lambda w, c: c["nu"] * (c["delta"] + w * c["Z"]),
        "f_kappa": lambda w, c: w * c["f"] * c["kappa"] * c["nu"],
        "D12": lambda w, c: w * c["f"] * c["nu"] * (w0**2 * c["Z"] - c["G"]),
    }
    # same integrands with every bilinear replaced by a sum of absolute terms
    grid = np.linspace(bath.omega_min, bath.omega_max, 257)
    raw = {k: np.abs(np.asarray(fn(grid), dtype=float)) for k, fn in bath.fns.items()}
    z, v, u, g = raw["z"], raw["v"], raw["u"], raw["g"]
    mags = {
        "nu": raw["nu"],
        "f": raw["f"],
        "delta": g * z + u * v,
        "kappa": grid * z * v + g * u / grid,
        "G": grid * v**2 + g**2 / grid,
        "Z": grid * z**2 + u**2 / grid,
    }
    pv = {}
    for name, fn in integrands.items():
        ref = float(np.mean(np.abs(fn(grid, mags)))) / w0
        pv[name] = principal_value(
            lambda w, fn=fn: fn(w, bath.at(w)),
            w0,
            bath.omega_min,
            bath.omega_max,
            bath.pv_rtol,
            bath.pv_max_level,
            atol=bath.pv_rtol * ref,
        )

    mu = np.array(
        [
            [-hp * (dl0 + G0 / w0) + pv["kappa"], hp * w0 * ka0 + pv["mu12"]],
            [hp * ka0 / w0 - pv["mu21"], -hp * (dl0 + w0 * Z0) - pv["kappa"]],
        ]
    )
    d11 = hp * f0 * w0 * (w0 * dl0 + G0) - w0**2 * pv["f_kappa"]
    d22 = hp * f0 * (dl0 + w0 * Z0) + pv["f_kappa"]
    d12 = -hp * w0 * f0 * ka0 + pv["D12"]
    D = np.array([[d11, d12], [d12, d22]])
    gamma = 0.25 * np.pi * nu0 * (2 * dl0 + w0 * Z0 + G0 / w0)
    return ContinuumCoefficients(mu=mu, D=D, gamma=float(gamma), omega0=float(w0), pv=pv)


def rwa_damping(omega0: float, nu0: float, u0: float, g0: float) -> float:
    """``pi nu(omega0) (u0^2 + g0^2 / omega0^2)``."""
    return float(np.pi * nu0 * (u0**2 + g0**2 / omega0**2))


class GateResult(NamedTuple):
    passed: bool
    lhs: float
    rhs: float


def zero_temperature_violation(omega0: float, z: float, v: float, u: float, g: float) -> float:
    """``(u + v)^2 + (omega0 z - g / omega0)^2``; zero exactly for RWA coupling."""
    return float((u + v) ** 2 + (omega0 * z - g / omega0) ** 2)


def rwa_gate(
    omega0: float,
    z: float,
    v: float,
    u: float,
    g: float,
    f0: float | None = None,
    hbar: float = 1.0,
    tol: float = 1e-12,
) -> GateResult:
    """Test whether the constant continuum generator is admissible for all states.

    Returns both sides of ``(4 f w / hbar)^2 [2 Delta^2 + Delta S] >= (2 Delta + S)^2``
    with ``S = w Z + G / w``.  At the zero-temperature value
    ``f0 = hbar / (2 omega0)`` (the default) the verdict comes from the
    equivalent sum of squares, which must vanish to ``tol`` relative to the
    coupling scale.
    """
    zero_t = hbar / (2.0 * omega0)
    f0 = zero_t if f0 is None else float(f0)
    if f0 < zero_t * (1 - 1e-12):
        raise ValueError("f0 below hbar / (2 omega0)")
    b = bilinears(omega0, z, v, u, g)
    dl, S = float(b.delta), float(omega0 * b.Z + b.G / omega0)
    lhs = (4.0 * f0 * omega0 / hbar) ** 2 * (2 * dl**2 + dl * S)
    rhs = (2 * dl + S) ** 2
    if abs(f0 - zero_t) <= 1e-12 * zero_t:
        scale = u**2 + v**2 + (omega0 * z) ** 2 + (g / omega0) ** 2
        passed = zero_temperature_violation(omega0, z, v, u, g) <= tol * scale
    else:
        passed = lhs - rhs >= -tol * max(abs(lhs), abs(rhs))
    return GateResult(bool(passed), float(lhs), float(rhs))
