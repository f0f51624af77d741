from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.typing import ArrayLike
from scipy.stats import linregress

from ..errors import NonPositiveSeries

MIN_SAMPLES = 10


@dataclass(frozen=True)
class DecayFit:
    """``value ~ amplitude * exp(-rate * t)``; ``rate_ci`` is a 95% half-width."""

    rate: float
    amplitude: float
    rms_residual: float
    rate_ci: float

    def as_dict(self) -> dict:
        return {"rate": self.rate, "amplitude": self.amplitude, "rms_residual": self.rms_residual, "rate_ci": self.rate_ci}


def fit_decay(t: ArrayLike, values: ArrayLike) -> DecayFit:
    """Least-squares line through ``log(values)``."""
    t = np.asarray(t, dtype=float)
    y = np.asarray(values, dtype=float)
    if t.shape != y.shape or t.ndim != 1:
        raise ValueError("t and values must be 1-d arrays of equal length")
    if t.size < MIN_SAMPLES:
        raise NonPositiveSeries(f"need at least {MIN_SAMPLES} samples, got {t.size}")
    if not np.all(np.isfinite(y)) or np.any(y <= 0):
        raise NonPositiveSeries("decay fit needs strictly positive values")
    logy = np.log(y)
    if np.ptp(logy) == 0:
        return DecayFit(0.0, float(y[0]), 0.0, 0.0)
    res = linregress(t, logy)
    resid = logy - (res.intercept + res.slope * t)
    return DecayFit(
        rate=float(-res.slope),
        amplitude=float(np.exp(res.intercept)),
        rms_residual=float(np.sqrt(np.mean(resid**2))),
        rate_ci=float(1.96 * res.stderr),
    )
