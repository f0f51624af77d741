"""Exception hierarchy.

Everything raised on purpose by the library derives from :class:`QuadFPError`.
Numerical failures (singular matrices, unmet tolerances, unstable spectra)
derive from :class:`NumericalError`; the CLI maps those to exit status 3.
"""

from __future__ import annotations


class QuadFPError(Exception):
    """Base class for library errors."""


class DimensionMismatch(QuadFPError, ValueError):
    pass


class WrongDimension(QuadFPError, ValueError):
    pass


class BadSplit(QuadFPError, ValueError):
    pass


class InvalidModel(QuadFPError, ValueError):
    pass


class CorrelatedInitialState(QuadFPError, ValueError):
    """The subsystem and reservoir are correlated at t = 0."""


class UnsupportedCouplingPattern(QuadFPError, ValueError):
    pass


class WindowExcludesResonance(QuadFPError, ValueError):
    pass


class NonPositiveSeries(QuadFPError, ValueError):
    pass


class UnknownParameter(QuadFPError, KeyError):
    pass


class ConfigInvalid(QuadFPError, ValueError):
    """Scenario configuration failed validation.

    ``path`` is the dotted location of the offending field.
    """

    def __init__(self, message: str, path: str = ""):
        self.path = path
        super().__init__(f"{path}: {message}" if path else message)


class NumericalError(QuadFPError, ArithmeticError):
    """Base class for failures of a numerical procedure."""


class SingularTransform(NumericalError):
    pass


class SingularCovariance(NumericalError):
    pass


class InadmissibleState(NumericalError):
    pass


class NotPositiveDefinite(NumericalError):
    pass


class SingularR11(NumericalError):
    def __init__(self, message: str, condition: float = float("inf"), t: float | None = None):
        self.condition = condition
        self.t = t
        super().__init__(message)


class ToleranceNotMet(NumericalError):
    pass


class NotHurwitz(NumericalError):
    pass


class SingularLyapunov(NumericalError):
    pass


class ResonanceDivision(NumericalError):
    pass


class PVNotConverged(NumericalError):
    pass
