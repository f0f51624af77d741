"""Scenario configuration files (YAML) and their validation."""

from __future__ import annotations

import copy
from pathlib import Path
from typing import Any, Literal, Union

import yaml
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from ..errors import ConfigInvalid, UnknownParameter

Kind = Literal["closed", "reduce", "fp-evolve", "steady-state", "check", "bath-relax", "sweep"]
Vector = list[float]
Matrix = list[list[float]]


class Strict(BaseModel):
    model_config = ConfigDict(extra="forbid")


class ScenarioMeta(Strict):
    id: str = Field(pattern=r"^[A-Za-z0-9_.\-]+$")
    kind: Kind


class CoupledPairCfg(Strict):
    m1: float
    m2: float
    omega1: float
    omega2: float
    g_pp: float = 0.0
    g_px: float = 0.0
    g_xp: float = 0.0
    g_xx: float = 0.0
    C: Vector | None = None


class BatemanCfg(Strict):
    omega0: float = Field(gt=0)
    gamma: float


class BathCfg(Strict):
    """Either an equally spaced discretization or explicit mode lists."""

    omega0: float = Field(gt=0)
    n_modes: int | None = Field(default=None, ge=1)
    spacing: float | None = Field(default=None, gt=0)
    omegas: Vector | None = None
    z: float | Vector = 0.0
    v: float | Vector = 0.0
    u: float | Vector = 0.0
    g: float | Vector = 0.0
    kT: float = Field(default=0.0, ge=0)

    @model_validator(mode="after")
    def _layout(self):
        if (self.omegas is None) == (self.n_modes is None or self.spacing is None):
            raise ValueError("give either omegas or both n_modes and spacing")
        if self.omegas is None and any(isinstance(c, list) for c in (self.z, self.v, self.u, self.g)):
            raise ValueError("per-mode coupling lists need explicit omegas")
        return self


class ContinuumCfg(Strict):
    omega0: float = Field(gt=0)
    nu: float = Field(ge=0)
    omega_min: float = Field(gt=0)
    omega_max: float = Field(gt=0)
    z: float = 0.0
    v: float = 0.0
    u: float = 0.0
    g: float = 0.0
    kT: float = Field(default=0.0, ge=0)


class MagneticCfg(Strict):
    m: float = Field(gt=0)
    omega0: float = Field(ge=0)
    omega_c: float = Field(ge=0)
    gamma_plus: float = Field(ge=0)
    gamma_minus: float = Field(ge=0)
    beta: float | Literal["inf"] = "inf"

    @field_validator("beta")
    @classmethod
    def _beta(cls, v):
        if v == "inf":
            return float("inf")
        if not v > 0:
            raise ValueError("beta must be positive")
        return v


class RawCfg(Strict):
    B: Matrix
    C: Vector | None = None
    n_sub: int = Field(default=0, ge=0)
    labels: list[str] | None = None


class GeneratorCfg(Strict):
    """Constant Fokker-Planck generator; ``sigma`` defaults to the standard form."""

    A: Matrix
    D: Matrix
    K: Vector | None = None
    sigma: Matrix | None = None


MODEL_KEYS = ("coupled_pair", "bateman", "bath", "continuum", "magnetic", "raw", "generator")


class ModelCfg(Strict):
    coupled_pair: CoupledPairCfg | None = None
    bateman: BatemanCfg | None = None
    bath: BathCfg | None = None
    continuum: ContinuumCfg | None = None
    magnetic: MagneticCfg | None = None
    raw: RawCfg | None = None
    generator: GeneratorCfg | None = None

    @model_validator(mode="after")
    def _exactly_one(self):
        given = [k for k in MODEL_KEYS if getattr(self, k) is not None]
        if len(given) != 1:
            raise ValueError(f"exactly one model spec required, got {given or 'none'}")
        return self

    @property
    def name(self) -> str:
        return next(k for k in MODEL_KEYS if getattr(self, k) is not None)

    @property
    def spec(self):
        return getattr(self, self.name)


class StateCfg(Strict):
    kind: Literal["explicit", "vacuum", "thermal"] = "explicit"
    mean: Vector | None = None
    cov: Matrix | None = None
    omega: float | None = Field(default=None, gt=0)
    mass: float = 1.0
    kT: float = Field(default=0.0, ge=0)
    n_dof: int = Field(default=1, ge=1)

    @model_validator(mode="after")
    def _complete(self):
        if self.kind == "explicit" and (self.mean is None or self.cov is None):
            raise ValueError("explicit state needs mean and cov")
        if self.kind != "explicit" and self.omega is None:
            raise ValueError(f"{self.kind} state needs omega")
        return self


class InitialStateCfg(Strict):
    full: StateCfg | None = None
    subsystem: StateCfg | None = None
    reservoir: StateCfg | None = None

    @model_validator(mode="after")
    def _exclusive(self):
        if self.full is not None and (self.subsystem is not None or self.reservoir is not None):
            raise ValueError("give either full or subsystem/reservoir")
        return self


class TimeCfg(Strict):
    t_start: float = 0.0
    t_end: float
    n_samples: int = Field(ge=2)

    @model_validator(mode="after")
    def _order(self):
        if not self.t_end > self.t_start:
            raise ValueError("t_end must exceed t_start")
        return self


CheckName = Literal[
    "symplectic",
    "state_admissible",
    "generator_admissible",
    "diffusion_bound_1d",
    "reduction_consistency",
    "drift_closed_form",
    "decay_rate",
    "steady_state_fixed_point",
    "equilibrium_match",
    "lyapunov_residual",
    "rwa_gate",
]


class CheckCfg(Strict):
    name: CheckName
    required: bool = True
    tol: float | None = Field(default=None, gt=0)


class Tolerances(Strict):
    admissibility: float = Field(default=1e-10, gt=0)
    symplectic: float = Field(default=1e-10, gt=0)
    ode_rtol: float = Field(default=1e-11, gt=0)
    ode_atol: float = Field(default=1e-13, gt=0)


class OutputCfg(Strict):
    dir: str = "."


class SweepCfg(Strict):
    """``outputs`` name model scalars; with ``base_kind`` set, each point also
    runs that scenario kind and its report scalars and fits become available."""

    param: str
    values: Vector | str
    outputs: list[str] = Field(min_length=1)
    base_kind: Literal["closed", "reduce", "fp-evolve", "steady-state", "check", "bath-relax"] | None = None


class ScenarioConfig(Strict):
    scenario: ScenarioMeta
    hbar: float = Field(default=1.0, gt=0)
    model: ModelCfg
    initial_state: InitialStateCfg = InitialStateCfg()
    time: TimeCfg | None = None
    checks: list[CheckCfg] = []
    output: OutputCfg = OutputCfg()
    tolerances: Tolerances = Tolerances()
    sweep: SweepCfg | None = None

    @model_validator(mode="after")
    def _kind_needs(self):
        kind = self.scenario.kind
        if kind in ("closed", "reduce", "fp-evolve", "bath-relax") and self.time is None:
            raise ValueError(f"{kind} scenario needs a time section")
        if kind == "sweep" and self.sweep is None:
            raise ValueError("sweep scenario needs a sweep section")
        names = [c.name for c in self.checks]
        if len(set(names)) != len(names):
            raise ValueError("each check may be declared once")
        return self


def _format_error(exc: ValidationError) -> tuple[str, str]:
    err = exc.errors()[0]
    path = ".".join(str(p) for p in err["loc"])
    return f"{path}: {err['msg']}", path


def validate_config(data: Any) -> ScenarioConfig:
    if not isinstance(data, dict):
        raise ConfigInvalid("config must be a mapping", "")
    try:
        return ScenarioConfig.model_validate(data)
    except ValidationError as exc:
        msg, path = _format_error(exc)
        raise ConfigInvalid(msg, path) from None


def load_raw(path: str | Path) -> dict:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigInvalid(f"cannot read config: {exc}", "") from None
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigInvalid(f"YAML parse error: {exc}", "") from None
    return data


def load_config(path: str | Path) -> ScenarioConfig:
    return validate_config(load_raw(path))


def set_param(data: dict, dotted: str, value: float) -> dict:
    """Copy of ``data`` with the numeric leaf at ``dotted`` replaced."""
    out = copy.deepcopy(data)
    keys = dotted.split(".")
    node: Any = out
    for k in keys[:-1]:
        if isinstance(node, list) and k.isdigit() and int(k) < len(node):
            node = node[int(k)]
        elif isinstance(node, dict) and k in node:
            node = node[k]
        else:
            raise UnknownParameter(dotted)
    leaf = keys[-1]
    if isinstance(node, list) and leaf.isdigit() and int(leaf) < len(node):
        old, idx = node[int(leaf)], int(leaf)
    elif isinstance(node, dict) and leaf in node:
        old, idx = node[leaf], leaf
    else:
        raise UnknownParameter(dotted)
    if isinstance(old, bool) or not isinstance(old, (int, float)) and old != "inf":
        raise UnknownParameter(f"{dotted} is not a numeric leaf")
    node[idx] = value
    return out


def parse_values(spec: Union[str, list]) -> list[float]:
    """``[a, b, ...]``, ``"a,b,c"`` or ``"range:start:stop:n"`` (inclusive, linear)."""
    if isinstance(spec, list):
        return [float(v) for v in spec]
    s = spec.strip()
    if s.startswith("range:"):
        parts = s.split(":")
        if len(parts) != 4:
            raise ConfigInvalid("range must be range:start:stop:n", "sweep.values")
        a, b, n = float(parts[1]), float(parts[2]), int(parts[3])
        if n < 1:
            raise ConfigInvalid("range needs n >= 1", "sweep.values")
        if n == 1:
            return [a]
        return [a + (b - a) * i / (n - 1) for i in range(n)]
    try:
        return [float(v) for v in s.strip("[]").split(",") if v.strip()]
    except ValueError:
        raise ConfigInvalid(f"cannot parse sweep values {spec!r}", "sweep.values") from None
