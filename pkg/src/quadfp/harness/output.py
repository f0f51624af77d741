"""CSV time series and JSON reports."""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from ..phase_space import GaussianState, check_state_admissible


def fmt(x: float) -> str:
    return format(float(x), ".17g")


def moment_header(labels: Sequence[str]) -> list[str]:
    n = len(labels)
    cols = [f"mean_{lab}" for lab in labels]
    cols += [f"cov_{labels[i]}_{labels[j]}" for i in range(n) for j in range(i, n)]
    return cols + ["purity", "min_eig_phi"]


def raw_purity(state: GaussianState) -> float:
    """Purity without the admissibility guard; nan for a nonpositive covariance."""
    sign, logdet = np.linalg.slogdet(state.cov)
    if sign <= 0:
        return float("nan")
    return float(np.exp(state.n_dof * np.log(state.hbar / 2.0) - 0.5 * logdet))


def moment_row(state: GaussianState, tol: float) -> list[float]:
    n = state.dim
    row = list(state.mean)
    row += [state.cov[i, j] for i in range(n) for j in range(i, n)]
    row.append(raw_purity(state))
    row.append(check_state_admissible(state, tol=tol).min_eigenvalue)
    return row


def coefficient_header(labels: Sequence[str]) -> list[str]:
    n = len(labels)
    cols = [f"A_{labels[i]}_{labels[j]}" for i in range(n) for j in range(n)]
    cols += [f"K_{lab}" for lab in labels]
    cols += [f"D_{labels[i]}_{labels[j]}" for i in range(n) for j in range(i, n)]
    return cols


def coefficient_row(A, K, D) -> list[float]:
    n = len(K)
    return list(np.ravel(A)) + list(K) + [D[i][j] for i in range(n) for j in range(i, n)]


def write_csv(path: Path, header: Sequence[str], rows: Sequence[Sequence[float]]) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for r in rows:
            w.writerow([v if isinstance(v, str) else fmt(v) for v in r])


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, np.ndarray):
        return _jsonable(x.tolist())
    if isinstance(x, (np.floating, float)):
        x = float(x)
        return x if np.isfinite(x) else str(x)
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, np.bool_):
        return bool(x)
    return x


@dataclass
class Verdict:
    name: str
    required: bool
    passed: bool
    value: float | None = None
    threshold: float | None = None
    details: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "required": self.required,
            "passed": self.passed,
            "value": self.value,
            "threshold": self.threshold,
            "details": self.details,
        }


@dataclass
class RunReport:
    scenario: str
    kind: str
    wall_time: float = 0.0
    verdicts: list[Verdict] = field(default_factory=list)
    scalars: dict = field(default_factory=dict)
    fits: dict = field(default_factory=dict)
    warnings: list[str] = field(default_factory=list)
    outputs: dict = field(default_factory=dict)

    @property
    def failed_required(self) -> list[str]:
        return [v.name for v in self.verdicts if v.required and not v.passed]

    def as_dict(self) -> dict:
        return _jsonable(
            {
                "scenario": self.scenario,
                "kind": self.kind,
                "wall_time_s": self.wall_time,
                "verdicts": [v.as_dict() for v in self.verdicts],
                "scalars": self.scalars,
                "fits": self.fits,
                "warnings": self.warnings,
                "outputs": self.outputs,
            }
        )

    def write(self, path: Path) -> None:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(json.dumps(self.as_dict(), indent=2, sort_keys=False) + "\n")
