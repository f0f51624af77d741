"""Scenario execution: build models and states, run, evaluate checks."""

from __future__ import annotations

import time as _time
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable

import numpy as np

from ..dynamics import closed_trajectory, propagate, subsystem_trajectory
from ..errors import ConfigInvalid, NumericalError, SingularR11, UnknownParameter
from ..fokker_planck import FPGenerator, admissibility, evolve_moments, min_diffusion_bound_1d, steady_state
from ..models import coupled, magnetic, thermostat
from ..models.continuum import ContinuumBath, continuum_fp, rwa_gate
from ..phase_space import (
    GaussianState,
    QuadraticModel,
    SymplecticForm,
    check_state_admissible,
    hermitian_report,
    product_state,
    standard_symplectic,
    thermal_variance,
)
from ..reduction import effective_fp, effective_generator, reduce, split_blocks
from .config import ScenarioConfig, StateCfg, parse_values, set_param, validate_config
from .fitting import fit_decay
from .output import (
    RunReport,
    Verdict,
    coefficient_header,
    coefficient_row,
    moment_header,
    moment_row,
    write_csv,
)

AVAILABLE = {
    "closed": {"symplectic", "state_admissible"},
    "reduce": {
        "state_admissible",
        "generator_admissible",
        "diffusion_bound_1d",
        "reduction_consistency",
        "drift_closed_form",
    },
    "fp-evolve": {"state_admissible", "generator_admissible", "diffusion_bound_1d"},
    "steady-state": {
        "state_admissible",
        "generator_admissible",
        "lyapunov_residual",
        "steady_state_fixed_point",
        "equilibrium_match",
    },
    "check": {"symplectic", "state_admissible", "generator_admissible", "diffusion_bound_1d", "rwa_gate"},
    "bath-relax": {"state_admissible", "decay_rate"},
    "sweep": set(),
}

DEFAULT_CHECK_TOL = {
    "reduction_consistency": 1e-7,
    "drift_closed_form": 1e-8,
    "decay_rate": 0.1,
    "steady_state_fixed_point": 1e-9,
    "equilibrium_match": 1e-9,
    "lyapunov_residual": 1e-10,
    "rwa_gate": 1e-12,
}


@dataclass
class Built:
    """A resolved model: Hamiltonian (``model``) or generator-only."""

    name: str
    hbar: float
    model: QuadraticModel | None = None
    generator: FPGenerator | None = None
    reservoir: GaussianState | None = None
    extras: dict = field(default_factory=dict)
    warnings: list[str] = field(default_factory=list)

    @property
    def labels(self) -> tuple[str, ...]:
        if self.model is not None:
            return self.model.labels
        return self.extras.get("labels") or tuple(f"q{i + 1}" for i in range(self.generator.dim))

    @property
    def sub_labels(self) -> tuple[str, ...]:
        return self.labels[: 2 * self.model.n_sub] if self.model is not None else self.labels


def _state(cfg: StateCfg, hbar: float, sigma: SymplecticForm | None = None) -> GaussianState:
    if cfg.kind == "explicit":
        return GaussianState(cfg.mean, cfg.cov, hbar, sigma)
    kT = cfg.kT if cfg.kind == "thermal" else 0.0
    n = cfg.n_dof
    f = thermal_variance(cfg.omega, kT, hbar) / cfg.mass
    cov = np.diag([cfg.mass**2 * cfg.omega**2 * f] * n + [f] * n)
    mean = np.zeros(2 * n) if cfg.mean is None else cfg.mean
    return GaussianState(mean, cov, hbar, sigma)


def build_model(cfg: ScenarioConfig) -> Built:
    name, spec, hbar = cfg.model.name, cfg.model.spec, cfg.hbar
    out = Built(name=name, hbar=hbar)
    if name == "coupled_pair":
        ps = coupled.CoupledPairSpec(
            spec.m1, spec.m2, spec.omega1, spec.omega2, spec.g_pp, spec.g_px, spec.g_xp, spec.g_xx
        )
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            out.model = coupled.coupled_pair(ps, hbar, spec.C)
        out.warnings += [str(w.message) for w in caught]
        out.extras["spec"] = ps
    elif name == "bateman":
        out.model = coupled.bateman(spec.omega0, spec.gamma, hbar)
    elif name == "bath":
        if spec.omegas is None:
            bs = thermostat.discretize_bath(
                spec.omega0, spec.spacing, spec.n_modes, spec.z, spec.v, spec.u, spec.g, spec.kT, hbar
            )
            out.extras["density"] = 1.0 / spec.spacing
        else:
            om = np.asarray(spec.omegas, dtype=float)
            bs = thermostat.BathSpec(
                om, spec.z, spec.v, spec.u, spec.g, thermostat.thermal_bath_variances(om, spec.kT, hbar), hbar
            )
        out.model = thermostat.bath_model(spec.omega0, bs)
        out.reservoir = GaussianState(
            np.zeros(2 * bs.n_modes), thermostat.reservoir_covariance(bs), hbar, out.model.sigma.block(2, out.model.dim)
        )
        out.extras.update(bath=bs, omega0=spec.omega0)
    elif name == "raw":
        out.model = QuadraticModel(np.array(spec.B), spec.C, n_sub=spec.n_sub, hbar=hbar, labels=spec.labels)
    elif name == "continuum":
        f = (lambda w: np.array([thermal_variance(x, spec.kT, hbar) for x in np.atleast_1d(w)]).reshape(np.shape(w)))
        bath = ContinuumBath(spec.nu, spec.omega_min, spec.omega_max, spec.z, spec.v, spec.u, spec.g, f, hbar)
        coeffs = continuum_fp(bath, spec.omega0)
        out.generator = FPGenerator(coeffs.A, np.zeros(2), coeffs.D, standard_symplectic(1), hbar)
        out.extras.update(
            coefficients=coeffs,
            f0=thermal_variance(spec.omega0, spec.kT, hbar),
            omega0=spec.omega0,
            labels=("p", "x"),
        )
    elif name == "magnetic":
        ms = magnetic.MagneticSpec(spec.m, spec.omega0, spec.omega_c, spec.gamma_plus, spec.gamma_minus, spec.beta, hbar)
        mm = magnetic.magnetic_model(ms)
        out.generator = mm.generator
        out.extras.update(magnetic=mm, labels=("pi_x", "pi_y", "x", "y"))
    elif name == "generator":
        A = np.array(spec.A, dtype=float)
        sigma = standard_symplectic(A.shape[0] // 2) if spec.sigma is None else SymplecticForm(np.array(spec.sigma))
        K = np.zeros(A.shape[0]) if spec.K is None else np.array(spec.K, dtype=float)
        out.generator = FPGenerator(A, K, np.array(spec.D, dtype=float), sigma, hbar)
    return out


class Run:
    """One scenario evaluation.  ``write`` controls CSV and JSON output."""

    def __init__(self, cfg: ScenarioConfig, out_dir: Path | None = None, write: bool = True):
        self.cfg = cfg
        self.kind = cfg.scenario.kind
        self.out_dir = Path(out_dir if out_dir is not None else cfg.output.dir)
        self.write = write
        self.report = RunReport(cfg.scenario.id, self.kind)
        self.tol = cfg.tolerances
        self.checks: dict[str, Callable[[float | None], Verdict]] = {}

    # ---- helpers -------------------------------------------------------

    def _fail_config(self, msg: str, path: str):
        raise ConfigInvalid(msg, path)

    def times(self) -> np.ndarray:
        t = self.cfg.time
        return np.linspace(t.t_start, t.t_end, t.n_samples)

    def need_hamiltonian(self, built: Built, split: bool = False):
        if built.model is None:
            self._fail_config(f"{self.kind} scenario needs a Hamiltonian model, got {built.name}", "model")
        if split and not 0 < built.model.n_sub < built.model.n_dof:
            self._fail_config("model has no subsystem/reservoir split (set n_sub)", "model")

    def initial_full(self, built: Built) -> GaussianState:
        ini = self.cfg.initial_state
        model = built.model
        if ini.full is not None:
            return _state(ini.full, built.hbar, model.sigma)
        sub = self.initial_sub(built)
        res = self.initial_res(built)
        return product_state(sub, res)

    def initial_sub(self, built: Built) -> GaussianState:
        ini = self.cfg.initial_state
        if ini.subsystem is None:
            self._fail_config("initial_state.subsystem is required", "initial_state.subsystem")
        k = 2 * built.model.n_sub if built.model is not None else built.generator.dim
        sigma = built.model.sigma.block(0, k) if built.model is not None else built.generator.sigma
        return _state(ini.subsystem, built.hbar, sigma)

    def initial_res(self, built: Built) -> GaussianState:
        ini = self.cfg.initial_state
        model = built.model
        k = 2 * model.n_sub
        if ini.reservoir is not None:
            return _state(ini.reservoir, built.hbar, model.sigma.block(k, model.dim))
        if built.reservoir is not None:
            return built.reservoir
        self._fail_config("initial_state.reservoir is required for this model", "initial_state.reservoir")

    def add_check(self, name: str, fn: Callable[[float], Verdict]):
        self.checks[name] = fn

    def state_check(self, states: list[GaussianState]):
        def fn(tol):
            reps = [check_state_admissible(s, tol=tol or self.tol.admissibility) for s in states]
            worst = min(reps, key=lambda r: r.min_eigenvalue)
            return Verdict(
                "state_admissible",
                True,
                all(r.passed for r in reps),
                worst.min_eigenvalue,
                -worst.tolerance_used * max(worst.scale, self.cfg.hbar),
                {"boundary": any(r.boundary for r in reps)},
            )

        self.add_check("state_admissible", fn)

    def generator_checks(self, gen: FPGenerator, ts):
        def adm(tol):
            reps = [admissibility(gen, t, tol or self.tol.admissibility) for t in ts]
            worst = min(reps, key=lambda r: r.min_eigenvalue)
            return Verdict(
                "generator_admissible",
                True,
                all(r.passed for r in reps),
                worst.min_eigenvalue,
                -worst.tolerance_used * max(worst.scale, gen.hbar),
                worst.as_dict(),
            )

        def bound(tol):
            if gen.dim != 2:
                self._fail_config("diffusion_bound_1d needs one degree of freedom", "checks")
            res = [min_diffusion_bound_1d(gen, t, tol or self.tol.admissibility) for t in ts]
            gap = min(r[0] - r[1] for r in res)
            return Verdict("diffusion_bound_1d", True, all(r[2] for r in res), gap, 0.0, {"detD": res[0][0], "bound": res[0][1]})

        self.add_check("generator_admissible", adm)
        self.add_check("diffusion_bound_1d", bound)

    # ---- scenario kinds ------------------------------------------------

    def run_closed(self, built: Built):
        self.need_hamiltonian(built)
        ts = self.times()
        s0 = self.initial_full(built)
        traj = closed_trajectory(built.model, s0, ts - ts[0], self.tol.symplectic)
        self.rows(built.labels, traj)
        self.state_check(traj)

        def sym(tol):
            tol = tol or self.tol.symplectic
            S = built.model.sigma.matrix
            res = max(propagate(built.model, t - ts[0], 1.0).symplectic_residual() for t in ts) / np.abs(S).max()
            return Verdict("symplectic", True, res <= tol, res, tol)

        self.add_check("symplectic", sym)

    def run_reduce(self, built: Built):
        self.need_hamiltonian(built, split=True)
        model = built.model
        ts = self.times()
        sub0 = self.initial_sub(built)
        res0 = self.initial_res(built)
        F, gamma = res0.cov, res0.mean
        states, coeffs = [], []
        singular = []
        for t in ts:
            blocks = split_blocks(propagate(model, t, self.tol.symplectic))
            states.append(reduce(blocks, F, gamma).apply(sub0))
            try:
                coeffs.append(effective_fp(blocks, F, gamma))
            except SingularR11:
                singular.append(float(t))
                coeffs.append(None)
        if singular:
            self.report.warnings.append(f"R11 singular at t = {', '.join(format(t, '.6g') for t in singular)}")
        lab = built.sub_labels
        n = len(lab)
        nan_row = [float("nan")] * (n * n + n + n * (n + 1) // 2)
        extra = [coefficient_row(c.A, c.K, c.D) if c is not None else nan_row for c in coeffs]
        self.rows(lab, states, coefficient_header(lab), extra)
        self.state_check(states)
        good = [(t, c) for t, c in zip(ts, coeffs) if c is not None]
        sigma = sub0.sigma
        gen_at = {float(t): c for t, c in good}
        gen = FPGenerator(
            A=lambda t: gen_at[float(t)].A,
            K=lambda t: gen_at[float(t)].K,
            D=lambda t: gen_at[float(t)].D,
            sigma=sigma,
            hbar=built.hbar,
        )
        self.generator_checks(gen, [t for t, _ in good])

        def consistency(tol):
            tol = tol or DEFAULT_CHECK_TOL["reduction_consistency"]
            grid = ts if ts[0] == 0 else np.concatenate([[0.0], ts])
            egen = effective_generator(model, F, gamma, self.tol.symplectic)
            try:
                fp = evolve_moments(egen, sub0, grid, self.tol.ode_rtol, self.tol.ode_atol)
            except NumericalError as exc:
                return Verdict("reduction_consistency", True, False, None, tol, {"error": str(exc)})
            if ts[0] != 0:
                fp = fp[1:]
            dev = max(
                max(np.abs(a.mean - b.mean).max(), np.abs(a.cov - b.cov).max()) / max(1.0, np.abs(b.cov).max())
                for a, b in zip(fp, states)
            )
            return Verdict("reduction_consistency", True, dev <= tol, dev, tol)

        def drift(tol):
            tol = tol or DEFAULT_CHECK_TOL["drift_closed_form"]
            if built.name != "bateman":
                self._fail_config("drift_closed_form is available for the bateman model only", "checks")
            spec = self.cfg.model.bateman
            dev = max(np.abs(c.A - coupled.bateman_drift(spec.omega0, spec.gamma, t)).max() for t, c in good)
            return Verdict("drift_closed_form", True, dev <= tol, dev, tol)

        self.add_check("reduction_consistency", consistency)
        self.add_check("drift_closed_form", drift)

    def _generator_and_state(self, built: Built):
        if built.generator is not None:
            gen = built.generator
            ini = self.cfg.initial_state
            cfg_state = ini.full or ini.subsystem
            if cfg_state is None:
                self._fail_config("initial_state.subsystem is required", "initial_state.subsystem")
            return gen, _state(cfg_state, built.hbar, gen.sigma)
        self.need_hamiltonian(built, split=True)
        res0 = self.initial_res(built)
        gen = effective_generator(built.model, res0.cov, res0.mean, self.tol.symplectic)
        return gen, self.initial_sub(built)

    def run_fp_evolve(self, built: Built):
        gen, s0 = self._generator_and_state(built)
        ts = self.times()
        traj = evolve_moments(gen, s0, ts, self.tol.ode_rtol, self.tol.ode_atol)
        self.rows(built.sub_labels, traj)
        self.state_check(traj)
        self.generator_checks(gen, [ts[0]] if gen.is_constant else list(ts))

    def run_steady_state(self, built: Built):
        if built.generator is None:
            self._fail_config("steady-state scenario needs a constant generator model", "model")
        gen = built.generator
        F0 = steady_state(gen)
        A, K, D = gen.at(0.0)
        self.report.scalars["steady_mean"] = F0.mean.tolist()
        self.report.scalars["steady_cov"] = F0.cov.tolist()
        ini = self.cfg.initial_state
        cfg_state = ini.full or ini.subsystem
        s0 = F0 if cfg_state is None else _state(cfg_state, built.hbar, gen.sigma)
        if self.cfg.time is not None:
            ts = self.times()
            traj = evolve_moments(gen, s0, ts, self.tol.ode_rtol, self.tol.ode_atol)
            self.rows(built.labels, traj)
        else:
            traj = [s0]
        self.state_check(traj + [F0])
        self.generator_checks(gen, [0.0])

        def lyap(tol):
            tol = tol or DEFAULT_CHECK_TOL["lyapunov_residual"]
            r = np.abs(A @ F0.cov + F0.cov @ A.T + 2 * D).max() / max(np.abs(2 * D).max(), np.finfo(float).tiny)
            return Verdict("lyapunov_residual", True, r <= tol, r, tol)

        def fixed(tol):
            tol = tol or DEFAULT_CHECK_TOL["steady_state_fixed_point"]
            horizon = 10.0 / np.linalg.norm(A, 2)
            end = evolve_moments(gen, F0, [0.0, horizon], self.tol.ode_rtol, self.tol.ode_atol)[-1]
            dev = max(np.abs(end.cov - F0.cov).max(), np.abs(end.mean - F0.mean).max()) / max(np.abs(F0.cov).max(), 1e-300)
            return Verdict("steady_state_fixed_point", True, dev <= tol, dev, tol)

        def equilibrium(tol):
            tol = tol or DEFAULT_CHECK_TOL["equilibrium_match"]
            if built.name == "magnetic":
                ref = built.extras["magnetic"].equilibrium
            elif built.name == "continuum":
                w0, f0 = built.extras["omega0"], built.extras["f0"]
                ref = np.diag([w0**2 * f0, f0])
            else:
                self._fail_config("equilibrium_match needs a magnetic or continuum model", "checks")
            dev = np.abs(F0.cov - ref).max() / np.abs(ref).max()
            return Verdict("equilibrium_match", True, dev <= tol, dev, tol)

        self.add_check("lyapunov_residual", lyap)
        self.add_check("steady_state_fixed_point", fixed)
        self.add_check("equilibrium_match", equilibrium)

    def run_check(self, built: Built):
        ini = self.cfg.initial_state
        if built.generator is not None:
            gen = built.generator
            self.generator_checks(gen, [0.0])
            cfg_state = ini.full or ini.subsystem
            if cfg_state is not None:
                self.state_check([_state(cfg_state, built.hbar, gen.sigma)])
        else:
            if ini.full is not None or ini.subsystem is not None:
                self.state_check([self.initial_full(built)])
            ts = self.times() if self.cfg.time is not None else np.array([1.0])

            def sym(tol):
                tol = tol or self.tol.symplectic
                S = built.model.sigma.matrix
                res = max(propagate(built.model, t, 1.0).symplectic_residual() for t in ts) / np.abs(S).max()
                return Verdict("symplectic", True, res <= tol, res, tol)

            self.add_check("symplectic", sym)

        def gate(tol):
            if built.name != "continuum":
                self._fail_config("rwa_gate needs a continuum model", "checks")
            c = self.cfg.model.continuum
            r = rwa_gate(c.omega0, c.z, c.v, c.u, c.g, built.extras["f0"], built.hbar, tol or DEFAULT_CHECK_TOL["rwa_gate"])
            return Verdict("rwa_gate", True, r.passed, r.lhs, r.rhs)

        self.add_check("rwa_gate", gate)
        self.report.scalars.update(model_scalars(built))

    def run_bath_relax(self, built: Built):
        if built.name != "bath":
            self._fail_config("bath-relax scenario needs a bath model", "model")
        ts = self.times()
        s0 = self.initial_full(built)
        traj = subsystem_trajectory(built.model, s0, ts, 2, self.tol.symplectic)
        self.rows(built.sub_labels, traj)
        self.state_check(traj)
        w0, h = built.extras["omega0"], built.hbar
        amp = np.array([abs(w0 * s.mean[1] + 1j * s.mean[0]) / np.sqrt(2 * h * w0) for s in traj])
        fit = fit_decay(ts, amp)
        self.report.fits["decay"] = fit.as_dict()
        pred = None
        if "density" in built.extras:
            c = self.cfg.model.bath
            if any(isinstance(x, list) for x in (c.z, c.v, c.u, c.g)):
                pred = None
            else:
                pred = thermostat.predicted_damping(w0, built.extras["density"], c.z, c.v, c.u, c.g)
                self.report.scalars["predicted_rate"] = pred

        def decay(tol):
            tol = tol or DEFAULT_CHECK_TOL["decay_rate"]
            if pred is None:
                self._fail_config("decay_rate needs a discretized bath with constant couplings", "checks")
            rel = abs(fit.rate - pred) / abs(pred)
            return Verdict("decay_rate", True, rel <= tol, rel, tol, {"fitted": fit.rate, "predicted": pred})

        self.add_check("decay_rate", decay)

    def run_sweep(self, built: Built, workers: int = 1):
        sw = self.cfg.sweep
        values = parse_values(sw.values)
        raw = self.cfg.model_dump(mode="python")
        table = sweep_table(raw, sw.param, values, sw.outputs, sw.base_kind, workers)
        self.sweep_rows = ([sw.param] + list(sw.outputs), table)
        self.report.scalars["n_points"] = len(values)

    # ---- output --------------------------------------------------------

    def rows(self, labels, states, extra_header=(), extra_rows=None):
        header = ["t"] + moment_header(labels) + list(extra_header)
        ts = self.times()
        rows = []
        for i, (t, s) in enumerate(zip(ts, states)):
            r = [t] + moment_row(s, self.tol.admissibility)
            if extra_rows is not None:
                r += extra_rows[i]
            rows.append(r)
        self.table = (header, rows)

    def execute(self, workers: int = 1) -> RunReport:
        t0 = _time.perf_counter()
        self.table = None
        self.sweep_rows = None
        declared = self.cfg.checks
        for i, c in enumerate(declared):
            if c.name not in AVAILABLE[self.kind]:
                self._fail_config(f"check {c.name} is not available for {self.kind} scenarios", f"checks.{i}.name")
        built = build_model(self.cfg)
        self.report.warnings += built.warnings
        runner = {
            "closed": self.run_closed,
            "reduce": self.run_reduce,
            "fp-evolve": self.run_fp_evolve,
            "steady-state": self.run_steady_state,
            "check": self.run_check,
            "bath-relax": self.run_bath_relax,
        }
        if self.kind == "sweep":
            self.run_sweep(built, workers)
        else:
            runner[self.kind](built)
        for c in declared:
            v = self.checks[c.name](c.tol)
            v.required = c.required
            self.report.verdicts.append(v)
        self.report.wall_time = _time.perf_counter() - t0
        if self.write:
            self.flush()
        return self.report

    def flush(self):
        sid = self.cfg.scenario.id
        table = self.table or self.sweep_rows
        if table is not None:
            path = self.out_dir / f"{sid}.csv"
            write_csv(path, *table)
            self.report.outputs["csv"] = path.name
        self.report.write(self.out_dir / f"{sid}.report.json")


def run_scenario(cfg: ScenarioConfig, out_dir: Path | None = None, write: bool = True, workers: int = 1) -> RunReport:
    return Run(cfg, out_dir, write).execute(workers)


# ---- sweeps -----------------------------------------------------------------


def model_scalars(built: Built) -> dict[str, Any]:
    """Named scalar summaries of a model, used by sweeps and check reports."""
    out: dict[str, Any] = {}
    if built.name == "coupled_pair":
        spec = built.extras["spec"]
        w = coupled.normal_frequencies(spec)
        out.update(
            delta=spec.delta,
            g=spec.g,
            omega_plus_re=w[0].real,
            omega_plus_im=w[0].imag,
            omega_minus_re=w[2].real,
            omega_minus_im=w[2].imag,
            min_abs_im_omega=float(np.min(np.abs(w.imag))),
            max_abs_im_omega=float(np.max(np.abs(w.imag))),
            stability_margin=spec.omega1**2 * spec.omega2**2 - spec.g,
        )
    if built.name == "magnetic":
        mm = built.extras["magnetic"]
        s = mm.spec
        out.update(D_pi=mm.D_pi, D_a=mm.D_a, D_rho=mm.D_rho, alpha=s.alpha, eta=s.eta, epsilon=s.epsilon, Omega=s.Omega)
        if np.isfinite(s.beta) and s.omega0 > 0:
            hi = magnetic.high_temperature_coefficients(s)
            out.update(D_pi_high=hi[0], D_a_high=hi[1], D_rho_high=hi[2])
    if built.name == "continuum":
        c = built.extras["coefficients"]
        out.update(gamma=c.gamma, omega_star=c.omega_star, omega_star_bracket=c.omega_star_bracket)
        for i in range(2):
            for j in range(2):
                out[f"mu_{i + 1}{j + 1}"] = c.mu[i, j]
                out[f"D_{i + 1}{j + 1}"] = c.D[i, j]
    if built.name == "bath" and "density" in built.extras:
        out["n_modes"] = built.extras["bath"].n_modes
    if built.generator is not None:
        A, _, D = built.generator.at(0.0)
        out["min_eig_dstar"] = admissibility(built.generator).min_eigenvalue
        out["max_re_eig_A"] = float(np.max(np.linalg.eigvals(A).real))
    if built.model is not None:
        A = -built.model.sigma.matrix @ built.model.B
        out["max_re_eig_A"] = float(np.max(np.linalg.eigvals(A).real))
    return out


def _flatten(report: RunReport) -> dict[str, Any]:
    out = {}
    for k, v in report.scalars.items():
        if np.isscalar(v):
            out[k] = v
    for name, fit in report.fits.items():
        for k, v in fit.items():
            out[f"{name}.{k}"] = v
    for v in report.verdicts:
        out[f"{v.name}.passed"] = float(v.passed)
        if v.value is not None:
            out[f"{v.name}.value"] = v.value
    return out


def sweep_point(raw: dict, param: str, value: float, outputs: list[str], base_kind: str | None) -> list[float]:
    data = set_param(raw, param, value)
    data["scenario"]["kind"] = base_kind or "check"
    data.pop("sweep", None)
    cfg = validate_config(data)
    built = build_model(cfg)
    avail = model_scalars(built)
    if base_kind is not None:
        avail.update(_flatten(Run(cfg, write=False).execute()))
    missing = [o for o in outputs if o not in avail]
    if missing:
        raise UnknownParameter(f"unknown sweep outputs {missing}; available: {sorted(avail)}")
    return [value] + [float(avail[o]) for o in outputs]


def sweep_table(
    raw: dict, param: str, values: list[float], outputs: list[str], base_kind: str | None = None, workers: int = 1
) -> list[list[float]]:
    """One row per value, in input order."""
    # validate the path once up front so a typo fails before any work
    set_param(raw, param, values[0] if values else 0.0)
    args = [(raw, param, v, outputs, base_kind) for v in values]
    if workers > 1 and len(values) > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            return list(ex.map(sweep_point, *zip(*args)))
    return [sweep_point(*a) for a in args]
