"""Experiment configurations, initial data and the verification experiments.

Each ``run_<name>`` takes an :class:`ExperimentConfig` and returns a
:class:`Report`: a pass flag, a JSON-able summary and an optional table
that the CLI writes as CSV.
"""

from __future__ import annotations

import copy
import math
from dataclasses import dataclass, field
from typing import Any, Callable, Mapping

import numpy as np
import yaml

from . import conserved
from .errors import ConfigError
from .linearized import Coupled, LinState, coupled_clean, coupled_rhs, gauge_r, lin_energy_report, to_good_variables
from .norms import control_norms, h_pair_norm
from .normal_form import CONVENTIONS, nf_residual, residual_norm
from .paradiff import paraproducts
from .spectral import Field, Grid, Params, l2_norm, max_abs, mul_dealiased, proj_P, proj_Pbar
from .timestepper import StepConfig, dispersion_test, integrate, rk4_step
from .waterwave import (
    EXACT_IDENTITIES,
    QUADRATIC_IDENTITIES,
    State,
    clean_state,
    compute_aux,
    derive,
    identity_residuals,
    rhs_wq,
)

__all__ = [
    "InitialSpec",
    "ExperimentConfig",
    "Report",
    "EXPERIMENTS",
    "DEFAULT_CONFIGS",
    "parse_config",
    "load_config",
    "make_field",
    "make_state",
    "dilate",
    "loglog_slope",
    "nonlinear_rhs",
]


# ---------------------------------------------------------------------------
# initial data


@dataclass(frozen=True)
class InitialSpec:
    """Initial-data family.

    ``single_mode``: ``W = amplitude e^{i xi alpha}`` at integer ``mode <= 0``
    and ``Q = q_amplitude e^{i xi alpha}``.

    ``random_bandlimited``: independent Gaussian coefficients on modes
    ``-band..-1`` for ``W`` and ``Q``, weighted by ``exp(-decay j)``
    (``profile: exponential``) or ``j^-decay`` (``profile: algebraic``), each
    field then scaled to sup norm ``amplitude``.
    """

    family: str = "random_bandlimited"
    amplitude: float = 1e-2
    seed: int = 0
    band: int = 8
    decay: float = 0.3
    profile: str = "exponential"
    mode: int = -1
    q_amplitude: float = 0.0

    def __post_init__(self):
        if self.family not in ("single_mode", "random_bandlimited"):
            raise ConfigError(f"initial.family must be single_mode or random_bandlimited, got {self.family!r}")
        if self.profile not in ("exponential", "algebraic"):
            raise ConfigError(f"initial.profile must be exponential or algebraic, got {self.profile!r}")
        if self.band < 1:
            raise ConfigError("initial.band must be at least 1")
        if self.mode > 0:
            raise ConfigError("initial.mode must be <= 0 (holomorphic data)")

    def replace(self, **changes) -> InitialSpec:
        return InitialSpec(**{**self.__dict__, **changes})


def make_field(grid: Grid, spec: InitialSpec, rng: np.random.Generator, amplitude: float | None = None) -> Field:
    """One random holomorphic band-limited field with sup norm ``amplitude``."""
    amp = spec.amplitude if amplitude is None else amplitude
    band = min(spec.band, grid.n_points // 2 - 1)
    j = np.arange(1, band + 1)
    weights = np.exp(-spec.decay * j) if spec.profile == "exponential" else j ** (-spec.decay)
    coeffs = (rng.standard_normal(band) + 1j * rng.standard_normal(band)) * weights
    c = np.zeros(grid.n_points, dtype=complex)
    c[grid.n_points - j] = coeffs
    f = Field(grid, c)
    peak = max_abs(f)
    return f * (amp / peak) if peak > 0 else f


def make_state(grid: Grid, spec: InitialSpec, amplitude: float | None = None, seed: int | None = None) -> State:
    amp = spec.amplitude if amplitude is None else amplitude
    if spec.family == "single_mode":
        scale = amp / spec.amplitude if spec.amplitude else 0.0
        return State(Field.mode(grid, spec.mode, amp), Field.mode(grid, spec.mode, spec.q_amplitude * scale))
    rng = np.random.default_rng(spec.seed if seed is None else seed)
    return State(make_field(grid, spec, rng, amp), make_field(grid, spec, rng, amp))


def dilate(f: Field, factor: int, grid: Grid) -> Field:
    """``f(factor * alpha)`` on ``grid`` (mode j moves to factor * j)."""
    if grid.period != f.grid.period:
        raise ValueError("dilation requires equal periods")
    c = np.zeros(grid.n_points, dtype=complex)
    j = f.grid.index
    keep = f.spectrum != 0
    target = factor * j[keep]
    if np.any(np.abs(target) >= grid.n_points // 2):
        raise ValueError("dilated field is not resolved on the target grid")
    c[target % grid.n_points] = f.spectrum[keep]
    return Field(grid, c)


def loglog_slope(xs, ys) -> float:
    xs, ys = np.asarray(xs, float), np.asarray(ys, float)
    if np.any(ys <= 0) or not np.all(np.isfinite(ys)):
        return float("nan")
    return float(np.polyfit(np.log(xs), np.log(ys), 1)[0])


def nonlinear_rhs(p: Params) -> Callable:
    def rhs(s):
        return rhs_wq(State(*s), p)

    return rhs


# ---------------------------------------------------------------------------
# configuration


@dataclass(frozen=True)
class ExperimentConfig:
    experiment: str
    grid: Grid
    g: float
    gammas: tuple[float, ...]
    initial: InitialSpec
    dt: float
    t_end: float
    scheme: str = "rk4"
    options: Mapping[str, Any] = field(default_factory=dict)
    output: str | None = None
    raw: Mapping[str, Any] = field(default_factory=dict)

    def params(self, gamma: float) -> Params:
        return Params(self.g, gamma)

    def step(self, dt: float | None = None, t_end: float | None = None) -> StepConfig:
        return StepConfig(dt=self.dt if dt is None else dt, t_end=self.t_end if t_end is None else t_end, scheme=self.scheme)

    def opt(self, key: str):
        try:
            return self.options[key]
        except KeyError:
            raise ConfigError(f"missing option {key!r} for experiment {self.experiment!r}") from None


DEFAULT_CONFIGS: dict[str, str] = {
    "dispersion": """
experiment: dispersion
grid: {n_points: 128}
params: {g: 1.0, gamma: [0.0, 1.0, 2.0]}
step: {dt: 1.0e-3, t_end: 5.0}
options: {modes: [-1, -2, -4, -8], tolerance: 1.0e-6}
""",
    "conserve": """
experiment: conserve
grid: {n_points: 256}
params: {g: 1.0, gamma: [0.0, 1.0]}
initial: {family: random_bandlimited, amplitude: 1.0e-2, band: 8, seed: 0}
step: {dt: 1.0e-3, t_end: 1.0}
options: {stride: 50, tolerance: 1.0e-8}
""",
    "normalform": """
experiment: normalform
grid: {n_points: 128}
params: {g: 1.0, gamma: [0.0, 0.5, 2.0]}
initial: {family: random_bandlimited, band: 8, seed: 0}
options:
  amplitudes: [1.0e-1, 1.0e-2, 1.0e-3]
  seeds: [0, 1, 2, 3, 4]
  conventions: [doubled_i, single_i, corrected]
  min_slope: 2.8
""",
    "linearize": """
experiment: linearize
grid: {n_points: 64}
params: {g: 1.0, gamma: [1.0]}
initial: {family: random_bandlimited, amplitude: 5.0e-2, band: 6, seed: 0}
step: {dt: 2.0e-3, t_end: 0.2}
options:
  epsilons: [1.0e-3, 1.0e-4, 1.0e-5]
  directions: [101, 102, 103]
  min_slope: 0.9
""",
    "identities": """
experiment: identities
grid: {n_points: 256}
params: {g: 1.0, gamma: [0.0, 1.0]}
initial: {family: random_bandlimited, amplitude: 1.0e-2, band: 8, seed: 0}
options:
  exact_states: 20
  exact_tolerance: 1.0e-8
  amplitudes: [1.0e-1, 1.0e-2, 1.0e-3]
  quadratic_initial: {profile: algebraic, decay: 1.5, band: 85}
  min_slope: 1.8
""",
    "norms": """
experiment: norms
grid: {n_points: 128}
params: {g: 1.0, gamma: [1.0]}
initial: {family: random_bandlimited, amplitude: 1.0e-2, band: 8, seed: 0}
options:
  backgrounds: 20
  amplitudes: [1.0e-1, 1.0e-2, 1.0e-3]
  ratio_bounds: [0.5, 2.0]
  ua_factor: 10.0
""",
    "scaling": """
experiment: scaling
grid: {n_points: 32}
params: {g: 1.0, gamma: [1.0]}
initial: {family: random_bandlimited, amplitude: 1.0e-2, band: 4, seed: 0}
step: {dt: 1.0e-2, t_end: 0.5}
options: {lam: 2, tolerance: 1.0e-7}
""",
    "infra": """
experiment: infra
grid: {n_points: 128}
params: {g: 1.0, gamma: [1.0]}
initial: {family: random_bandlimited, amplitude: 1.0e-1, band: 4, seed: 0}
options:
  pairs: 100
  paraproduct_tolerance: 1.0e-10
  plancherel_tolerance: 1.0e-12
  order_grid: 32
  order_dts: [0.08, 0.04, 0.02]
  order_t_end: 0.96
  min_order: 3.8
""",
}


def _merge(base: dict, override: Mapping) -> dict:
    out = copy.deepcopy(base)
    for key, value in override.items():
        if isinstance(value, Mapping) and isinstance(out.get(key), dict):
            out[key] = _merge(out[key], value)
        else:
            out[key] = copy.deepcopy(value)
    return out


def _section(raw: Mapping, key: str) -> dict:
    value = raw.get(key, {}) or {}
    if not isinstance(value, Mapping):
        raise ConfigError(f"section {key!r} must be a mapping")
    return dict(value)


def parse_config(raw: Mapping, command: str | None = None) -> ExperimentConfig:
    """Validate a raw mapping (already merged with defaults if desired)."""
    if not isinstance(raw, Mapping):
        raise ConfigError("configuration must be a mapping at the top level")
    name = raw.get("experiment", command)
    if command is not None and name != command:
        raise ConfigError(f"config is for experiment {name!r}, but command {command!r} was requested")
    if name not in EXPERIMENTS:
        raise ConfigError(f"unknown experiment {name!r}; choose from {sorted(EXPERIMENTS)}")
    unknown = set(raw) - {"experiment", "grid", "params", "initial", "step", "options", "output"}
    if unknown:
        raise ConfigError(f"unknown top-level keys: {sorted(unknown)}")
    try:
        gsec = _section(raw, "grid")
        grid = Grid(int(gsec.get("n_points", 128)), float(gsec.get("period", 2 * math.pi)))
        psec = _section(raw, "params")
        gammas = psec.get("gamma", [0.0])
        gammas = tuple(float(x) for x in (gammas if isinstance(gammas, (list, tuple)) else [gammas]))
        g = float(psec.get("g", 1.0))
        for gm in gammas:
            Params(g, gm)
        initial = InitialSpec(**_section(raw, "initial"))
        ssec = _section(raw, "step")
        dt = float(ssec.get("dt", 1e-3))
        t_end = float(ssec.get("t_end", 1.0))
        scheme = str(ssec.get("scheme", "rk4"))
        StepConfig(dt=dt, t_end=t_end, scheme=scheme)
    except ConfigError:
        raise
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from exc
    return ExperimentConfig(
        experiment=name,
        grid=grid,
        g=g,
        gammas=gammas,
        initial=initial,
        dt=dt,
        t_end=t_end,
        scheme=scheme,
        options=_section(raw, "options"),
        output=raw.get("output"),
        raw=dict(raw),
    )


def default_raw(command: str) -> dict:
    return yaml.safe_load(DEFAULT_CONFIGS[command])


def load_config(path: str | None, command: str, seed: int | None = None) -> ExperimentConfig:
    """Read a YAML config (``None`` for the built-in default) merged over the defaults."""
    if command not in DEFAULT_CONFIGS:
        raise ConfigError(f"unknown experiment {command!r}")
    raw = default_raw(command)
    if path is not None:
        try:
            with open(path, encoding="utf-8") as fh:
                user = yaml.safe_load(fh)
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        except yaml.YAMLError as exc:
            mark = getattr(exc, "problem_mark", None)
            where = f" (line {mark.line + 1}, column {mark.column + 1})" if mark else ""
            raise ConfigError(f"malformed config {path}{where}: {getattr(exc, 'problem', exc)}") from exc
        if user is None:
            user = {}
        if not isinstance(user, Mapping):
            raise ConfigError(f"config {path} must contain a mapping at the top level")
        raw = _merge(raw, user)
    if seed is not None:
        raw.setdefault("initial", {})["seed"] = int(seed)
    return parse_config(raw, command)


# ---------------------------------------------------------------------------
# reports


@dataclass
class Report:
    experiment: str
    passed: bool
    summary: dict[str, Any]
    columns: list[str] = field(default_factory=list)
    rows: list[list[Any]] = field(default_factory=list)

    def lines(self) -> list[str]:
        status = "PASS" if self.passed else "FAIL"
        out = [f"{self.experiment}: {status}"]
        for key, value in self.summary.items():
            out.append(f"  {key}: {_short(value)}")
        return out


def _short(value) -> str:
    if isinstance(value, float):
        return f"{value:.6g}"
    if isinstance(value, dict):
        return "{" + ", ".join(f"{k}: {_short(v)}" for k, v in value.items()) + "}"
    if isinstance(value, (list, tuple)):
        return "[" + ", ".join(_short(v) for v in value) + "]"
    return str(value)


def _drift(values) -> float:
    v0 = values[0]
    scale = abs(v0)
    worst = max(abs(v - v0) for v in values)
    if scale == 0.0:
        return 0.0 if worst == 0.0 else float("inf")
    return worst / scale


# ---------------------------------------------------------------------------
# experiments


def run_dispersion(cfg: ExperimentConfig) -> Report:
    tol = float(cfg.options.get("tolerance", 1e-6))
    modes = [int(m) for m in cfg.opt("modes")]
    rows, worst = [], 0.0
    for gm in cfg.gammas:
        result = dispersion_test(cfg.params(gm), modes, grid=cfg.grid, dt=cfg.dt, t_end=cfg.t_end, scheme=cfg.scheme)
        for j in modes:
            measured, exact = result[j]
            for root, (tm, te) in enumerate(zip(measured, exact)):
                err = abs(tm - te)
                worst = max(worst, err)
                rows.append([gm, j * cfg.grid.fundamental, root, te.real, te.imag, tm.real, tm.imag, err])
    cols = ["gamma", "xi", "root", "tau_exact_re", "tau_exact_im", "tau_measured_re", "tau_measured_im", "abs_error"]
    return Report("dispersion", worst < tol, {"max_abs_error": worst, "tolerance": tol}, cols, rows)


def run_conserve(cfg: ExperimentConfig) -> Report:
    tol = float(cfg.options.get("tolerance", 1e-8))
    stride = int(cfg.options.get("stride", 50))
    rows, summary, ok = [], {}, True
    for gm in cfg.gammas:
        p = cfg.params(gm)
        s0 = clean_state(make_state(cfg.grid, cfg.initial))
        obs = {
            "energy": lambda t, s, p=p: conserved.energy(State(*s), p),
            "momentum": lambda t, s, p=p: conserved.momentum(State(*s), p),
        }
        traj = integrate(s0, nonlinear_rhs(p), cfg.step(), obs, stride=stride or 1, clean=clean_state, params=p)
        e, m = traj.records["energy"], traj.records["momentum"]
        de, dm = _drift(e), _drift(m)
        ok &= de < tol and dm < tol
        summary[f"gamma={gm:g}"] = {"energy_drift": de, "momentum_drift": dm, "energy": e[0], "momentum": m[0]}
        for t, ev, mv in zip(traj.times, e, m):
            rows.append([gm, t, ev, mv, abs(ev - e[0]) / abs(e[0]) if e[0] else 0.0, abs(mv - m[0]) / abs(m[0]) if m[0] else 0.0])
    summary["tolerance"] = tol
    cols = ["gamma", "t", "energy", "momentum", "energy_rel_drift", "momentum_rel_drift"]
    return Report("conserve", ok, summary, cols, rows)


def run_normalform(cfg: ExperimentConfig) -> Report:
    amps = [float(a) for a in cfg.opt("amplitudes")]
    seeds = [int(s) for s in cfg.options.get("seeds", [cfg.initial.seed])]
    conventions = list(cfg.options.get("conventions", list(CONVENTIONS)))
    min_slope = float(cfg.options.get("min_slope", 2.8))
    for c in conventions:
        if c not in CONVENTIONS:
            raise ConfigError(f"unknown normal-form convention {c!r}; choose from {sorted(CONVENTIONS)}")
    rows, slopes = [], {c: {} for c in conventions}
    for gm in cfg.gammas:
        p = cfg.params(gm)
        for seed in seeds:
            base = make_state(cfg.grid, cfg.initial, amplitude=1.0, seed=seed)
            for c in conventions:
                vals = []
                for a in amps:
                    s = State(base.W * a, base.Q * a)
                    v = residual_norm(*nf_residual(s, p, c))
                    vals.append(v)
                    rows.append([c, gm, seed, a, v])
                slopes[c].setdefault(f"gamma={gm:g}", []).append(loglog_slope(amps, vals))
    passing = [c for c in conventions if all(min(v) >= min_slope for v in slopes[c].values())]
    summary = {
        "min_slope": min_slope,
        "worst_slope": {c: min(min(v) for v in slopes[c].values()) for c in conventions},
        "passing_conventions": passing,
        "selected_convention": passing[0] if passing else None,
    }
    cols = ["convention", "gamma", "seed", "amplitude", "residual_H0"]
    return Report("normalform", bool(passing), summary, cols, rows)


def _fd_error(cfg: ExperimentConfig, p: Params, s0: State, direction: State, eps: list[float]):
    step = cfg.step()
    base = integrate(s0, nonlinear_rhs(p), step, clean=clean_state, params=p).final
    d0 = derive(s0)
    l0 = gauge_r(to_good_variables(direction.W, direction.Q, d0), d0)
    coupled = Coupled(s0.W, s0.Q, l0.w, l0.r)
    lin = integrate(coupled, coupled_rhs(p), step, clean=coupled_clean, params=p).final
    d_end = derive(State(base[0], base[1]))
    ref = math.hypot(l2_norm(lin.w), l2_norm(lin.r))
    errs = []
    for e in eps:
        pert = clean_state(State(s0.W + e * direction.W, s0.Q + e * direction.Q))
        fin = integrate(pert, nonlinear_rhs(p), step, clean=clean_state, params=p).final
        w = (fin[0] - base[0]) / e
        q = (fin[1] - base[1]) / e
        r = q - d_end.R * w
        errs.append(math.hypot(l2_norm(w - lin.w), l2_norm(r - lin.r)) / ref)
    return errs


def run_linearize(cfg: ExperimentConfig) -> Report:
    eps = [float(e) for e in cfg.opt("epsilons")]
    directions = [int(d) for d in cfg.opt("directions")]
    min_slope = float(cfg.options.get("min_slope", 0.9))
    rows, slopes = [], {}
    for gm in cfg.gammas:
        p = cfg.params(gm)
        s0 = clean_state(make_state(cfg.grid, cfg.initial))
        for dseed in directions:
            h = make_state(cfg.grid, cfg.initial, amplitude=1.0, seed=dseed)
            errs = _fd_error(cfg, p, s0, h, eps)
            slope = loglog_slope(eps, errs)
            slopes[f"gamma={gm:g},direction={dseed}"] = slope
            rows.extend([gm, dseed, e, err] for e, err in zip(eps, errs))
    ok = all(s >= min_slope for s in slopes.values())
    cols = ["gamma", "direction_seed", "epsilon", "relative_error"]
    return Report("linearize", ok, {"slopes": slopes, "min_slope": min_slope}, cols, rows)


def run_identities(cfg: ExperimentConfig) -> Report:
    n_exact = int(cfg.options.get("exact_states", 20))
    tol = float(cfg.options.get("exact_tolerance", 1e-8))
    amps = [float(a) for a in cfg.opt("amplitudes")]
    min_slope = float(cfg.options.get("min_slope", 1.8))
    quad_spec = cfg.initial.replace(**dict(cfg.options.get("quadratic_initial", {})))
    rows, worst_exact, slopes = [], {k: 0.0 for k in EXACT_IDENTITIES}, {}
    for gm in cfg.gammas:
        p = cfg.params(gm)
        for k in range(n_exact):
            s = make_state(cfg.grid, cfg.initial, seed=cfg.initial.seed + k)
            d = derive(s)
            res = identity_residuals(d, s, p)
            for name in EXACT_IDENTITIES:
                worst_exact[name] = max(worst_exact[name], res[name])
                rows.append(["exact", gm, cfg.initial.seed + k, cfg.initial.amplitude, name, res[name]])
        sweep = {name: [] for name in QUADRATIC_IDENTITIES}
        for a in amps:
            s = make_state(cfg.grid, quad_spec, amplitude=a)
            res = identity_residuals(derive(s), s, p)
            for name in QUADRATIC_IDENTITIES:
                sweep[name].append(res[name])
                rows.append(["quadratic", gm, quad_spec.seed, a, name, res[name]])
        for name, vals in sweep.items():
            slopes[f"{name},gamma={gm:g}"] = loglog_slope(amps, vals)
    ok_exact = all(v < tol for v in worst_exact.values())
    ok_quad = all(v >= min_slope for v in slopes.values())
    summary = {
        "exact_ok": ok_exact,
        "quadratic_ok": ok_quad,
        "worst_exact_residual": worst_exact,
        "quadratic_slopes": slopes,
        "exact_tolerance": tol,
        "min_slope": min_slope,
    }
    cols = ["kind", "gamma", "seed", "amplitude", "identity", "residual"]
    return Report("identities", ok_exact and ok_quad, summary, cols, rows)


def run_norms(cfg: ExperimentConfig) -> Report:
    gm = cfg.gammas[0]
    p = cfg.params(gm)
    s = make_state(cfg.grid, cfg.initial)
    d = derive(s)
    aux = compute_aux(d, s, p)
    cn = control_norms(d, aux, p)
    summary: dict[str, Any] = {
        "control_norms": cn.as_dict(),
        "energy": conserved.energy(s, p),
        "momentum": conserved.momentum(s, p),
        "E0": conserved.linear_energy(s.W, s.Q, p),
    }
    pert = make_state(cfg.grid, cfg.initial, amplitude=1.0, seed=cfg.initial.seed + 1000)
    lin = LinState(pert.W, pert.Q)
    summary["linear_energies"] = lin_energy_report(lin, aux, p)

    n_bg = int(cfg.options.get("backgrounds", 20))
    lo, hi = (float(x) for x in cfg.options.get("ratio_bounds", [0.5, 2.0]))
    factor = float(cfg.options.get("ua_factor", 10.0))
    amps = [float(a) for a in cfg.options.get("amplitudes", [cfg.initial.amplitude])]
    rows, ok, worst = [], True, 0.0
    for a in amps:
        for k in range(n_bg):
            bg = make_state(cfg.grid, cfg.initial, amplitude=a, seed=cfg.initial.seed + k)
            dd = derive(bg)
            xx = compute_aux(dd, bg, p)
            ua = control_norms(dd, xx, p, s_values=()).uA
            pv = make_state(cfg.grid, cfg.initial, amplitude=1.0, seed=cfg.initial.seed + 500 + k)
            rep = lin_energy_report(LinState(pv.W, pv.Q), xx, p)
            ratio = rep["ratio_lin2_E0"]
            dev = abs(ratio - 1.0)
            good = lo <= ratio <= hi and dev <= factor * ua
            ok &= good
            worst = max(worst, dev / ua if ua else 0.0)
            rows.append([a, cfg.initial.seed + k, ua, ratio, rep["ratio_para_E0"], good])
    summary["monitor"] = {"passed": ok, "worst_deviation_over_uA": worst, "ratio_bounds": [lo, hi], "ua_factor": factor}
    cols = ["amplitude", "seed", "uA", "ratio_Elin2_E0", "ratio_E0para_E0", "within_bounds"]
    return Report("norms", ok, summary, cols, rows)


def _rel(a: State, b: State) -> float:
    num = math.hypot(l2_norm(a[0] - b[0]), l2_norm(a[1] - b[1]))
    den = math.hypot(l2_norm(b[0]), l2_norm(b[1]))
    return num / den if den else num


def scaling_errors(cfg: ExperimentConfig, gamma: float, lam: int) -> dict[str, float]:
    """Relative mismatch of both scaling symmetries after the configured run.

    The unscaled run lives on ``cfg.grid``; scaled data live on a grid
    refined by the dilation factor, so every dealiased product commutes
    with the dilation exactly.
    """
    g = cfg.g
    base_grid = cfg.grid
    s0 = clean_state(make_state(base_grid, cfg.initial))
    n_steps = cfg.step().n_steps

    # space-time: lam^-2 W(lam t, lam^2 a), lam^-3 Q(lam t, lam^2 a); gamma -> lam gamma
    m = lam * lam
    fine = Grid(base_grid.n_points * m, base_grid.period)
    unscaled = integrate(s0, nonlinear_rhs(Params(g, gamma)), StepConfig(cfg.dt * lam, cfg.dt * lam * n_steps), clean=clean_state).final
    scaled0 = State(dilate(s0.W, m, fine) / lam**2, dilate(s0.Q, m, fine) / lam**3)
    scaled = integrate(scaled0, nonlinear_rhs(Params(g, lam * gamma)), StepConfig(cfg.dt, cfg.dt * n_steps), clean=clean_state).final
    expect = State(dilate(unscaled[0], m, fine) / lam**2, dilate(unscaled[1], m, fine) / lam**3)
    spacetime = _rel(scaled, expect)

    # pure space: lam^-1 W(t, lam a), lam^-2 Q(t, lam a); g -> g / lam
    fine = Grid(base_grid.n_points * lam, base_grid.period)
    unscaled = integrate(s0, nonlinear_rhs(Params(g, gamma)), StepConfig(cfg.dt, cfg.dt * n_steps), clean=clean_state).final
    scaled0 = State(dilate(s0.W, lam, fine) / lam, dilate(s0.Q, lam, fine) / lam**2)
    scaled = integrate(scaled0, nonlinear_rhs(Params(g / lam, gamma)), StepConfig(cfg.dt, cfg.dt * n_steps), clean=clean_state).final
    expect = State(dilate(unscaled[0], lam, fine) / lam, dilate(unscaled[1], lam, fine) / lam**2)
    space = _rel(scaled, expect)
    return {"spacetime": spacetime, "space": space}


def run_scaling(cfg: ExperimentConfig) -> Report:
    lam = int(cfg.options.get("lam", 2))
    tol = float(cfg.options.get("tolerance", 1e-7))
    rows, summary, ok = [], {}, True
    for gm in cfg.gammas:
        errs = scaling_errors(cfg, gm, lam)
        for name, err in errs.items():
            rows.append([name, gm, lam, err])
            ok &= err < tol
        summary[f"gamma={gm:g}"] = errs
    summary["tolerance"] = tol
    return Report("scaling", ok, summary, ["symmetry", "gamma", "lambda", "relative_error"], rows)


def rk4_order(cfg: ExperimentConfig, gamma: float) -> tuple[float, list[float]]:
    """Observed order of the nonlinear RK4 solver against a fine reference."""
    grid = Grid(int(cfg.options.get("order_grid", 32)), cfg.grid.period)
    dts = [float(x) for x in cfg.options.get("order_dts", [0.08, 0.04, 0.02])]
    t_end = float(cfg.options.get("order_t_end", 0.96))
    p = cfg.params(gamma)
    s0 = clean_state(make_state(grid, cfg.initial))
    ref_dt = dts[-1] / 8
    ref = integrate(s0, nonlinear_rhs(p), StepConfig(ref_dt, t_end), clean=clean_state).final
    errs = []
    for dt in dts:
        fin = integrate(s0, nonlinear_rhs(p), StepConfig(dt, t_end), clean=clean_state).final
        errs.append(_rel(fin, ref))
    return loglog_slope(dts, errs), errs


def run_infra(cfg: ExperimentConfig) -> Report:
    rng = np.random.default_rng(cfg.initial.seed)
    grid = cfg.grid
    n = grid.n_points
    band = n // 3

    def rand_field():
        c = np.zeros(n, dtype=complex)
        j = np.arange(-band, band + 1)
        c[j % n] = rng.standard_normal(j.size) + 1j * rng.standard_normal(j.size)
        return Field(grid, c)

    worst_para = worst_proj = worst_planch = 0.0
    for _ in range(int(cfg.options.get("pairs", 100))):
        f, g = rand_field(), rand_field()
        prod = mul_dealiased(f, g)
        tri = paraproducts(f, g).total()
        worst_para = max(worst_para, l2_norm(tri - prod) / l2_norm(prod))
        worst_proj = max(worst_proj, float(np.max(np.abs((proj_P(f) + proj_Pbar(f) - f).spectrum))))
        phys = math.sqrt(grid.period * np.mean(np.abs(f.values) ** 2))
        worst_planch = max(worst_planch, abs(phys - l2_norm(f)) / l2_norm(f))
    order, errs = rk4_order(cfg, cfg.gammas[0])
    checks = {
        "paraproduct_triple": worst_para < float(cfg.options.get("paraproduct_tolerance", 1e-10)),
        "projection_sum": worst_proj == 0.0,
        "plancherel": worst_planch < float(cfg.options.get("plancherel_tolerance", 1e-12)),
        "rk4_order": order >= float(cfg.options.get("min_order", 3.8)),
    }
    summary = {
        "checks": checks,
        "paraproduct_error": worst_para,
        "projection_error": worst_proj,
        "plancherel_error": worst_planch,
        "rk4_order": order,
        "rk4_errors": errs,
    }
    return Report("infra", all(checks.values()), summary)


EXPERIMENTS: dict[str, Callable[[ExperimentConfig], Report]] = {
    "dispersion": run_dispersion,
    "conserve": run_conserve,
    "normalform": run_normalform,
    "linearize": run_linearize,
    "identities": run_identities,
    "norms": run_norms,
    "scaling": run_scaling,
    "infra": run_infra,
}
