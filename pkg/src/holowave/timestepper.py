"""Fixed-step time integration.

States are tuples of :class:`~holowave.spectral.Field` (the ``NamedTuple``
state types of the package qualify).  A right-hand side maps a state to a
tuple of time derivatives of the same length.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Mapping, Sequence

import numpy as np

from .errors import NaNDetected, StabilityViolation
from .spectral import Field, Grid, Params, deriv, holomorphic_part

__all__ = [
    "StepConfig",
    "Trajectory",
    "stability_bound",
    "rk4_step",
    "if_rk4_step",
    "zero_linear_propagator",
    "rhs_zero_linear",
    "integrate",
    "dispersion_roots",
    "dispersion_test",
]

SCHEMES = ("rk4", "rk4_integrating_factor")

StateT = Sequence[Field]
Rhs = Callable[[StateT], Sequence[Field]]


def stability_bound(grid: Grid, p: Params, c: float = 0.5) -> float:
    """``c / sqrt(g xi_max)``: largest admissible explicit time step."""
    return c / math.sqrt(p.g * grid.xi_max)


@dataclass(frozen=True)
class StepConfig:
    dt: float
    t_end: float
    scheme: str = "rk4"
    reproject_every: int = 1
    courant: float = 0.5

    def __post_init__(self):
        if not self.dt > 0:
            raise ValueError(f"dt must be positive, got {self.dt!r}")
        if not self.t_end >= 0:
            raise ValueError(f"t_end must be nonnegative, got {self.t_end!r}")
        if self.scheme not in SCHEMES:
            raise ValueError(f"scheme must be one of {SCHEMES}, got {self.scheme!r}")
        if int(self.reproject_every) != self.reproject_every or self.reproject_every < 1:
            raise ValueError("reproject_every must be a positive integer")

    @property
    def n_steps(self) -> int:
        return int(round(self.t_end / self.dt))

    def check(self, grid: Grid, p: Params) -> None:
        bound = stability_bound(grid, p, self.courant)
        if self.dt > bound:
            raise StabilityViolation(f"dt = {self.dt:g} exceeds the stability bound {bound:.3g}")


def _combine(state: StateT, *terms: tuple[float, StateT]) -> tuple[Field, ...]:
    out = []
    for i, f in enumerate(state):
        acc = f
        for coef, k in terms:
            acc = acc + coef * k[i]
        out.append(acc)
    return tuple(out)


def _rebuild(template: StateT, fields: Sequence[Field]):
    cls = type(template)
    return cls(*fields) if hasattr(cls, "_fields") else tuple(fields)


def _check_finite(state: StateT) -> None:
    for f in state:
        if not np.all(np.isfinite(f.spectrum)):
            raise NaNDetected("non-finite value in evolved state")


def holomorphic_clean(state: StateT) -> tuple[Field, ...]:
    """Drop positive frequencies of every field; means are kept."""
    return tuple(holomorphic_part(f) for f in state)


def rk4_step(state: StateT, rhs: Rhs, dt: float, clean: Callable | None = holomorphic_clean):
    """Classical fourth-order Runge-Kutta step followed by ``clean``."""
    k1 = rhs(state)
    k2 = rhs(_rebuild(state, _combine(state, (dt / 2, k1))))
    k3 = rhs(_rebuild(state, _combine(state, (dt / 2, k2))))
    k4 = rhs(_rebuild(state, _combine(state, (dt, k3))))
    new = _combine(state, (dt / 6, k1), (dt / 3, k2), (dt / 3, k3), (dt / 6, k4))
    if clean is not None:
        new = clean(new)
    _check_finite(new)
    return _rebuild(state, new)


# ---------------------------------------------------------------------------
# flat linear flow: w_t = -q_a, q_t = i g w - i gamma q


def rhs_zero_linear(p: Params) -> Rhs:
    def rhs(state):
        w, q = state
        return -deriv(q), 1j * p.g * w - 1j * p.gamma * q

    return rhs


def zero_linear_propagator(grid: Grid, p: Params, t: float) -> np.ndarray:
    """Per-mode 2x2 matrices ``exp(t A_xi)``, shape (2, 2, n).

    ``A_xi = [[0, -i xi], [i g, -i gamma]]`` acts on the coefficients of
    ``(w, q)``.
    """
    xi = grid.wavenumbers.astype(complex)
    g, gm = p.g, p.gamma
    tr = -1j * gm
    delta = np.sqrt(g * xi - gm**2 / 4 + 0j)
    z = delta * t
    ch = np.cosh(z)
    small = np.abs(z) < 1e-8
    sh = np.where(small, t * (1 + z**2 / 6), np.sinh(z) / np.where(small, 1.0, delta))
    pre = np.exp(tr * t / 2)
    a11, a12, a21, a22 = -tr / 2 + 0 * xi, -1j * xi, 1j * g + 0 * xi, tr / 2 + 0 * xi
    e = np.empty((2, 2, grid.n_points), dtype=complex)
    e[0, 0] = pre * (ch + sh * a11)
    e[0, 1] = pre * sh * a12
    e[1, 0] = pre * sh * a21
    e[1, 1] = pre * (ch + sh * a22)
    # anti-holomorphic modes grow; they are never populated, keep them inert
    e[:, :, grid.wavenumbers > 0] = 0.0
    return e


def _apply(e: np.ndarray, state: StateT) -> tuple[Field, Field]:
    w, q = state
    cw, cq = w.spectrum, q.spectrum
    return Field(w.grid, e[0, 0] * cw + e[0, 1] * cq), Field(w.grid, e[1, 0] * cw + e[1, 1] * cq)


def if_rk4_step(state: StateT, nonlinear: Rhs | None, dt: float, half: np.ndarray, full: np.ndarray):
    """Integrating-factor RK4 for ``v_t = A v + N(v)`` with exact ``exp(A t)``.

    ``half`` and ``full`` are :func:`zero_linear_propagator` at ``dt/2`` and
    ``dt``.  With ``nonlinear=None`` the step is the exact flat linear flow.
    """
    if nonlinear is None:
        new = _apply(full, state)
    else:
        k1 = nonlinear(state)
        k2 = nonlinear(_apply(half, _combine(state, (dt / 2, k1))))
        k3 = nonlinear(_combine(_apply(half, state), (dt / 2, k2)))
        k4 = nonlinear(_combine(_apply(full, state), (dt, _apply(half, k3))))
        ek1 = _apply(full, k1)
        ek23 = _apply(half, _combine(k2, (1.0, k3)))
        new = _combine(_apply(full, state), (dt / 6, ek1), (dt / 3, ek23), (dt / 6, k4))
    _check_finite(new)
    return _rebuild(state, new)


@dataclass
class Trajectory:
    final: StateT
    times: list[float] = field(default_factory=list)
    records: dict[str, list] = field(default_factory=dict)
    steps: int = 0


def integrate(
    initial: StateT,
    rhs: Rhs | None,
    config: StepConfig,
    observers: Mapping[str, Callable[[float, StateT], object]] | None = None,
    stride: int = 1,
    clean: Callable | None = holomorphic_clean,
    params: Params | None = None,
) -> Trajectory:
    """Fixed-step integration from ``t = 0`` to ``config.t_end``.

    Observers are called at ``t = 0`` and every ``stride`` steps (and at the
    final time); ``stride = 0`` disables them.  With ``params`` given the
    step is checked against :func:`stability_bound`.  For the
    integrating-factor scheme ``rhs`` is the nonlinear remainder (``None``
    for the flat linear flow) and ``params`` is required.
    """
    observers = dict(observers or {})
    grid = initial[0].grid
    if params is not None:
        config.check(grid, params)
    traj = Trajectory(final=initial, records={name: [] for name in observers})
    n_steps = config.n_steps
    dt = config.dt

    def observe(t, state):
        traj.times.append(t)
        for name, obs in observers.items():
            traj.records[name].append(obs(t, state))

    if stride and observers:
        observe(0.0, initial)

    if config.scheme == "rk4_integrating_factor":
        if params is None:
            raise ValueError("the integrating-factor scheme needs params")
        half = zero_linear_propagator(grid, params, dt / 2)
        full = zero_linear_propagator(grid, params, dt)

    state = initial
    for step in range(1, n_steps + 1):
        do_clean = clean if step % config.reproject_every == 0 or step == n_steps else None
        if config.scheme == "rk4":
            state = rk4_step(state, rhs, dt, do_clean)
        else:
            state = if_rk4_step(state, rhs, dt, half, full)
            if do_clean is not None:
                state = _rebuild(state, do_clean(state))
        if stride and observers and (step % stride == 0 or step == n_steps):
            observe(step * dt, state)
    traj.final = state
    traj.steps = n_steps
    return traj


# ---------------------------------------------------------------------------
# dispersion relation


def dispersion_roots(p: Params, xi: float) -> tuple[complex, complex]:
    """Roots of ``tau^2 + gamma tau + g xi = 0``, larger real part first."""
    disc = np.sqrt(complex(p.gamma**2 - 4 * p.g * xi))
    r1 = (-p.gamma + disc) / 2
    r2 = (-p.gamma - disc) / 2
    return complex(r1), complex(r2)


def _eigen_data(grid: Grid, p: Params, modes: Sequence[int], root: int):
    """Superposed eigen-initializations for the chosen root of each mode."""
    cw = np.zeros(grid.n_points, dtype=complex)
    cq = np.zeros(grid.n_points, dtype=complex)
    for j in modes:
        xi = grid.fundamental * j
        idx = grid.coordinate_of_mode(j)
        tau = dispersion_roots(p, xi)[root]
        if j == 0:
            if root == 1 or p.gamma == 0:  # tau = -gamma: (w, q) = (0, 1)
                cq[idx] = 1.0
            else:  # tau = 0: (w, q) = (1, g / gamma)
                cw[idx] = 1.0
                cq[idx] = p.g / p.gamma
        else:
            cw[idx] = 1.0
            cq[idx] = -tau / xi
    return Field(grid, cw), Field(grid, cq)


def dispersion_test(
    p: Params,
    xi: int | Sequence[int],
    grid: Grid | None = None,
    dt: float = 1e-3,
    t_end: float = 5.0,
    samples: int = 50,
    scheme: str = "rk4",
) -> dict[int, tuple[tuple[complex, complex], tuple[complex, complex]]]:
    """Measured and exact frequencies for integer modes ``xi`` (<= 0).

    Each root is excited by its eigenvector; all requested modes share one
    run per root since the flat flow decouples them.  The frequency is the
    least-squares slope of the unwrapped phase of the excited coefficient.
    Returns ``{mode: ((tau1_measured, tau2_measured), (tau1_exact, tau2_exact))}``.
    """
    modes = [xi] if np.isscalar(xi) else list(xi)
    if any(int(j) != j or j > 0 for j in modes):
        raise ValueError("modes must be nonpositive integers")
    modes = [int(j) for j in modes]
    grid = grid or Grid(128)
    stride = max(1, int(round(t_end / dt / samples)))
    measured = {j: [] for j in modes}
    for root in (0, 1):
        w0, q0 = _eigen_data(grid, p, modes, root)

        read_q = {j: j == 0 and (root == 1 or p.gamma == 0) for j in modes}

        def coeffs(t, state, read_q=read_q):
            w, q = state
            return {j: (q if read_q[j] else w).spectrum[grid.coordinate_of_mode(j)] for j in modes}

        cfg = StepConfig(dt=dt, t_end=t_end, scheme=scheme)
        rhs = rhs_zero_linear(p) if scheme == "rk4" else None
        traj = integrate((w0, q0), rhs, cfg, {"c": coeffs}, stride=stride, params=p)
        t = np.asarray(traj.times)
        for j in modes:
            z = np.array([rec[j] for rec in traj.records["c"]])
            phase = np.unwrap(np.angle(z))
            growth = np.log(np.abs(z))
            slope = np.polyfit(t, phase, 1)[0]
            rate = np.polyfit(t, growth, 1)[0]
            measured[j].append(complex(slope, -rate))
    return {
        j: (tuple(measured[j]), dispersion_roots(p, grid.fundamental * j)) for j in modes
    }
