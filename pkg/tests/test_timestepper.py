import cmath
import math

import numpy as np
import pytest

from holowave.conserved import linear_energy
from holowave.errors import NaNDetected, StabilityViolation
from holowave.experiments import InitialSpec, make_state
from holowave.spectral import Field, Grid, Params, l2_norm
from holowave.timestepper import (
    StepConfig,
    dispersion_roots,
    dispersion_test,
    integrate,
    rhs_zero_linear,
    rk4_step,
    stability_bound,
)

GRID = Grid(64)


def test_scalar_ode():
    f = Field.constant(GRID, 1.0)
    (out,) = rk4_step((f,), lambda s: (-1j * s[0],), 0.1, clean=None)
    assert abs(out.mean - cmath.exp(-0.1j)) < 1e-7


def test_zero_stays_zero_and_identity():
    p = Params(1.0, 1.0)
    z = Field.zeros(GRID)
    traj = integrate((z, z), rhs_zero_linear(p), StepConfig(1e-2, 0.1))
    assert all(l2_norm(f) == 0 for f in traj.final)
    w, q = make_state(GRID, InitialSpec(), amplitude=1.0)
    traj = integrate((w, q), rhs_zero_linear(p), StepConfig(1e-2, 0.0), {"x": lambda t, s: t})
    assert traj.final[0] is w and traj.steps == 0 and traj.records["x"] == [0.0]


def test_stride_zero():
    p = Params()
    w, q = make_state(GRID, InitialSpec(), amplitude=1.0)
    traj = integrate((w, q), rhs_zero_linear(p), StepConfig(1e-2, 0.1), {"x": lambda t, s: t}, stride=0)
    assert traj.records["x"] == [] and traj.times == []
    traj = integrate((w, q), rhs_zero_linear(p), StepConfig(1e-2, 0.1), {"x": lambda t, s: t}, stride=3)
    assert traj.times[0] == 0 and traj.times[-1] == pytest.approx(0.1) and len(traj.times) == 5


def test_config_validation():
    for bad in ({"dt": 0, "t_end": 1}, {"dt": 1e-3, "t_end": -1}, {"dt": 1e-3, "t_end": 1, "scheme": "euler"}):
        with pytest.raises(ValueError):
            StepConfig(**bad)
    p = Params()
    with pytest.raises(StabilityViolation):
        StepConfig(1.0, 1.0).check(GRID, p)
    assert stability_bound(GRID, p) == pytest.approx(0.5 / math.sqrt(32))


def test_nan_detection():
    f = Field.constant(GRID, 1.0)
    with pytest.raises(NaNDetected):
        rk4_step((f,), lambda s: (Field.constant(GRID, np.nan),), 0.1, clean=None)


def test_roots():
    assert dispersion_roots(Params(1.0, 0.0), -1.0) == (1.0, -1.0)
    r = dispersion_roots(Params(1.0, 2.0), 0.0)
    assert r == (0.0, -2.0)


def test_dispersion_single():
    (meas, exact) = dispersion_test(Params(1.0, 0.0), -1, grid=Grid(32), t_end=2.0)[-1]
    assert np.allclose(meas, (1.0, -1.0), atol=1e-9)
    res = dispersion_test(Params(1.0, 1.0), [0, -3], grid=Grid(32), t_end=2.0)
    for j, (m, e) in res.items():
        assert np.allclose(m, e, atol=1e-9)
    with pytest.raises(ValueError):
        dispersion_test(Params(), 2)


def test_integrating_factor():
    p = Params(1.0, 1.5)
    w, q = make_state(GRID, InitialSpec(band=10), amplitude=1.0)
    cfg_if = StepConfig(0.05, 1.0, scheme="rk4_integrating_factor")
    exact = integrate((w, q), None, cfg_if, params=p).final
    approx = integrate((w, q), rhs_zero_linear(p), StepConfig(1e-3, 1.0)).final
    assert l2_norm(exact[0] - approx[0]) < 1e-9 * l2_norm(exact[0])
    e = integrate((w, q), None, cfg_if, {"E": lambda t, s: linear_energy(*s, p)}, params=p).records["E"]
    assert max(abs(v - e[0]) for v in e) < 1e-9 * e[0]
    with pytest.raises(ValueError):
        integrate((w, q), None, cfg_if)
    # nonlinear remainder zero reproduces the exact flow too
    zero = lambda s: (Field.zeros(GRID), Field.zeros(GRID))
    again = integrate((w, q), zero, cfg_if, params=p).final
    assert l2_norm(again[1] - exact[1]) < 1e-12 * l2_norm(exact[1])
