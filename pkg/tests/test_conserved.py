import math

import numpy as np
import pytest

from holowave.conserved import e0para, elin2, energy, linear_energy, momentum
from holowave.experiments import InitialSpec, make_state, nonlinear_rhs
from holowave.paradiff import paraproducts
from holowave.spectral import Field, Grid, Params, deriv, integrate
from holowave.timestepper import StepConfig
from holowave.timestepper import integrate as run
from holowave.waterwave import State, clean_state, compute_aux, derive

GRID = Grid(64)


def small(eps, seed=0):
    return make_state(GRID, InitialSpec(band=6), amplitude=eps, seed=seed)


def aux_of(s, p):
    return compute_aux(derive(s), s, p)


def test_zero():
    z = Field.zeros(GRID)
    p = Params(1.0, 1.0)
    assert energy(State(z, z), p) == 0 and momentum(State(z, z), p) == 0
    assert linear_energy(z, z, p) == 0
    x = aux_of(small(1e-2), p)
    assert elin2(z, z, x, p) == 0 and e0para(z, z, x, p) == 0


def test_energy_single_mode():
    p = Params(1.0, 0.0)
    vals = []
    for eps in (1e-2, 1e-3):
        s = State(Field.mode(GRID, -1, eps), Field.zeros(GRID))
        vals.append(abs(energy(s, p) - p.g * eps**2 * 2 * math.pi) / eps**2)
    assert vals[1] < 1e-2 * max(vals[0], 1e-300) or vals[1] < 1e-12


def test_momentum_real_integrand():
    s = small(5e-2)
    Wa = deriv(s.W)
    val = integrate((s.Q.conj() * Wa - s.Q * Wa.conj()) * (-1j))
    assert abs(val.imag) < 1e-10 * abs(val)


@pytest.mark.parametrize("gamma", [0.0, 1.0])
def test_conservation_short_run(gamma):
    p = Params(1.0, gamma)
    s0 = clean_state(small(1e-2))
    obs = {"E": lambda t, s: energy(State(*s), p), "P": lambda t, s: momentum(State(*s), p)}
    traj = run(s0, nonlinear_rhs(p), StepConfig(1e-3, 0.2), obs, stride=50, clean=clean_state, params=p)
    for key in ("E", "P"):
        v = np.array(traj.records[key])
        assert np.max(np.abs(v - v[0])) < 1e-8 * abs(v[0])


def test_linear_energy_forms():
    p = Params(1.0, 0.0)
    assert linear_energy(Field.mode(GRID, -1), Field.zeros(GRID), p) == pytest.approx(2 * math.pi)
    rng = np.random.default_rng(3)
    for _ in range(10):
        w, q = small(1.0, rng.integers(1 << 30))
        a = linear_energy(w, q, Params(2.0, 0.0))
        b = linear_energy(w, q, Params(2.0, 0.0), form="norm")
        assert abs(a - b) < 1e-10 * abs(b)
    with pytest.raises(ValueError):
        linear_energy(w, q, p, form="other")


def test_flat_background():
    p = Params(1.5, 1.0)
    z = Field.zeros(GRID)
    x = aux_of(State(z, z), p)
    w, r = small(1.0, 7)
    e0 = linear_energy(w, r, p)
    assert elin2(w, r, x, p) == pytest.approx(e0, rel=1e-12)
    assert e0para(w, r, x, p) == pytest.approx(e0, rel=1e-12)


def test_positive_and_balanced_difference():
    p = Params(1.0, 1.0)
    for seed in range(5):
        x = aux_of(small(2e-2, seed), p)
        w, r = small(1.0, 100 + seed)
        e2, ep = elin2(w, r, x, p), e0para(w, r, x, p)
        assert e2 > 0
        tri = paraproducts(x.ua, w)
        rest = float(np.real(integrate((tri.high_low + tri.balanced) * w.conj())))
        assert e2 - ep == pytest.approx(rest, abs=1e-12 * e2)
