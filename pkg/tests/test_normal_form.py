import numpy as np
import pytest

from holowave.experiments import InitialSpec, loglog_slope, make_state
from holowave.normal_form import CONVENTIONS, nf_correction, nf_residual, nf_transform, residual_norm
from holowave.spectral import Field, Grid, Params, deriv, l2_norm, proj_P
from holowave.timestepper import rk4_step
from holowave.waterwave import State, rhs_wq

GRID = Grid(128)


def base(seed=0):
    return make_state(GRID, InitialSpec(band=8), amplitude=1.0, seed=seed)


def scaled(s, e):
    return State(s.W * e, s.Q * e)


def test_zero():
    z = Field.zeros(GRID)
    p = Params(1.0, 1.0)
    for f in (nf_correction(State(z, z), p), nf_residual(State(z, z), p), nf_transform(State(z, z), p)):
        assert all(l2_norm(x) == 0 for x in f)


@pytest.mark.parametrize("name", sorted(CONVENTIONS))
def test_quadratic_homogeneity(name):
    p = Params(1.0, 1.3)
    s = scaled(base(), 1e-2)
    a = nf_correction(s, p, name)
    b = nf_correction(scaled(s, 3.0), p, name)
    for x, y in zip(a, b):
        assert l2_norm(y - 9.0 * x) < 1e-12 * l2_norm(y)


def test_gamma_zero_irrotational():
    s = scaled(base(), 1e-2)
    W2, Q2 = nf_correction(s, Params(2.0, 0.0))
    sW = s.W + s.W.conj()
    assert l2_norm(W2 + sW * deriv(s.W)) < 1e-15
    assert l2_norm(Q2 + sW * deriv(s.Q)) < 1e-15


def test_transform():
    p = Params(1.0, 1.0)
    dist = []
    eps = [1e-2, 1e-3]
    for e in eps:
        s = scaled(base(), e)
        t = nf_transform(s, p)
        assert t.W.is_holomorphic() and t.Q.is_holomorphic()
        dist.append(l2_norm(t.W - s.W) + l2_norm(t.Q - s.Q))
    assert loglog_slope(eps, dist) == pytest.approx(2.0, abs=0.05)


@pytest.mark.parametrize("gamma", [0.0, 0.5, 2.0])
def test_cubic_residual(gamma):
    p = Params(1.0, gamma)
    eps = [1e-1, 1e-2, 1e-3]
    vals = [residual_norm(*nf_residual(scaled(base(1), e), p)) for e in eps]
    assert loglog_slope(eps, vals) >= 2.8


def test_conventions_coincide_without_vorticity():
    p = Params(1.0, 0.0)
    s = scaled(base(), 1e-2)
    ref = nf_residual(s, p, "corrected")
    for name in CONVENTIONS:
        out = nf_residual(s, p, name)
        assert all(l2_norm(a - b) == 0 for a, b in zip(out, ref))


def test_unknown_convention():
    with pytest.raises(ValueError):
        nf_correction(scaled(base(), 1e-2), Params(), "nope")


def test_chain_rule_against_finite_difference():
    p = Params(1.0, 1.0)
    s = scaled(base(2), 5e-2)

    def rhs(x):
        return rhs_wq(State(*x), p, clean=False)

    def new_w(x):
        return x.W + proj_P(nf_correction(x, p)[0])

    errs = []
    G, _ = nf_residual(s, p)
    Wn_t = G - deriv(s.Q + proj_P(nf_correction(s, p)[1]))
    for h in (2e-3, 1e-3):
        fwd = rk4_step(s, rhs, h, clean=None)
        bwd = rk4_step(s, rhs, -h, clean=None)
        fd = (new_w(fwd) - new_w(bwd)) / (2 * h)
        errs.append(l2_norm(fd - Wn_t) / l2_norm(Wn_t))
    # central differences converge at second order
    assert errs[1] < 5e-6
    assert errs[0] / errs[1] > 3.5
