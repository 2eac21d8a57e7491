import numpy as np
import pytest

from holowave.errors import InterfaceSingularity
from holowave.experiments import InitialSpec, loglog_slope, make_state
from holowave.spectral import Field, Grid, Params, deriv, l2_norm, proj_P, proj_Pbar
from holowave.waterwave import (
    EXACT_IDENTITIES,
    QUADRATIC_IDENTITIES,
    State,
    clean_state,
    compute_aux,
    derive,
    identity_residuals,
    rhs_diff,
    rhs_wq,
    rhs_wq_alt,
    rhs_yr,
)

GRID = Grid(128)
NARROW = InitialSpec(band=8, decay=0.3)


def small(eps=1e-2, seed=0, grid=GRID, spec=NARROW):
    return make_state(grid, spec, amplitude=eps, seed=seed)


def rel(a, b):
    return l2_norm(a - b) / max(l2_norm(b), 1e-300)


def zero_state(grid=GRID):
    z = Field.zeros(grid)
    return State(z, z)


class TestDerive:
    def test_zero(self):
        d = derive(zero_state())
        assert l2_norm(d.Wa) == 0 and l2_norm(d.R) == 0

    def test_single_mode(self):
        eps = 1e-3
        d = derive(State(Field.mode(GRID, -1, eps), Field.zeros(GRID)))
        assert l2_norm(d.Wa - Field.mode(GRID, -1, -1j * eps)) < 1e-15
        assert l2_norm(d.R) == 0

    def test_quotient_oracle(self):
        s = small(5e-2)
        d = derive(s)
        fine = Grid(512)
        up = lambda f: Field(fine, np.concatenate([f.spectrum[:64], np.zeros(384), f.spectrum[64:]]))
        W, Q = up(s.W), up(s.Q)
        oracle = Field.from_values(fine, deriv(Q).values / (1 + deriv(W).values))
        # truncation of the quotient to n modes is the only error source
        assert np.max(np.abs(up(d.R).values - oracle.values)) < 1e-8 * np.max(np.abs(oracle.values))

    def test_interface_singularity(self):
        with pytest.raises(InterfaceSingularity):
            derive(State(Field.mode(GRID, -1, 0.95), Field.zeros(GRID)))


class TestAux:
    def test_zero(self):
        s = zero_state()
        x = compute_aux(derive(s), s, Params(1.0, 1.0))
        assert np.allclose(x.J.values, 1.0)
        for name in ("a", "b", "ua", "ub", "F", "N", "M", "Y"):
            assert l2_norm(getattr(x, name)) == 0

    def test_gamma_zero(self):
        s = small()
        x = compute_aux(derive(s), s, Params(1.0, 0.0))
        for plain, under in (("F", "uF"), ("a", "ua"), ("b", "ub"), ("M", "uM")):
            assert l2_norm(getattr(x, plain) - getattr(x, under)) == 0

    def test_a_oracle(self):
        s = State(Field.mode(GRID, -2, 1e-2), Field.mode(GRID, -3, 2e-2))
        d = derive(s)
        x = compute_aux(d, s, Params(1.0, 1.0))
        R, Rb = d.R, d.R.conj()
        oracle = 1j * (proj_Pbar(Rb * deriv(R)) - proj_P(R * deriv(Rb)))
        assert rel(x.a, oracle) < 1e-12

    @pytest.mark.parametrize("seed", range(5))
    def test_realness_and_taylor_sign(self, seed):
        p = Params(1.0, 1.0)
        s = small(5e-2, seed)
        x = compute_aux(derive(s), s, p)
        for name in ("a", "a1", "b"):
            f = getattr(x, name)
            assert l2_norm(f.imag) <= 1e-10 * max(l2_norm(f), 1e-300)
        assert np.min(x.a.values.real) >= -1e-8 * np.max(np.abs(x.a.values))
        assert np.min((p.g + x.ua).values.real) > 0

    def test_y(self):
        s = small(5e-2)
        d = derive(s)
        x = compute_aux(d, s, Params())
        assert np.max(np.abs(x.Y.values - d.Wa.values / (1 + d.Wa.values))) < 1e-9


class TestRhs:
    def test_zero(self):
        s = zero_state()
        p = Params(1.0, 1.0)
        for f in (rhs_wq(s, p), rhs_wq_alt(s, p), rhs_diff(derive(s), s, p), rhs_yr(derive(s), s, p)):
            assert all(l2_norm(x) == 0 for x in f)

    def test_linear_limit(self):
        p = Params(1.0, 1.0)
        base = small(1.0)
        eps = [1e-2, 1e-3, 1e-4]
        res = []
        for e in eps:
            s = State(base.W * e, base.Q * e)
            dW, dQ = rhs_wq(s, p)
            res.append(l2_norm(dW + deriv(s.Q)) + l2_norm(dQ - 1j * p.g * s.W + 1j * p.gamma * s.Q))
        assert loglog_slope(eps, res) >= 1.9

    @pytest.mark.parametrize("gamma", [0.0, 1.0, 2.0])
    def test_two_forms_agree(self, gamma):
        p = Params(1.0, gamma)
        for seed in range(3):
            s = small(1e-2, seed)
            a, b = rhs_wq(s, p), rhs_wq_alt(s, p)
            assert rel(a[0], b[0]) < 1e-9 and rel(a[1], b[1]) < 1e-9

    @pytest.mark.parametrize("gamma", [0.0, 1.5])
    def test_chain_rule(self, gamma):
        p = Params(1.0, gamma)
        s = small(1e-2, 3)
        d = derive(s)
        dW, dQ = rhs_wq(s, p)
        dWa, dR = rhs_diff(d, s, p)
        assert rel(deriv(dW), dWa) < 1e-8
        one = 1.0 + d.Wa
        chain = (deriv(dQ) - d.R * deriv(dW)) * (one.map_values(lambda v: 1 / v))
        assert rel(dR, chain) < 1e-8
        dY, dR2 = rhs_yr(d, s, p)
        assert rel(dR2, dR) < 1e-8
        assert rel(dY, dWa * (one * one).map_values(lambda v: 1 / v)) < 1e-8

    def test_linear_part_of_r(self):
        p = Params(1.0, 1.0)
        eps = 1e-5
        s = State(Field.mode(GRID, -1, eps), Field.mode(GRID, -2, 3 * eps))
        d = derive(s)
        _, dR = rhs_diff(d, s, p)
        lead = 1j * p.g * d.Wa - 1j * p.gamma * d.R
        assert l2_norm(dR - lead) < 1e-3 * l2_norm(lead)

    def test_clean_state_means(self):
        s = State(Field.mode(GRID, -1) + 0.5 + Field.mode(GRID, 2), Field.mode(GRID, -1) + 0.5)
        c = clean_state(s)
        assert c.W.mean == 0.5 and c.Q.mean == 0
        assert c.W.is_holomorphic() and c.Q.is_holomorphic()


class TestIdentities:
    def test_zero(self):
        s = zero_state()
        res = identity_residuals(derive(s), s, Params(1.0, 1.0))
        assert set(res) == set(EXACT_IDENTITIES) | set(QUADRATIC_IDENTITIES)
        assert all(v == 0 for v in res.values())

    @pytest.mark.parametrize("gamma", [0.0, 1.0])
    def test_exact(self, gamma):
        for seed in range(5):
            s = small(1e-2, seed)
            res = identity_residuals(derive(s), s, Params(1.0, gamma))
            assert all(res[k] < 1e-8 for k in EXACT_IDENTITIES), res

    def test_quadratic_slopes(self):
        grid = Grid(256)
        spec = InitialSpec(band=85, decay=1.5, profile="algebraic")
        eps = [1e-1, 1e-2, 1e-3]
        sweeps = {k: [] for k in QUADRATIC_IDENTITIES}
        for e in eps:
            s = small(e, 0, grid, spec)
            res = identity_residuals(derive(s), s, Params(1.0, 1.0))
            for k in QUADRATIC_IDENTITIES:
                sweeps[k].append(res[k])
        for k, v in sweeps.items():
            assert loglog_slope(eps, v) >= 1.8, (k, v)
