import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from holowave.errors import NonZeroMean
from holowave.norms import (
    ControlNorms,
    besov_norm,
    bmo_norm,
    control_norms,
    h_pair_norm,
    linf_norm,
    sobolev_norm,
    w_s4_norm,
)
from holowave.paradiff import lp_basis
from holowave.spectral import Field, Grid, Params, frac_deriv
from holowave.waterwave import State, compute_aux, derive

from conftest import random_field

ROOT2PI = math.sqrt(2 * math.pi)


def test_sobolev_modes(grid64):
    e1, e4 = Field.mode(grid64, -1), Field.mode(grid64, -4)
    for s in (-1, 0, 0.5, 2):
        assert sobolev_norm(e1, s) == pytest.approx(ROOT2PI)
    assert sobolev_norm(e4, 0.5) == pytest.approx(2 * ROOT2PI)


def test_sobolev_oracle(grid64, rng):
    f = random_field(grid64, rng)
    xi = grid64.wavenumbers
    c = f.spectrum
    hom = math.sqrt(2 * math.pi * np.sum(np.abs(xi) ** 1.5 * np.abs(c) ** 2))
    inh = math.sqrt(2 * math.pi * np.sum((1 + xi**2) ** 0.75 * np.abs(c) ** 2))
    assert sobolev_norm(f, 0.75) == pytest.approx(hom)
    assert sobolev_norm(f, 0.75, homogeneous=False) == pytest.approx(inh)
    assert sobolev_norm(f, 0.75, homogeneous=False) >= sobolev_norm(f, 0.75)
    with pytest.raises(NonZeroMean):
        sobolev_norm(f + 1.0, -0.5)


def test_h_pair(grid64, rng):
    z = Field.zeros(grid64)
    assert h_pair_norm(z, z, 0) == 0
    assert h_pair_norm(Field.mode(grid64, -1), z, 0) == pytest.approx(ROOT2PI)
    u, v = random_field(grid64, rng), random_field(grid64, rng, mean=False)
    xi = grid64.wavenumbers
    jap = (1 + xi**2) ** 0.125
    expect = math.sqrt(2 * math.pi * np.sum(jap**2 * np.abs(u.spectrum) ** 2 + jap**2 * np.abs(xi) * np.abs(v.spectrum) ** 2))
    assert h_pair_norm(u, v, 0.25) == pytest.approx(expect)


def test_besov_single_mode(grid128):
    basis = lp_basis(grid128)
    e = Field.mode(grid128, -4, 0.7)
    expect = 0.7 * math.sqrt(sum(2.0 ** (0.5 * k) * basis.window_at(k, -4.0) ** 2 for k in basis.ks))
    assert besov_norm(e, 0.25) == pytest.approx(expect)
    assert besov_norm(Field.zeros(grid128), 0) == 0


def test_besov_oracle(grid128, rng):
    f = random_field(grid128, rng, band=20)
    basis = lp_basis(grid128)
    fine = Grid(256)
    total = 0.0
    for k in basis.ks:
        c = np.zeros(256, dtype=complex)
        j = grid128.index
        c[j % 256] = basis.window(k) * f.spectrum
        total += np.max(np.abs(Field(fine, c).values)) ** 2
    assert besov_norm(f, 0) == pytest.approx(math.sqrt(total))


def test_bmo(grid128, rng):
    assert bmo_norm(Field.constant(grid128, 4.0)) == 0
    ratios = []
    for _ in range(20):
        f = random_field(grid128, rng, band=40)
        ratios.append(bmo_norm(f) / besov_norm(f, 0))
    assert max(ratios) < 3.0


def test_bmo_single_mode(grid128):
    # |S_{>k} e| is constant in alpha, so the windowed sup is the largest constant
    basis = lp_basis(grid128)
    e = Field.mode(grid128, -6, 2.0)
    best = max(np.sqrt(sum(basis.window_at(j, -6.0) ** 2 for j in basis.ks if j > k)) for k in range(basis.k_min - 1, basis.k_max + 1))
    assert bmo_norm(e) == pytest.approx(2.0 * best)


def test_w_s4(grid64, rng):
    assert w_s4_norm(Field.zeros(grid64), 0.25) == 0
    e = Field.mode(grid64, -3, 0.5)
    assert w_s4_norm(e.real, 0) == pytest.approx(0.5 * (2 * math.pi) ** 0.25 * 0.375**0.25)
    f = random_field(grid64, rng, band=20, mean=False)
    vals = frac_deriv(f, 0.25)
    fine = np.fft.ifft(np.concatenate([vals.spectrum[:32], np.zeros(256 - 64), vals.spectrum[32:]])) * 256
    assert w_s4_norm(f, 0.25) == pytest.approx((2 * math.pi * np.mean(np.abs(fine) ** 4)) ** 0.25, rel=1e-10)


def test_linf(grid64):
    e = Field.mode(grid64, -3, 1.5)
    assert linf_norm(e) == pytest.approx(1.5)


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2**31), st.floats(0.1, 10))
def test_homogeneity_and_triangle(seed, lam):
    grid = Grid(64)
    rng = np.random.default_rng(seed)
    f, g = random_field(grid, rng, mean=False), random_field(grid, rng, mean=False)
    norms = [
        lambda u: sobolev_norm(u, 0.5),
        lambda u: sobolev_norm(u, -0.5),
        linf_norm,
        lambda u: besov_norm(u, 0.25),
        bmo_norm,
        lambda u: w_s4_norm(u, 0.25),
    ]
    for norm in norms:
        assert norm(lam * f) == pytest.approx(lam * norm(f), rel=1e-10)
        assert norm(f + g) <= norm(f) + norm(g) + 1e-12


def _cn(s, gamma):
    p = Params(1.0, gamma)
    d = derive(s)
    return control_norms(d, compute_aux(d, s, p), p)


def test_control_norms_zero(grid64):
    z = Field.zeros(grid64)
    cn = _cn(State(z, z), 1.0)
    assert all(v == 0 for v in cn.as_dict().values() if not isinstance(v, dict))
    assert all(v == 0 for v in cn.N_s.values())


def test_control_norms_gamma(grid64, rng):
    W = random_field(grid64, rng, band=8, holomorphic=True, mean=False) * 1e-3
    Q = random_field(grid64, rng, band=8, holomorphic=True, mean=False) * 1e-3
    s = State(W, Q)
    c0, c1 = _cn(s, 0.0), _cn(s, 0.7)
    assert c0.uA == pytest.approx(c0.A) and c0.uB == pytest.approx(c0.B)
    assert c1.uB == pytest.approx(c1.B + 0.7 * c1.A + 0.49 * c1.A_minus_half)
    assert c1.uA >= c1.A
    values = [v for v in c1.as_dict().values() if not isinstance(v, dict)]
    assert all(v >= 0 for v in values)
    assert isinstance(c1, ControlNorms) and '"uA"' in c1.to_json()


def test_control_norms_single_mode(grid64):
    eps = 1e-3
    s = State(Field.mode(grid64, -2, eps), Field.zeros(grid64))
    p = Params(1.0, 0.0)
    d = derive(s)
    aux = compute_aux(d, s, p)
    cn = control_norms(d, aux, p)
    # Q = 0 so R = 0 and only W_alpha and Y enter A
    assert cn.A == pytest.approx(linf_norm(d.Wa) + linf_norm(aux.Y))
    assert cn.A_minus_1 == pytest.approx(eps)
    assert cn.A_minus_2 == pytest.approx(eps / 2)
    assert cn.B == pytest.approx(bmo_norm(d.Wa, 0.5))
