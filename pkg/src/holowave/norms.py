"""Function-space norms and the water-wave control norms.

Conventions.  ``L2`` norms are continuous (``sqrt(L sum |c_j|^2)``).  Sup
norms are sampled on a twice-refined grid.  ``W^{s,4}`` norms are exact for
band-limited fields: ``|g|^4`` is resolved without aliasing on the 2n grid.
Negative-order quantities act on the mean-free part of their argument.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from typing import TYPE_CHECKING

import numpy as np

from .paradiff import lp_basis, square_function_values
from .spectral import Field, Grid, Params, deriv, frac_deriv, zero_mean

if TYPE_CHECKING:
    from .waterwave import AuxBundle, DiffState

__all__ = [
    "sobolev_norm",
    "h_pair_norm",
    "linf_norm",
    "besov_norm",
    "bmo_norm",
    "w_s4_norm",
    "ControlNorms",
    "control_norms",
]


def _refined(spectrum: np.ndarray, grid: Grid, factor: int = 2) -> np.ndarray:
    """Samples of a band-limited spectrum (or stack of spectra) on a factor*n grid."""
    n = grid.n_points
    m = factor * n
    h = n // 2
    big = np.zeros(spectrum.shape[:-1] + (m,), dtype=complex)
    big[..., :h] = spectrum[..., :h]
    big[..., m - h + 1 :] = spectrum[..., n - h + 1 :]
    return np.fft.ifft(big, axis=-1) * m


def _order(f: Field, s: float) -> Field:
    if s == 0:
        return f
    return frac_deriv(zero_mean(f) if s < 0 else f, s)


def sobolev_norm(f: Field, s: float, homogeneous: bool = True) -> float:
    """``|||D|^s f||_{L2}`` or ``||<D>^s f||_{L2}``.

    The homogeneous norm with ``s = 0`` is the plain L2 norm (mean included);
    for ``s > 0`` the mean carries no weight and for ``s < 0`` it must vanish.
    """
    grid = f.grid
    c = f.spectrum
    if homogeneous:
        if s == 0:
            w = np.ones(grid.n_points)
        else:
            if s < 0:
                frac_deriv(f, s)  # raises NonZeroMean when appropriate
            w = grid.abs_xi_power(s)
    else:
        w = (1.0 + grid.wavenumbers**2) ** (s / 2)
    return math.sqrt(grid.period * float(np.sum(w**2 * np.abs(c) ** 2)))


def h_pair_norm(u: Field, v: Field, s: float, homogeneous: bool = False) -> float:
    """Norm of (u, v) in H^s = <D>^{-s}(L2 x H^{1/2}-dot), or its homogeneous version."""
    grid = u.grid
    if homogeneous:
        wu = grid.abs_xi_power(s) if s != 0 else np.ones(grid.n_points)
    else:
        wu = (1.0 + grid.wavenumbers**2) ** (s / 2)
    wv = wu * grid.abs_xi_power(0.5)
    total = np.sum(wu**2 * np.abs(u.spectrum) ** 2) + np.sum(wv**2 * np.abs(v.spectrum) ** 2)
    return math.sqrt(grid.period * float(total))


def linf_norm(f: Field) -> float:
    return float(np.max(np.abs(_refined(f.spectrum, f.grid))))


def besov_norm(f: Field, s: float) -> float:
    """Homogeneous B^s_{inf,2}: (sum_k 2^{2sk} ||P_k f||_inf^2)^(1/2)."""
    basis = lp_basis(f.grid)
    blocks = _refined(basis.block_spectra(f), f.grid)
    sup = np.max(np.abs(blocks), axis=-1)
    weights = 2.0 ** (2 * s * np.arange(basis.k_min, basis.k_max + 1))
    return math.sqrt(float(np.sum(weights * sup**2)))


def bmo_norm(f: Field, s: float = 0.0) -> float:
    """Square-function BMO^s estimator.

    ``sup_k sup_Q (1/|Q|) int_Q |S_{>k} |D|^s f|^2`` over windows ``Q`` of
    length ``2^-k`` aligned with the grid (all periodic translates), rooted.
    Window lengths are clamped to between one grid cell and one period.
    """
    g = _order(f, s)
    grid = g.grid
    basis = lp_basis(grid)
    n = grid.n_points
    best = 0.0
    for k in range(basis.k_min - 1, basis.k_max + 1):
        sq = square_function_values(g, k) ** 2
        m = int(round(2.0**-k / grid.spacing))
        m = min(max(m, 1), n)
        ext = np.concatenate([[0.0], np.cumsum(np.concatenate([sq, sq[: m - 1]]))])
        means = (ext[m : m + n] - ext[:n]) / m
        best = max(best, float(means.max()))
    return math.sqrt(best)


def w_s4_norm(f: Field, s: float) -> float:
    """Homogeneous W^{s,4}: L4 norm of |D|^s f."""
    g = _order(f, s)
    vals = _refined(g.spectrum, g.grid)
    return float((g.grid.period * np.mean(np.abs(vals) ** 4)) ** 0.25)


# ---------------------------------------------------------------------------
# control norms


@dataclass(frozen=True)
class ControlNorms:
    A: float
    B: float
    A_minus_half: float
    A_minus_1: float
    A_minus_3half: float
    A_minus_2: float
    uB: float
    uA: float
    A_quarter: float
    A_minus_quarter: float
    A_minus_3quarter: float
    uA_quarter: float
    A_sharp: float
    A_sharp_quarter: float
    uA_sharp: float
    uA_sharp_quarter: float
    N_s: dict[str, float] = field(default_factory=dict)

    def as_dict(self) -> dict:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), indent=2, sort_keys=True)


def control_norms(d: DiffState, aux: AuxBundle, p: Params, s_values=(0.0, 0.25, 0.5)) -> ControlNorms:
    """All control norms of the differentiated state ``d``.

    ``aux`` supplies ``Y`` and the undifferentiated state (``aux.state``).
    """
    Wa, R = d.Wa, d.R
    W, Q = aux.state.W, aux.state.Q
    Y = aux.Y
    gm = p.gamma
    half_R = frac_deriv(R, 0.5)

    A = linf_norm(Wa) + linf_norm(Y) + max(linf_norm(half_R), besov_norm(half_R, 0.0))
    B = bmo_norm(Wa, 0.5) + bmo_norm(deriv(R), 0.0)
    A_mh = linf_norm(frac_deriv(W, 0.5)) + linf_norm(R)
    A_m1 = linf_norm(W) + bmo_norm(Q, 0.5)
    A_m3h = linf_norm(_order(W, -0.5))
    A_m2 = linf_norm(_order(W, -1.0))
    uB = B + gm * A + gm**2 * A_mh
    uA = A + gm * A_mh + gm**2 * A_m1 + gm**3 * A_m3h + gm**4 * A_m2

    A_q = besov_norm(Wa, 0.25) + besov_norm(R, 0.75)
    A_mq = besov_norm(Wa, -0.25) + besov_norm(R, 0.25)
    A_m3q = besov_norm(Wa, -0.75) + besov_norm(R, -0.25)
    uA_q = A_q + gm**0.5 * A + gm * A_mq + gm**1.5 * A_mh + gm**2 * A_m3q

    A_sh = w_s4_norm(Wa, 0.25) + w_s4_norm(R, 0.75)
    A_sh_q = w_s4_norm(Wa, 0.5) + w_s4_norm(R, 1.0)
    uA_sh = (
        A_sh
        + gm**0.5 * w_s4_norm(R, 0.5)
        + gm * w_s4_norm(W, 0.75)
        + gm * w_s4_norm(R, 0.25)
        + gm**1.5 * w_s4_norm(R, 0.0)
        + gm**2 * w_s4_norm(W, 0.25)
        + gm**2 * w_s4_norm(R, -0.25)
    )
    uA_sh_q = (
        A_sh_q
        + gm**0.5 * w_s4_norm(R, 0.75)
        + gm * w_s4_norm(W, 1.0)
        + gm * w_s4_norm(R, 0.5)
        + gm**1.5 * w_s4_norm(R, 0.25)
        + gm**2 * w_s4_norm(W, 0.5)
        + gm**2 * w_s4_norm(R, 0.0)
    )
    n_s = {}
    for s in s_values:
        a = sobolev_norm(zero_mean(Wa) if s < 0 else Wa, s)
        r = sobolev_norm(zero_mean(R) if s + 0.5 < 0 else R, s + 0.5)
        n_s[f"{s:g}"] = math.hypot(a, r)

    return ControlNorms(
        A=A,
        B=B,
        A_minus_half=A_mh,
        A_minus_1=A_m1,
        A_minus_3half=A_m3h,
        A_minus_2=A_m2,
        uB=uB,
        uA=uA,
        A_quarter=A_q,
        A_minus_quarter=A_mq,
        A_minus_3quarter=A_m3q,
        uA_quarter=uA_q,
        A_sharp=A_sh,
        A_sharp_quarter=A_sh_q,
        uA_sharp=uA_sh,
        uA_sharp_quarter=uA_sh_q,
        N_s=n_s,
    )
