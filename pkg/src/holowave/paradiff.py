"""Littlewood-Paley blocks, paraproducts and square functions.

Blocks ``P_k`` use raised-cosine windows in ``log2|xi|`` centred at
``|xi| = 2^k``; neighbouring windows are ``cos^2`` and ``sin^2`` of the same
angle, and the windows are renormalized anyway so that they sum to exactly
one on every nonzero wavenumber.  The zero mode belongs to no block.

Paraproduct conventions (``f_{<k-4}`` includes the mean of ``f``)::

    T_f g    = sum_k f_{<k-4} g_k              (blocks j <= k-5, plus mean f)
    T_g f    = mirror image
    Pi(f, g) = sum_{|j-k| <= 4} f_j g_k + mean(f) mean(g)

so the three pieces add up to the dealiased product exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import GridMismatch
from .spectral import Field, Grid, mul_dealiased, proj_P

__all__ = [
    "LPBasis",
    "ParaTriple",
    "OFFSET",
    "lp_basis",
    "lp_block",
    "paraproducts",
    "low_high",
    "balanced",
    "commutator_P",
    "square_function",
    "square_function_values",
]

#: frequency gap in T_f g = sum_k f_{<k-OFFSET} g_k
OFFSET = 4


class LPBasis:
    """Dyadic partition of unity on the wavenumbers of ``grid``."""

    def __init__(self, grid: Grid):
        self.grid = grid
        absxi = np.abs(grid.wavenumbers)
        nz = absxi > 0
        logs = np.zeros_like(absxi)
        logs[nz] = np.log2(absxi[nz])
        self.k_min = math.floor(np.log2(grid.fundamental) + 1e-12)
        self.k_max = math.ceil(np.log2(absxi.max()) - 1e-12)
        ks = np.arange(self.k_min, self.k_max + 1)
        t = logs[None, :] - ks[:, None]
        raw = np.where((np.abs(t) < 1) & nz[None, :], np.cos(np.pi / 2 * t) ** 2, 0.0)
        total = raw.sum(axis=0)
        windows = np.zeros_like(raw)
        windows[:, nz] = raw[:, nz] / total[nz]
        windows.flags.writeable = False
        self.windows = windows

    @property
    def ks(self) -> range:
        return range(self.k_min, self.k_max + 1)

    def window(self, k: int) -> np.ndarray:
        if not self.k_min <= k <= self.k_max:
            raise ValueError(f"dyadic index {k} outside [{self.k_min}, {self.k_max}]")
        return self.windows[k - self.k_min]

    def window_at(self, k: int, xi: float) -> float:
        """phi_k evaluated at a grid wavenumber."""
        j = int(round(xi / self.grid.fundamental))
        return float(self.window(k)[self.grid.coordinate_of_mode(j)])

    def block_spectra(self, f: Field) -> np.ndarray:
        """Array of shape (K, n): spectrum of P_k f for every k."""
        return self.windows * f.spectrum[None, :]


@lru_cache(maxsize=32)
def lp_basis(grid: Grid) -> LPBasis:
    return LPBasis(grid)


def lp_block(f: Field, k: int) -> Field:
    return f.with_multiplier(lp_basis(f.grid).window(k))


@dataclass(frozen=True)
class ParaTriple:
    low_high: Field
    high_low: Field
    balanced: Field

    def total(self) -> Field:
        return self.low_high + self.high_low + self.balanced


# ---------------------------------------------------------------------------
# padded-grid helpers


def _pad_blocks(spectra: np.ndarray, grid: Grid) -> np.ndarray:
    n, m = grid.n_points, grid.padded_size
    h = n // 2
    big = np.zeros(spectra.shape[:-1] + (m,), dtype=complex)
    big[..., :h] = spectra[..., :h]
    big[..., m - h + 1 :] = spectra[..., n - h + 1 :]
    return np.fft.ifft(big, axis=-1) * m


def _truncate(padded: np.ndarray, grid: Grid) -> Field:
    n, m = grid.n_points, grid.padded_size
    h = n // 2
    big = np.fft.fft(padded) / m
    c = np.zeros(n, dtype=complex)
    c[:h] = big[:h]
    c[n - h + 1 :] = big[m - h + 1 :]
    return Field(grid, c)


def _low_parts(blocks: np.ndarray, mean: complex) -> np.ndarray:
    """Row k holds mean + sum_{j <= k-5} blocks[j]."""
    cum = np.cumsum(blocks, axis=0)
    low = np.empty_like(blocks)
    low[: OFFSET + 1] = 0.0
    low[OFFSET + 1 :] = cum[: -(OFFSET + 1)]
    return low + mean


def _band_parts(blocks: np.ndarray) -> np.ndarray:
    """Row k holds sum_{|j-k| <= 4} blocks[j]."""
    k = blocks.shape[0]
    cum = np.concatenate([np.zeros_like(blocks[:1]), np.cumsum(blocks, axis=0)])
    idx = np.arange(k)
    hi = np.minimum(idx + OFFSET + 1, k)
    lo = np.maximum(idx - OFFSET, 0)
    return cum[hi] - cum[lo]


def _blocks(f: Field) -> np.ndarray:
    basis = lp_basis(f.grid)
    return _pad_blocks(basis.block_spectra(f), f.grid)


def _check(f: Field, g: Field) -> None:
    if f.grid != g.grid:
        raise GridMismatch(f"{f.grid} vs {g.grid}")


def low_high(f: Field, g: Field) -> Field:
    """T_f g."""
    _check(f, g)
    fb, gb = _blocks(f), _blocks(g)
    return _truncate(np.sum(_low_parts(fb, f.mean) * gb, axis=0), f.grid)


def balanced(f: Field, g: Field) -> Field:
    """Pi(f, g)."""
    _check(f, g)
    fb, gb = _blocks(f), _blocks(g)
    pi = np.sum(fb * _band_parts(gb), axis=0) + f.mean * g.mean
    return _truncate(pi, f.grid)


def paraproducts(f: Field, g: Field) -> ParaTriple:
    _check(f, g)
    fb, gb = _blocks(f), _blocks(g)
    t_fg = np.sum(_low_parts(fb, f.mean) * gb, axis=0)
    t_gf = np.sum(_low_parts(gb, g.mean) * fb, axis=0)
    pi = np.sum(fb * _band_parts(gb), axis=0) + f.mean * g.mean
    grid = f.grid
    return ParaTriple(_truncate(t_fg, grid), _truncate(t_gf, grid), _truncate(pi, grid))


def commutator_P(f: Field, g: Field) -> Field:
    """[P, f] g = P(f g) - f P(g)."""
    return proj_P(mul_dealiased(f, g)) - mul_dealiased(f, proj_P(g))


def square_function_values(f: Field, k_floor: int) -> np.ndarray:
    """Samples of S_{>k}(f) = (sum_{j > k} |P_j f|^2)^(1/2) at the grid nodes."""
    basis = lp_basis(f.grid)
    start = max(k_floor + 1 - basis.k_min, 0)
    spectra = basis.block_spectra(f)[start:]
    if spectra.shape[0] == 0:
        return np.zeros(f.grid.n_points)
    vals = np.fft.ifft(spectra, axis=-1) * f.grid.n_points
    return np.sqrt(np.sum(np.abs(vals) ** 2, axis=0))


def square_function(f: Field, k_floor: int) -> Field:
    return Field.from_values(f.grid, square_function_values(f, k_floor))
