"""Periodic spectral foundation.

A :class:`Field` is a complex periodic function sampled on a uniform
:class:`Grid`.  Its canonical representation is the vector of normalized
Fourier coefficients ``c_j`` (``f(alpha) = sum_j c_j exp(i xi_j alpha)``),
stored in FFT order; physical samples and the zero-padded samples used for
dealiased products are computed on demand and cached.

Holomorphic fields are those with spectrum supported on ``xi <= 0``.

``Field * Field`` is the dealiased product (3/2 zero padding, which is the
2/3 rule seen from the other side): it returns the exact product truncated
to ``|j| < n/2``.  The Nyquist mode ``j = -n/2`` is never produced by
products and is ignored when padding.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from numbers import Number
from typing import Callable

import numpy as np

from .errors import GridMismatch, NonZeroMean

__all__ = [
    "Grid",
    "Field",
    "Params",
    "hilbert",
    "proj_P",
    "proj_Pbar",
    "deriv",
    "antideriv",
    "frac_deriv",
    "mul_dealiased",
    "holomorphic_part",
    "zero_mean",
    "reciprocal",
    "integrate",
    "l2_norm",
    "max_abs",
    "MEAN_TOL",
]

#: relative size of the zero mode tolerated by inverse multipliers
MEAN_TOL = 1e-10


@dataclass(frozen=True)
class Grid:
    """Uniform periodic grid of ``n_points`` nodes on ``[0, period)``."""

    n_points: int
    period: float = 2 * math.pi

    def __post_init__(self):
        n = self.n_points
        if int(n) != n or n < 16 or n % 2:
            raise ValueError(f"n_points must be an even integer >= 16, got {n!r}")
        if not self.period > 0:
            raise ValueError(f"period must be positive, got {self.period!r}")
        object.__setattr__(self, "n_points", int(n))
        object.__setattr__(self, "period", float(self.period))

    @cached_property
    def index(self) -> np.ndarray:
        """Integer mode numbers j in FFT order (j = -n/2 is the Nyquist mode)."""
        j = np.fft.fftfreq(self.n_points, 1.0 / self.n_points).astype(np.int64)
        j.flags.writeable = False
        return j

    @cached_property
    def wavenumbers(self) -> np.ndarray:
        """xi_j = 2 pi j / L, FFT order."""
        xi = 2 * np.pi / self.period * self.index
        xi.flags.writeable = False
        return xi

    @cached_property
    def nodes(self) -> np.ndarray:
        a = np.arange(self.n_points) * self.spacing
        a.flags.writeable = False
        return a

    @property
    def spacing(self) -> float:
        return self.period / self.n_points

    @property
    def fundamental(self) -> float:
        """Smallest nonzero |xi|."""
        return 2 * np.pi / self.period

    @property
    def xi_max(self) -> float:
        return self.fundamental * (self.n_points // 2)

    @property
    def padded_size(self) -> int:
        return 3 * self.n_points // 2

    @cached_property
    def _multipliers(self) -> dict[str, np.ndarray]:
        xi = self.wavenumbers
        sgn = np.sign(xi)
        p = np.where(xi < 0, 1.0, np.where(xi == 0, 0.5, 0.0))
        ixi = 1j * xi
        inv = np.zeros_like(ixi)
        nz = xi != 0
        inv[nz] = 1.0 / ixi[nz]
        return {"sgn": sgn, "P": p, "ixi": ixi, "inv_ixi": inv, "absxi": np.abs(xi)}

    def abs_xi_power(self, s: float) -> np.ndarray:
        """|xi|^s with the zero mode set to 0 (for every s)."""
        a = self._multipliers["absxi"]
        out = np.zeros_like(a)
        nz = a != 0
        out[nz] = a[nz] ** s
        return out

    def coordinate_of_mode(self, j: int) -> int:
        """Storage position of integer mode j."""
        if not -self.n_points // 2 <= j < self.n_points // 2:
            raise ValueError(f"mode {j} not representable on {self}")
        return j % self.n_points


class Field:
    """Immutable complex periodic field on a :class:`Grid`.

    Arithmetic: ``+``/``-`` between fields or with scalars, scalar ``*`` and
    ``/``, and ``Field * Field`` as the dealiased product.
    """

    __slots__ = ("grid", "_c", "_v", "_pad")
    __array_priority__ = 1000  # keep numpy scalars from broadcasting over us

    def __init__(self, grid: Grid, spectrum: np.ndarray, _values: np.ndarray | None = None):
        c = np.asarray(spectrum, dtype=complex)
        if c.shape != (grid.n_points,):
            raise ValueError(f"spectrum has shape {c.shape}, expected ({grid.n_points},)")
        c.flags.writeable = False
        self.grid = grid
        self._c = c
        self._v = _values
        self._pad = None

    # construction ----------------------------------------------------
    @classmethod
    def from_values(cls, grid: Grid, values) -> Field:
        v = np.array(values, dtype=complex)
        if v.shape != (grid.n_points,):
            raise ValueError(f"values have shape {v.shape}, expected ({grid.n_points},)")
        v.flags.writeable = False
        return cls(grid, np.fft.fft(v) / grid.n_points, _values=v)

    @classmethod
    def from_spectrum(cls, grid: Grid, spectrum) -> Field:
        return cls(grid, np.array(spectrum, dtype=complex))

    @classmethod
    def zeros(cls, grid: Grid) -> Field:
        return cls(grid, np.zeros(grid.n_points, dtype=complex))

    @classmethod
    def constant(cls, grid: Grid, value: complex) -> Field:
        c = np.zeros(grid.n_points, dtype=complex)
        c[0] = value
        return cls(grid, c)

    @classmethod
    def mode(cls, grid: Grid, j: int, amplitude: complex = 1.0) -> Field:
        """``amplitude * exp(i xi_j alpha)``."""
        c = np.zeros(grid.n_points, dtype=complex)
        c[grid.coordinate_of_mode(j)] = amplitude
        return cls(grid, c)

    @classmethod
    def from_function(cls, grid: Grid, func: Callable[[np.ndarray], np.ndarray]) -> Field:
        return cls.from_values(grid, func(grid.nodes))

    # representations -------------------------------------------------
    @property
    def spectrum(self) -> np.ndarray:
        return self._c

    @property
    def values(self) -> np.ndarray:
        if self._v is None:
            v = np.fft.ifft(self._c) * self.grid.n_points
            v.flags.writeable = False
            self._v = v
        return self._v

    def padded_values(self) -> np.ndarray:
        """Samples on the 3n/2 grid after zero padding (Nyquist dropped)."""
        if self._pad is None:
            n = self.grid.n_points
            m = self.grid.padded_size
            h = n // 2
            big = np.zeros(m, dtype=complex)
            big[:h] = self._c[:h]
            big[m - h + 1 :] = self._c[n - h + 1 :]
            self._pad = np.fft.ifft(big) * m
        return self._pad

    # elementary properties ------------------------------------------
    @property
    def mean(self) -> complex:
        return complex(self._c[0])

    def conj(self) -> Field:
        c = np.conj(np.roll(self._c[::-1], 1))
        v = None if self._v is None else np.conj(self._v)
        return Field(self.grid, c, _values=v)

    @property
    def real(self) -> Field:
        return (self + self.conj()) * 0.5

    @property
    def imag(self) -> Field:
        return (self - self.conj()) * (-0.5j)

    def positive_part_norm(self) -> float:
        """l2 size of the xi > 0 coefficients (holomorphy leakage)."""
        return float(np.linalg.norm(self._c[self.grid.wavenumbers > 0]))

    def coefficient_norm(self) -> float:
        return float(np.linalg.norm(self._c))

    def is_holomorphic(self, rtol: float = 1e-10) -> bool:
        total = self.coefficient_norm()
        if total == 0.0:
            return True
        return bool(np.max(np.abs(self._c[self.grid.wavenumbers > 0]), initial=0.0) <= rtol * total)

    def with_multiplier(self, m: np.ndarray) -> Field:
        return Field(self.grid, self._c * m)

    def map_values(self, func: Callable[[np.ndarray], np.ndarray]) -> Field:
        """Apply ``func`` pointwise on the collocation nodes (no dealiasing)."""
        return Field.from_values(self.grid, func(self.values))

    # arithmetic ------------------------------------------------------
    def _check(self, other: Field) -> None:
        if other.grid != self.grid:
            raise GridMismatch(f"{self.grid} vs {other.grid}")

    def __add__(self, other):
        if isinstance(other, Field):
            self._check(other)
            return Field(self.grid, self._c + other._c)
        if isinstance(other, Number):
            c = self._c.copy()
            c[0] += other
            return Field(self.grid, c)
        return NotImplemented

    __radd__ = __add__

    def __neg__(self):
        return Field(self.grid, -self._c)

    def __sub__(self, other):
        if isinstance(other, (Field, Number)):
            return self + (-other)
        return NotImplemented

    def __rsub__(self, other):
        if isinstance(other, Number):
            return (-self) + other
        return NotImplemented

    def __mul__(self, other):
        if isinstance(other, Field):
            return mul_dealiased(self, other)
        if isinstance(other, Number):
            return Field(self.grid, self._c * other)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Number):
            return Field(self.grid, self._c / other)
        return NotImplemented

    def __repr__(self):
        return f"Field(n={self.grid.n_points}, L={self.grid.period:.6g}, |c|={self.coefficient_norm():.3e})"


@dataclass(frozen=True)
class Params:
    """Gravity ``g > 0`` and constant vorticity ``gamma >= 0``."""

    g: float = 1.0
    gamma: float = 0.0

    def __post_init__(self):
        if not self.g > 0:
            raise ValueError(f"g must be positive, got {self.g!r}")
        if not self.gamma >= 0:
            raise ValueError(f"gamma must be nonnegative, got {self.gamma!r}; flip alpha -> -alpha instead")


# ---------------------------------------------------------------------------
# multipliers


def hilbert(f: Field) -> Field:
    """Multiplier -i sgn(xi); the mean is annihilated."""
    return f.with_multiplier(-1j * f.grid._multipliers["sgn"])


def proj_P(f: Field) -> Field:
    """Projection onto negative frequencies, ``(I - iH)/2``; halves the mean."""
    return f.with_multiplier(f.grid._multipliers["P"])


def proj_Pbar(f: Field) -> Field:
    """Projection onto positive frequencies, ``I - P``."""
    return f.with_multiplier(1.0 - f.grid._multipliers["P"])


def deriv(f: Field) -> Field:
    return f.with_multiplier(f.grid._multipliers["ixi"])


def _require_zero_mean(f: Field, what: str) -> None:
    if abs(f.spectrum[0]) > MEAN_TOL * max(f.coefficient_norm(), np.finfo(float).tiny):
        raise NonZeroMean(f"{what} needs a zero-mean field (mean = {f.mean:.3e}); subtract the mean first")


def antideriv(f: Field) -> Field:
    """Zero-mean antiderivative, multiplier ``1/(i xi)``."""
    _require_zero_mean(f, "antideriv")
    return f.with_multiplier(f.grid._multipliers["inv_ixi"])


def frac_deriv(f: Field, s: float) -> Field:
    """|D|^s, zero mode sent to 0."""
    if s < 0:
        _require_zero_mean(f, f"|D|^{s}")
    return f.with_multiplier(f.grid.abs_xi_power(s))


def mul_dealiased(f: Field, g: Field) -> Field:
    """Product of two fields, exact up to truncation at |j| < n/2."""
    if f.grid != g.grid:
        raise GridMismatch(f"{f.grid} vs {g.grid}")
    grid = f.grid
    n, m = grid.n_points, grid.padded_size
    h = n // 2
    big = np.fft.fft(f.padded_values() * g.padded_values()) / m
    c = np.zeros(n, dtype=complex)
    c[:h] = big[:h]
    c[n - h + 1 :] = big[m - h + 1 :]
    return Field(grid, c)


# ---------------------------------------------------------------------------
# helpers


def holomorphic_part(f: Field, keep_mean: bool = True) -> Field:
    """Drop xi > 0 coefficients (and the Nyquist mode); optionally the mean too.

    Unlike :func:`proj_P` this keeps the mean intact, so it is the right
    clean-up for a field that is holomorphic up to round-off.
    """
    grid = f.grid
    keep = grid.wavenumbers <= 0
    keep[grid.n_points // 2] = False
    if not keep_mean:
        keep[0] = False
    return f.with_multiplier(keep.astype(float))


def zero_mean(f: Field) -> Field:
    c = f.spectrum.copy()
    c[0] = 0.0
    return Field(f.grid, c)


def reciprocal(f: Field) -> Field:
    """Pointwise 1/f on the collocation nodes."""
    return f.map_values(lambda v: 1.0 / v)


def integrate(f: Field) -> complex:
    """Integral over one period (exact for resolved fields)."""
    return complex(f.spectrum[0]) * f.grid.period


def l2_norm(f: Field) -> float:
    return math.sqrt(f.grid.period) * f.coefficient_norm()


def max_abs(f: Field) -> float:
    return float(np.max(np.abs(f.values)))
