"""Conserved quantities and linear energies.

All integrals use spectral quadrature: ``int f = L * mean(f)`` after every
product in the integrand has been dealiased, which is exact for resolved
integrands.

Energy and momentum of the nonlinear flow are written in the real
variables ``X + iY = W`` (``Y = Im W``, ``X_alpha = Re W_alpha``)::

    E = int 2g Y^2 (1 + X_a) - i Q conj(Q_a) + 2 gamma Re(Q_a) Y^2
            + (2/3) gamma^2 Y^3 (1 + X_a)
    P = int (conj(Q) W_a - Q conj(W_a)) / i - 2 gamma Y^2 (1 + X_a)

Both are exactly conserved by :func:`holowave.waterwave.rhs_wq`.  The
complex-variable expressions with ``|W|^2`` are available as
:func:`energy_complex_form` and :func:`momentum_complex_form` for comparison;
they agree with the above only at quadratic order when vorticity is present.
"""

from __future__ import annotations

import numpy as np

from .paradiff import low_high
from .norms import sobolev_norm
from .spectral import Field, Params, deriv, integrate, l2_norm
from .waterwave import AuxBundle, State

__all__ = [
    "energy",
    "momentum",
    "energy_complex_form",
    "momentum_complex_form",
    "linear_energy",
    "elin2",
    "e0para",
]


def _real(value: complex) -> float:
    return float(np.real(value))


def energy(s: State, p: Params) -> float:
    W, Q = s
    g, gm = p.g, p.gamma
    Y = W.imag
    one_Xa = 1.0 + deriv(W).real
    Qa = deriv(Q)
    YY = Y * Y
    integrand = (
        2 * g * (YY * one_Xa)
        - 1j * (Q * Qa.conj())
        + 2 * gm * (Qa.real * YY)
        + (2.0 / 3.0) * gm**2 * (YY * Y * one_Xa)
    )
    return _real(integrate(integrand))


def momentum(s: State, p: Params) -> float:
    W, Q = s
    Wa = deriv(W)
    Y = W.imag
    integrand = (Q.conj() * Wa - Q * Wa.conj()) * (-1j) - 2 * p.gamma * (Y * Y * (1.0 + Wa.real))
    return _real(integrate(integrand))


def energy_complex_form(s: State, p: Params) -> float:
    """``Re int g|W|^2(1+W_a) - iQ conj(Q_a) + gamma Q_a (Im W)^2 - gamma^3/(2i)|W|^2(1+W_a)``."""
    W, Q = s
    g, gm = p.g, p.gamma
    Wa, Qa = deriv(W), deriv(Q)
    A = W * W.conj() * (1.0 + Wa)
    Y = W.imag
    integrand = g * A - 1j * (Q * Qa.conj()) + gm * (Qa * Y * Y) - gm**3 / 2j * A
    return _real(integrate(integrand))


def momentum_complex_form(s: State, p: Params) -> complex:
    """``int (conj(Q)W_a - Q conj(W_a))/i - gamma|W|^2 + gamma/2 (W^2 conj(W_a) - conj(W)^2 W_a)``."""
    W, Q = s
    gm = p.gamma
    Wa = deriv(W)
    Wb, Wab = W.conj(), Wa.conj()
    integrand = (Q.conj() * Wa - Q * Wab) * (-1j) - gm * (W * Wb) + 0.5 * gm * (W * W * Wab - Wb * Wb * Wa)
    return integrate(integrand)


def linear_energy(w: Field, q: Field, p: Params, form: str = "integral") -> float:
    """Conserved energy of the flat linear flow, ``g||w||^2 + ||q||^2_{H^1/2}``.

    ``form="integral"`` evaluates ``int g|w|^2 - i q conj(q_a)``;
    ``form="norm"`` uses the Fourier-side norms.
    """
    if form == "integral":
        return _real(integrate(p.g * (w * w.conj()) - 1j * (q * deriv(q).conj())))
    if form == "norm":
        return p.g * l2_norm(w) ** 2 + sobolev_norm(q, 0.5) ** 2
    raise ValueError(f"unknown form {form!r}")


def _im_r_ra(r: Field) -> float:
    return float(np.imag(integrate(r * deriv(r).conj())))


def elin2(w: Field, r: Field, aux: AuxBundle, p: Params) -> float:
    """``int (g + ua)|w|^2 + Im(r conj(r_a))``."""
    return _real(integrate((p.g + aux.ua) * (w * w.conj()))) + _im_r_ra(r)


def e0para(w: Field, r: Field, aux: AuxBundle, p: Params) -> float:
    """``int T_{g+ua} w * conj(w) + Im(r conj(r_a))``.

    The constant part ``g`` of the para-coefficient multiplies all of ``w``.
    """
    tw = p.g * w + low_high(aux.ua, w)
    return _real(integrate(tw * w.conj())) + _im_r_ra(r)
