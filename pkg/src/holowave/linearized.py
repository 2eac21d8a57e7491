"""Linearized flow around a solution, in the good variables ``(w, r)``.

``w`` is the variation of ``W`` and ``r = q - R w`` with ``q`` the variation
of ``Q``.  The advection operator is multiply-then-project,
``M_b f_a = P[b f_a]``.

Zero modes.  The system below fixes every nonzero mode.  On the torus its
zero modes are not the linearization of the nonlinear flow (the projection
halves the mean), so :func:`rhs_linearized` replaces them: the mean of
``w_t`` is the exact variation of the mean of ``W_t``, and the mean of ``r``
follows the gauge ``mean(q) = 0`` used for ``Q``, i.e.
``mean(r) = -mean(R w)``.
"""

from __future__ import annotations

from typing import NamedTuple

from .conserved import e0para, elin2, linear_energy
from .norms import h_pair_norm
from .spectral import Field, Params, deriv, holomorphic_part, proj_P, proj_Pbar
from .waterwave import AuxBundle, DiffState, State, clean_state, compute_aux, derive, rhs_diff, rhs_wq

__all__ = ["LinState", "Coupled", "coupled_rhs", "coupled_clean", "gauge_r", "to_good_variables", "from_good_variables", "rhs_linearized", "lin_energy_report"]


class LinState(NamedTuple):
    w: Field
    r: Field


def to_good_variables(w: Field, q: Field, d: DiffState) -> LinState:
    """``(w, q) -> (w, q - R w)``."""
    return LinState(w, holomorphic_part(q - d.R * w))


def from_good_variables(l: LinState, d: DiffState) -> tuple[Field, Field]:
    return l.w, holomorphic_part(l.r + d.R * l.w)


def _mean_rate_w(w: Field, q: Field, s: State, aux: AuxBundle, p: Params) -> complex:
    """Variation of ``mean(W_t)`` in the direction ``(w, q)``."""
    gm = p.gamma
    W, Q = s
    Wa, Qa = aux.diff.Wa, deriv(Q)
    wa, qa = deriv(w), deriv(q)
    inv, inv_bar = aux.inv, aux.inv_bar
    iJ = inv * inv_bar
    dJ = 2.0 * ((1.0 + Wa.conj()) * wa).real
    dF = proj_P((qa - qa.conj()) * iJ - (Qa - Qa.conj()) * iJ * iJ * dJ)
    dF1 = proj_P(
        w * inv_bar - W * wa.conj() * inv_bar * inv_bar + w.conj() * inv - W.conj() * wa * inv * inv
    )
    duF = dF - 0.5j * gm * dF1
    rate = -(wa * aux.uF) - (1.0 + Wa) * duF - 0.5j * gm * w
    return rate.mean


def _set_mean(f: Field, value: complex) -> Field:
    return f + (value - f.mean)


def gauge_r(l: LinState, d: DiffState) -> LinState:
    """Fix the mean of ``r`` so that ``q = r + R w`` has zero mean."""
    return LinState(l.w, _set_mean(l.r, -(d.R * l.w).mean))


def rhs_linearized(l: LinState, d: DiffState, s: State, aux: AuxBundle, p: Params, exact_means: bool = True):
    """Time derivative ``(w_t, r_t)`` of the linearized system.

    With ``exact_means=False`` the zero modes are left as the projections
    produce them.
    """
    gm, g = p.gamma, p.g
    w, r = l
    Wa, R = d
    x = aux
    W = s.W
    Wb, Rb = W.conj(), R.conj()
    wa, ra = deriv(w), deriv(r)
    Ra = deriv(R)
    one_Wa = 1.0 + Wa
    inv, inv_bar = x.inv, x.inv_bar
    inv2 = inv * inv
    iJ = inv * inv_bar

    flux = ra + Ra * w
    m = flux * iJ + Rb * wa * inv2
    m1 = w * inv_bar - Wb * wa * inv2
    m2 = Rb * w - Wb * flux * inv
    n = Rb * flux * inv

    G = one_Wa * (proj_P(m.conj()) + proj_Pbar(m))
    G1 = -(one_Wa * (proj_P(m1.conj()) - proj_Pbar(m1)))
    K = proj_Pbar(n) - proj_P(n.conj())
    K1 = proj_Pbar(m2) + proj_P(m2.conj())
    uG = G - 0.5j * gm * G1
    uK = K - 0.5j * gm * K1

    dw = (
        -proj_P(x.ub * wa)
        - proj_P(inv_bar * ra)
        - proj_P(Ra * inv_bar * w)
        - gm * proj_P(Wa.imag * inv_bar * w)
        + proj_P(uG)
    )
    dr = -proj_P(x.ub * ra) - 1j * gm * r + 1j * proj_P((g + x.ua) * inv * w) + proj_P(uK)
    if exact_means:
        dw = _set_mean(dw, _mean_rate_w(w, r + R * w, s, x, p))
        _, dR = rhs_diff(d, s, p, x)
        dr = _set_mean(dr, -(dR * w + R * dw).mean)
    return dw, dr


def lin_energy_report(l: LinState, aux: AuxBundle, p: Params) -> dict[str, float]:
    w, r = l
    e2 = elin2(w, r, aux, p)
    e0 = linear_energy(w, r, p)
    ep = e0para(w, r, aux, p)
    return {
        "E_lin2": e2,
        "E0": e0,
        "E0_para": ep,
        "ratio_lin2_E0": e2 / e0 if e0 else float("nan"),
        "ratio_para_E0": ep / e0 if e0 else float("nan"),
        "H_quarter": h_pair_norm(w, r, 0.25),
    }


class Coupled(NamedTuple):
    """Background solution and linearized state evolved together."""

    W: Field
    Q: Field
    w: Field
    r: Field


def coupled_rhs(p: Params):
    """Right-hand side for :class:`Coupled`; the background is evaluated at every stage."""

    def rhs(c: Coupled):
        s = State(c.W, c.Q)
        d = derive(s)
        x = compute_aux(d, s, p)
        dW, dQ = rhs_wq(s, p, x)
        dw, dr = rhs_linearized(LinState(c.w, c.r), d, s, x, p)
        return dW, dQ, dw, dr

    return rhs


def coupled_clean(c) -> Coupled:
    s = clean_state(State(c[0], c[1]))
    l = gauge_r(LinState(holomorphic_part(c[2]), holomorphic_part(c[3])), derive(s))
    return Coupled(s.W, s.Q, l.w, l.r)
