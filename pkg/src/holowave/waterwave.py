"""Water waves with constant vorticity in holomorphic coordinates.

State variables are the holomorphic position ``W`` and velocity potential
``Q``; the differentiated (good) variables are ``Wa = W_alpha`` and
``R = Q_alpha / (1 + Wa)``.  All quotients are computed as a pointwise
reciprocal followed by a dealiased product.

Mean conventions on the torus.  ``P`` halves the zero mode, so it is only
used where the equations call for it.  Holomorphic clean-up of evolved or
derived fields drops the positive frequencies and keeps the mean, except
that the mean of ``Q`` (which only enters through derivatives) is gauged
to zero.  The mean of ``W`` evolves with the flow.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import NamedTuple

import numpy as np

from .errors import InterfaceSingularity
from .paradiff import commutator_P, low_high
from .spectral import (
    Field,
    Params,
    antideriv,
    deriv,
    holomorphic_part,
    l2_norm,
    proj_P,
    proj_Pbar,
    reciprocal,
    zero_mean,
)

__all__ = [
    "State",
    "DiffState",
    "AuxBundle",
    "DELTA",
    "clean_state",
    "derive",
    "compute_aux",
    "rhs_wq",
    "rhs_wq_alt",
    "rhs_diff",
    "rhs_yr",
    "identity_residuals",
    "EXACT_IDENTITIES",
    "QUADRATIC_IDENTITIES",
]

#: default lower bound for inf |1 + W_alpha|
DELTA = 0.1


class State(NamedTuple):
    W: Field
    Q: Field


class DiffState(NamedTuple):
    Wa: Field
    R: Field


def clean_state(s: State) -> State:
    """Project both fields onto holomorphic modes; keep W's mean, zero Q's."""
    W, Q = s
    return State(holomorphic_part(W), holomorphic_part(Q, keep_mean=False))


def _interface_check(Wa: Field, delta: float) -> None:
    low = float(np.min(np.abs(1.0 + Wa.values)))
    if not low > delta:
        raise InterfaceSingularity(f"inf |1 + W_alpha| = {low:.3g} <= delta = {delta:g}")


def derive(s: State, delta: float = DELTA) -> DiffState:
    Wa = deriv(s.W)
    _interface_check(Wa, delta)
    R = holomorphic_part(deriv(s.Q) * reciprocal(1.0 + Wa))
    return DiffState(Wa, R)


@dataclass(frozen=True)
class AuxBundle:
    state: State
    diff: DiffState
    params: Params
    inv: Field  # 1 / (1 + Wa)
    inv_bar: Field  # 1 / (1 + conj Wa)
    Y: Field
    J: Field
    F: Field
    F1: Field
    uF: Field
    T1: Field
    a: Field
    a1: Field
    N: Field
    b: Field
    b1: Field
    ua: Field
    ub: Field
    M: Field
    M1: Field
    uM: Field

    # paraproduct auxiliaries are only needed by diagnostics; build on demand
    @cached_property
    def X(self) -> Field:
        """T_{1-Y} W."""
        return low_high(1.0 - self.Y, self.state.W)

    @cached_property
    def Z(self) -> Field:
        """T_{1-Y} Q."""
        return low_high(1.0 - self.Y, self.state.Q)

    @cached_property
    def U(self) -> Field:
        """T_{1-Y} d^{-1} W (mean of W removed first)."""
        return low_high(1.0 - self.Y, antideriv(zero_mean(self.state.W)))


def compute_aux(d: DiffState, s: State, p: Params, delta: float = DELTA) -> AuxBundle:
    """Every auxiliary function at one time slice.

    ``M`` and ``M1`` use their projection forms, so that comparing them with
    their defining expressions (see :func:`identity_residuals`) is a real
    check rather than a tautology.
    """
    W, Q = s
    Wa, R = d
    _interface_check(Wa, delta)
    gm = p.gamma
    Wb, Qa = W.conj(), deriv(Q)
    Qab, Wab = Qa.conj(), Wa.conj()
    Rb = R.conj()
    Ra, Rab = deriv(R), deriv(R).conj()

    inv = reciprocal(1.0 + Wa)
    inv_bar = inv.conj()
    J = ((1.0 + Wa) * (1.0 + Wab)).real
    iJ = reciprocal(J)
    Y = holomorphic_part(Wa * inv)
    Yb = Y.conj()
    Ya = deriv(Y)

    F = proj_P((Qa - Qab) * iJ)
    F1 = proj_P(W * inv_bar + Wb * inv)
    uF = F - 0.5j * gm * F1
    T1 = proj_P(W * Qab * inv_bar - Wb * Qa * inv)

    a = 1j * (proj_Pbar(Rb * Ra) - proj_P(R * Rab))
    N = proj_P(W * Rab - Wab * R) + proj_Pbar(Wb * Ra - Wa * Rb)
    a1 = R + Rb - N
    ua = a + 0.5 * gm * a1

    b = proj_P(Qa * iJ) + proj_Pbar(Qab * iJ)
    b1 = proj_P(W * inv_bar) - proj_Pbar(Wb * inv)
    ub = b - 0.5j * gm * b1

    M = proj_Pbar(Rb * Ya - Ra * Yb) + proj_P(R * Ya.conj() - Rab * Y)
    M1 = deriv(proj_P(W * Yb)) - deriv(proj_Pbar(Wb * Y))
    uM = M - 0.5j * gm * M1

    return AuxBundle(
        state=s, diff=d, params=p, inv=inv, inv_bar=inv_bar, Y=Y, J=J, F=F, F1=F1, uF=uF, T1=T1,
        a=a, a1=a1, N=N, b=b, b1=b1, ua=ua, ub=ub, M=M, M1=M1, uM=uM,
    )


def _aux(s: State, p: Params, aux: AuxBundle | None, delta: float) -> AuxBundle:
    if aux is not None:
        return aux
    return compute_aux(derive(s, delta), s, p, delta)


def _clean_pair(dW: Field, dQ: Field) -> tuple[Field, Field]:
    return holomorphic_part(dW), holomorphic_part(dQ, keep_mean=False)


def rhs_wq(s: State, p: Params, aux: AuxBundle | None = None, delta: float = DELTA, clean: bool = True):
    """Time derivative (W_t, Q_t) of the holomorphic system.

    With ``clean=False`` the raw right-hand side is returned, including the
    rate of change of Q's mean.
    """
    W, Q = s
    gm, g = p.gamma, p.g
    Qa = deriv(Q)
    if aux is not None:
        Wa, uF, iJ, T1 = aux.diff.Wa, aux.uF, reciprocal(aux.J), aux.T1
    else:
        # only the pieces this form needs
        Wa = deriv(W)
        _interface_check(Wa, delta)
        Wb, Qab = W.conj(), Qa.conj()
        inv = reciprocal(1.0 + Wa)
        inv_bar = inv.conj()
        iJ = reciprocal(((1.0 + Wa) * (1.0 + Wa.conj())).real)
        uF = proj_P((Qa - Qab) * iJ) - 0.5j * gm * proj_P(W * inv_bar + Wb * inv)
        T1 = proj_P(W * Qab * inv_bar - Wb * Qa * inv)
    dW = -((Wa + 1.0) * uF) - 0.5j * gm * W
    dQ = 1j * g * W - uF * Qa - 1j * gm * Q - proj_P(Qa * Qa.conj() * iJ) + 0.5j * gm * T1
    return _clean_pair(dW, dQ) if clean else (dW, dQ)


def rhs_wq_alt(s: State, p: Params, aux: AuxBundle | None = None, delta: float = DELTA, clean: bool = True):
    """Same flow written with the advection velocity ``ub``."""
    x = _aux(s, p, aux, delta)
    W, Q = s
    gm, g = p.gamma, p.g
    Wa, Qa, R = x.diff.Wa, deriv(Q), x.diff.R
    Rb, Wb = R.conj(), W.conj()
    dW = -(x.ub * (Wa + 1.0)) - 0.5j * gm * W + Rb + 0.5j * gm * Wb
    dQ = (
        -(x.ub * Qa)
        + 1j * g * W
        - 1j * gm * Q
        + 0.5j * gm * (Rb * W)
        + proj_Pbar(R * Rb)
        - 0.5j * gm * proj_Pbar(W * Rb - Wb * R)
    )
    return _clean_pair(dW, dQ) if clean else (dW, dQ)


def rhs_diff(d: DiffState, s: State, p: Params, aux: AuxBundle | None = None, delta: float = DELTA):
    """Time derivative (Wa_t, R_t) of the differentiated system."""
    x = aux if aux is not None else compute_aux(d, s, p, delta)
    gm, g = p.gamma, p.g
    Wa, R = d
    Wab, Rb = Wa.conj(), R.conj()
    Ra = deriv(R)
    one_Wa = 1.0 + Wa
    dWa = (
        -(x.ub * deriv(Wa))
        - one_Wa * Ra * x.inv_bar
        + one_Wa * x.uM
        + 0.5j * gm * (Wa * (Wa - Wab))
    )
    dR = (
        -(x.ub * Ra)
        - 1j * gm * R
        + 1j * ((g * Wa - x.a) * x.inv)
        + 0.5j * gm * ((R * Wa + Rb * Wa + x.N) * x.inv)
    )
    return holomorphic_part(dWa), holomorphic_part(dR)


def rhs_yr(d: DiffState, s: State, p: Params, aux: AuxBundle | None = None, delta: float = DELTA):
    """Time derivative (Y_t, R_t) from the material-derivative form."""
    x = aux if aux is not None else compute_aux(d, s, p, delta)
    gm = p.gamma
    R, Y = d.R, x.Y
    Rb, Yb = R.conj(), Y.conj()
    Ra, Ya = deriv(R), deriv(Y)
    one_Y = 1.0 - Y
    one_Yb = one_Y.conj()
    bracket = Y * Y - Yb * reciprocal(one_Yb) * Y * one_Y
    dY = -(x.ub * Ya) - (one_Y * one_Yb).real * Ra + one_Y * x.uM + 0.5j * gm * bracket
    dR = -(x.ub * Ra) + 1j * ((p.g + x.ua) * Y) - 1j * x.ua - 0.5j * gm * (R - Rb)
    return holomorphic_part(dY), holomorphic_part(dR)


# ---------------------------------------------------------------------------
# static identities

EXACT_IDENTITIES = ("ub_alpha", "M_dual", "M1_dual", "N_commutator")
QUADRATIC_IDENTITIES = ("X_alpha_T1mY_Wa", "X_alpha_T1pWa_Y", "Y_T1mY2_Wa", "Z_alpha_R", "U_alpha_X")


def _relative(lhs: Field, rhs: Field) -> float:
    scale = max(l2_norm(lhs), l2_norm(rhs))
    diff = l2_norm(lhs - rhs)
    return 0.0 if scale == 0.0 else diff / scale


def identity_residuals(d: DiffState, s: State, p: Params, aux: AuxBundle | None = None) -> dict[str, float]:
    """Residuals of the algebraic and paradifferential identities.

    The first four are exact identities and are reported relative to the
    size of their two sides.  The last five hold up to quadratic errors and
    are reported as absolute L2 norms, so that their amplitude scaling can
    be measured.
    """
    x = aux if aux is not None else compute_aux(d, s, p)
    gm = p.gamma
    W = s.W
    Wa, R = d
    Wab, Rb, Wb = Wa.conj(), R.conj(), W.conj()
    Ra, Rab = deriv(R), deriv(R).conj()

    lead = Ra * x.inv_bar + Rab * x.inv
    out = {}
    out["ub_alpha"] = _relative(deriv(x.ub), lead - 0.5j * gm * (Wa - Wab) - x.uM)
    out["M_dual"] = _relative(lead - deriv(x.b), x.M)
    out["M1_dual"] = _relative(Wa - Wab - deriv(x.b1), x.M1)

    def comm_bar(f: Field, g: Field) -> Field:
        return proj_Pbar(f * g) - f * proj_Pbar(g)

    n_comm = comm_bar(Wb, Ra) - comm_bar(Rb, Wa) + commutator_P(W, Rab) - commutator_P(R, Wab)
    out["N_commutator"] = _relative(x.N, n_comm)

    Y = x.Y
    Xa = deriv(x.X)
    out["X_alpha_T1mY_Wa"] = l2_norm(Xa - low_high(1.0 - Y, Wa))
    out["X_alpha_T1pWa_Y"] = l2_norm(Xa - low_high(1.0 + Wa, Y))
    out["Y_T1mY2_Wa"] = l2_norm(Y - low_high((1.0 - Y) * (1.0 - Y), Wa))
    out["Z_alpha_R"] = l2_norm(deriv(x.Z) - R)
    out["U_alpha_X"] = l2_norm(deriv(x.U) - x.X)
    return out
