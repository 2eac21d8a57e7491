"""Quadratic normal form of the holomorphic system.

The corrections ``(W2, Q2)`` are evaluated through a real-bilinear form
``B(U, V)`` with ``(W2, Q2) = B(U, U)``.  The first slot enters through
``W + conj(W)``, ``Q + conj(Q)``, ``d^{-1}W - conj(d^{-1}W)`` and ``W`` itself;
the second slot through ``V`` and its derivative.  Time derivatives of the
corrections follow from the product rule,
``d/dt B(U, U) = B(U_t, U) + B(U, U_t)``, with ``U_t`` given by the full
nonlinear right-hand side, so no time stepping enters the residual.

Two coefficients are convention dependent; see :data:`CONVENTIONS`.
"""

from __future__ import annotations

from dataclasses import dataclass

from .norms import h_pair_norm
from .spectral import Field, Params, antideriv, deriv, holomorphic_part, proj_P, zero_mean
from .waterwave import State, rhs_wq

__all__ = [
    "Convention",
    "CONVENTIONS",
    "DEFAULT_CONVENTION",
    "nf_bilinear",
    "nf_correction",
    "nf_transform",
    "nf_residual",
    "residual_norm",
]


@dataclass(frozen=True)
class Convention:
    """Coefficients of the two convention-dependent brackets in W2.

    ``gamma2`` multiplies ``gamma^2/g * [(d^{-1}W - conj d^{-1}W) W_a + W^2 + |W|^2/2]``;
    ``gamma3`` multiplies ``gamma^3/(4g^2) * [(Q + conj Q) W + (d^{-1}W - conj d^{-1}W) Q_a]``.
    """

    name: str
    gamma2: complex
    gamma3: complex


CONVENTIONS = {
    # coefficients i*gamma^2/g and i*(i gamma^3)/(4g^2)
    "doubled_i": Convention("doubled_i", 1j, -1.0),
    # single factor of i on the gamma^3 bracket, i*gamma^2/g on the gamma^2 bracket
    "single_i": Convention("single_i", 1j, 1j),
    # single i on the gamma^3 bracket and i*gamma^2/(2g) on the gamma^2 bracket
    "corrected": Convention("corrected", 0.5j, 1j),
}
DEFAULT_CONVENTION = "corrected"


def _convention(convention: str | Convention) -> Convention:
    if isinstance(convention, Convention):
        return convention
    try:
        return CONVENTIONS[convention]
    except KeyError:
        raise ValueError(f"unknown convention {convention!r}; choose from {sorted(CONVENTIONS)}") from None


def nf_bilinear(u: State, v: State, p: Params, convention: str | Convention = DEFAULT_CONVENTION):
    """Real-bilinear form whose diagonal is the normal-form correction."""
    c = _convention(convention)
    g, gm = p.g, p.gamma
    W, Q = u
    w, q = v
    wa, qa = deriv(w), deriv(q)
    sW = W + W.conj()
    sQ = Q + Q.conj()
    iW = antideriv(zero_mean(W))
    aW = iW - iW.conj()

    W2 = (
        -(sW * wa)
        - gm / (2 * g) * (sQ * wa + sW * qa)
        + c.gamma2 * gm**2 / g * (aW * wa + W * w + 0.5 * (W * w.conj()))
        - gm**2 / (4 * g**2) * (sQ * qa)
        + c.gamma3 * gm**3 / (4 * g**2) * (sQ * w + aW * qa)
        + gm**4 / (4 * g**2) * (aW * w)
    )
    Q2 = (
        -(sW * qa)
        - gm / (2 * g) * (sQ * qa)
        + 0.25j * gm * (W * w + 2 * (W * w.conj()))
        + 0.5j * gm**2 / g * (aW * qa + 0.5 * (sQ * w))
        + gm**3 / (4 * g) * (aW * w)
    )
    return W2, Q2


def nf_correction(s: State, p: Params, convention: str | Convention = DEFAULT_CONVENTION):
    """``(W2, Q2)``: the quadratic corrections at ``s``."""
    return nf_bilinear(s, s, p, convention)


def nf_transform(s: State, p: Params, convention: str | Convention = DEFAULT_CONVENTION) -> State:
    """``(W + P W2, Q + P Q2)``, cleaned to holomorphic modes."""
    W2, Q2 = nf_correction(s, p, convention)
    return State(holomorphic_part(s.W + proj_P(W2)), holomorphic_part(s.Q + proj_P(Q2)))


def nf_residual(s: State, p: Params, convention: str | Convention = DEFAULT_CONVENTION):
    """``(G, K) = (Wt_t + Qt_a, Qt_t - i g Wt + i gamma Qt)`` for the new variables."""
    dW, dQ = rhs_wq(s, p, clean=False)
    st = State(dW, dQ)
    W2, Q2 = nf_bilinear(s, s, p, convention)
    A2, B2 = nf_bilinear(st, s, p, convention)
    A3, B3 = nf_bilinear(s, st, p, convention)
    Wn = s.W + proj_P(W2)
    Qn = s.Q + proj_P(Q2)
    Wn_t = dW + proj_P(A2 + A3)
    Qn_t = dQ + proj_P(B2 + B3)
    G = Wn_t + deriv(Qn)
    K = Qn_t - 1j * p.g * Wn + 1j * p.gamma * Qn
    return G, K


def residual_norm(G: Field, K: Field) -> float:
    """``||(G, K)||`` in ``L2 x H^{1/2}``."""
    return h_pair_norm(G, K, 0.0, homogeneous=True)
