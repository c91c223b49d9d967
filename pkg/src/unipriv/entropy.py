"""Entropic functionals of states and ensembles, all in bits."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import qmat


@dataclass(frozen=True)
class Ensemble:
    """Finite ensemble ``{p_x, sigma_x}`` of states on a common space."""

    probs: np.ndarray
    states: tuple

    def __post_init__(self):
        probs = np.asarray(self.probs, dtype=float)
        states = tuple(np.asarray(s, dtype=complex) for s in self.states)
        if probs.ndim != 1 or len(probs) != len(states):
            raise ValueError("need one probability per state")
        if np.any(probs < 0) or abs(probs.sum() - 1) > 1e-12:
            raise ValueError("probabilities must be nonnegative and sum to 1")
        if len({s.shape for s in states}) != 1:
            raise ValueError("all states must act on the same space")
        object.__setattr__(self, "probs", probs)
        object.__setattr__(self, "states", states)

    @property
    def average(self) -> np.ndarray:
        return sum(p * s for p, s in zip(self.probs, self.states))

    @property
    def dim(self) -> int:
        return self.states[0].shape[0]


def _xlogx(w):
    w = np.asarray(w, dtype=float)
    out = np.zeros_like(w)
    pos = w > 0
    out[pos] = w[pos] * np.log2(w[pos])
    return out


def shannon(p) -> float:
    """Shannon entropy with ``0 log 0 = 0``."""
    return float(-_xlogx(p).sum())


def kl(q, lam) -> float:
    """Classical relative entropy ``D(q || lam)``; ``inf`` when ``q`` is not dominated."""
    q = np.asarray(q, dtype=float)
    lam = np.asarray(lam, dtype=float)
    on = q > 0
    if np.any(lam[on] <= 0):
        return np.inf
    return float(np.sum(q[on] * np.log2(q[on] / lam[on])))


def vn_entropy(rho) -> float:
    w = np.clip(np.linalg.eigvalsh(qmat.herm(rho)), 0, None)
    return float(-_xlogx(w).sum())


def rel_entropy(rho, sigma, rel_tol=qmat.TOL_SUPPORT) -> float:
    """Umegaki relative entropy ``S(rho || sigma)``.

    Returns ``inf`` when the support of ``rho`` is not contained in that of ``sigma``.
    """
    wr, Vr = qmat.eigh(rho)
    ws, Vs = qmat.eigh(sigma)
    on_s = qmat.support_mask(ws, rel_tol)
    on_r = qmat.support_mask(wr, rel_tol)
    # weight of rho outside supp(sigma)
    Ps_perp = np.eye(len(ws)) - Vs[:, on_s] @ Vs[:, on_s].conj().T
    if np.trace(Ps_perp @ rho).real > 1e-9:
        return np.inf
    log_s = np.zeros_like(ws)
    log_s[on_s] = np.log2(ws[on_s])
    term_rho = float(np.sum(_xlogx(wr[on_r])))
    # Tr rho log sigma = sum_ij |<r_i|s_j>|^2 r_i log s_j
    overlap = np.abs(Vr.conj().T @ Vs) ** 2
    wr_c = np.where(on_r, wr, 0.0)
    term_cross = float(wr_c @ overlap @ log_s)
    return term_rho - term_cross


def renyi_rel_entropy(alpha: float, rho, sigma) -> float:
    """Petz-Renyi relative entropy ``(1/(alpha-1)) log Tr rho^alpha sigma^(1-alpha)``."""
    if not 0 < alpha < 1:
        raise ValueError(f"alpha must lie in (0, 1), got {alpha}")
    val = np.trace(qmat.frac_power(rho, alpha) @ qmat.frac_power(sigma, 1 - alpha)).real
    if val <= 0:
        return np.inf
    return float(np.log2(val) / (alpha - 1))


def classical_renyi(alpha: float, p, q) -> float:
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    on = (p > 0) & (q > 0)
    return float(np.log2(np.sum(p[on] ** alpha * q[on] ** (1 - alpha))) / (alpha - 1))


def _as_ensemble(probs, states=None) -> Ensemble:
    if isinstance(probs, Ensemble):
        return probs
    return Ensemble(probs, tuple(states))


def holevo(probs, states=None) -> float:
    """Holevo quantity ``S(sum p_x sigma_x) - sum p_x S(sigma_x)``.

    Accepts either an :class:`Ensemble` or ``(probs, states)``.
    """
    E = _as_ensemble(probs, states)
    return vn_entropy(E.average) - float(sum(p * vn_entropy(s) for p, s in zip(E.probs, E.states)))


def cq_state(probs, states=None) -> np.ndarray:
    """Block-diagonal classical-quantum state ``sum_x p_x |x><x| (x) sigma_x``."""
    E = _as_ensemble(probs, states)
    k, d = len(E.probs), E.dim
    out = np.zeros((k * d, k * d), dtype=complex)
    for x, (p, s) in enumerate(zip(E.probs, E.states)):
        out[x * d:(x + 1) * d, x * d:(x + 1) * d] = p * s
    return out


def holevo_relative(probs, states=None) -> float:
    """Holevo quantity as ``S(sigma_XQ || sigma_X (x) sigma_Q)``."""
    E = _as_ensemble(probs, states)
    return rel_entropy(cq_state(E), np.kron(np.diag(E.probs), E.average))


def alpha_chi(alpha: float, probs, states=None) -> float:
    """Closed form of the alpha-chi quantity.

    ``chi_alpha = alpha/(alpha-1) log Tr (sum_x p_x sigma_x^alpha)^(1/alpha)``,
    the minimum over ``omega`` of ``S_alpha(sigma_XQ || sigma_X (x) omega)``.
    """
    if not 0 < alpha < 1:
        raise ValueError(f"alpha must lie in (0, 1), got {alpha}")
    E = _as_ensemble(probs, states)
    A = sum(p * qmat.frac_power(s, alpha) for p, s in zip(E.probs, E.states) if p > 0)
    val = np.trace(qmat.frac_power(A, 1 / alpha)).real
    return float(alpha / (alpha - 1) * np.log2(val))
