"""Channel-independent operators on ``H^{(x)n}``.

The projector ``I_q`` onto the span of basis sequences of type ``q``, its
unitary-orbit enlargement ``~I_q`` (no preferred basis), the flat states
``tau_q`` and ``tau_n``, the per-sequence states ``omega_{x^n}`` and the
delta-typical projector of ``sigma^{(x)n}``.

``~I_q`` is computed numerically: orbit vectors ``U^{(x)n}|y^n>`` for
Haar-random ``U`` are accumulated into an orthonormal basis until three
consecutive unitaries add nothing.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass

import numpy as np

from . import qmat
from .entropy import kl, shannon, vn_entropy
from .seqtypes import enumerate_types, is_typical_type, ordered_rep, type_class


@dataclass(frozen=True)
class InvariantProjector:
    q: tuple
    d: int
    proj: np.ndarray
    rank: int
    unitaries_used: int


def _readonly(A):
    A.flags.writeable = False
    return A


def _sequences(q) -> np.ndarray:
    n = sum(q)
    return np.array(list(type_class(q)), dtype=int).reshape(-1, n)


def _basis_index(seqs, d: int) -> np.ndarray:
    seqs = np.atleast_2d(seqs)
    n = seqs.shape[1]
    weights = d ** np.arange(n - 1, -1, -1)
    return seqs @ weights


def projector_Iq(q, d: int | None = None) -> np.ndarray:
    """Diagonal projector onto ``span{|y^n> : type(y^n) = q}``; ``d`` defaults to ``len(q)``."""
    q = tuple(int(c) for c in q)
    d = len(q) if d is None else d
    if len(q) != d:
        raise ValueError(f"type {q} has {len(q)} letters but d = {d}")
    n = sum(q)
    diag = np.zeros(d**n)
    diag[_basis_index(_sequences(q), d)] = 1.0
    return np.diag(diag)


def orbit_vectors(U, seqs) -> np.ndarray:
    """Rows ``U^{(x)n} |y^n>`` for each sequence row of ``seqs``."""
    seqs = np.atleast_2d(seqs)
    V = U[:, seqs[:, 0]].T
    for i in range(1, seqs.shape[1]):
        V = (V[:, :, None] * U[:, seqs[:, i]].T[:, None, :]).reshape(len(seqs), -1)
    return V


def _extend_basis(Q: np.ndarray, vecs: np.ndarray, tol: float) -> np.ndarray:
    """Append the components of ``vecs`` orthogonal to the columns of ``Q``.

    Gram-Schmidt with one reorthogonalisation pass; residual norms at or
    below ``tol`` are dropped.
    """
    cols = [Q] if Q.shape[1] else []
    basis = Q
    for v in vecs:
        for _ in range(2):
            if basis.shape[1]:
                v = v - basis @ (basis.conj().T @ v)
        nv = np.linalg.norm(v)
        if nv > tol:
            cols.append((v / nv)[:, None])
            basis = np.hstack(cols)
            cols = [basis]
    return basis


@functools.lru_cache(maxsize=None)
def _tilde(q: tuple, d: int, seed: int, tol: float, patience: int, max_unitaries: int) -> InvariantProjector:
    n = sum(q)
    D = d**n
    seqs = _sequences(q)
    rng = np.random.default_rng(seed)
    Q = np.zeros((D, 0), dtype=complex)
    idle = used = 0
    while Q.shape[1] < D and idle < patience:
        if used >= max_unitaries:
            raise RuntimeError(
                f"orbit span for q={q}, d={d} did not saturate within {max_unitaries} unitaries "
                f"(rank {Q.shape[1]} of {D})"
            )
        U = qmat.haar_unitary(d, rng)
        used += 1
        r0 = Q.shape[1]
        Q = _extend_basis(Q, orbit_vectors(U, seqs), tol)
        idle = idle + 1 if Q.shape[1] == r0 else 0
    P = qmat.herm(Q @ Q.conj().T)
    return InvariantProjector(q, d, _readonly(P), Q.shape[1], used)


def projector_tildeIq(q, d: int | None = None, seed: int = 0, *, tol=1e-9, patience=3, max_unitaries=200):
    """Projector onto ``span{U^{(x)n}|y^n> : U in U(d), type(y^n) = q}``.

    Results are memoised per ``(q, d, seed)``; the returned matrix is read-only.
    """
    q = tuple(int(c) for c in q)
    d = len(q) if d is None else d
    if len(q) != d:
        raise ValueError(f"type {q} has {len(q)} letters but d = {d}")
    return _tilde(q, d, int(seed), float(tol), int(patience), int(max_unitaries))


@functools.lru_cache(maxsize=None)
def _tau_q(q: tuple, d: int, seed: int) -> np.ndarray:
    ip = projector_tildeIq(q, d, seed)
    return _readonly(ip.proj / ip.rank)


def tau_q(q, d: int | None = None, seed: int = 0) -> np.ndarray:
    """Maximally mixed state on the orbit span of type ``q``."""
    q = tuple(int(c) for c in q)
    d = len(q) if d is None else d
    return _tau_q(q, d, int(seed))


@functools.lru_cache(maxsize=None)
def _tau_n(n: int, d: int, seed: int) -> np.ndarray:
    if n == 0:
        return _readonly(np.ones((1, 1), dtype=complex))
    types = enumerate_types(n, d)
    out = sum(_tau_q(q, d, seed) for q in types) / len(types)
    return _readonly(qmat.herm(out))


def tau_n(n: int, d: int, seed: int = 0) -> np.ndarray:
    """Uniform mixture of ``tau_q`` over all types of ``n`` letters from ``d``."""
    return _tau_n(int(n), int(d), int(seed))


def omega_ordered(counts, d: int, seed: int = 0) -> np.ndarray:
    """``tau_{m_1} (x) ... (x) tau_{m_k}`` over the nonzero letter counts."""
    return qmat.kron(*[tau_n(m, d, seed) for m in counts if m > 0])


def omega(x, d: int, seed: int = 0, k: int | None = None) -> np.ndarray:
    """``U_s omega_{x_o} U_s^dag`` where ``x = s x_o`` and ``x_o`` is sorted."""
    x = np.asarray(x, dtype=int)
    k = int(x.max()) + 1 if k is None else k
    xo, s = ordered_rep(x)
    counts = np.bincount(xo, minlength=k)
    return qmat.permute_operator(omega_ordered(counts, d, seed), s, d)


def typical_projector(sigma, n: int, delta: float, *, return_eigvals=False):
    """Delta-typical projector of ``sigma^{(x)n}``.

    Built in the eigenbasis of ``sigma``: the sum of ``|e_{y^n}><e_{y^n}|`` over
    sequences whose letter type ``q`` obeys ``|q_i/n - lambda_i| <= lambda_i delta``.
    """
    if delta <= 0:
        raise ValueError("delta must be positive")
    w, V = qmat.eigh(sigma)
    w = np.clip(w, 0, None)
    lam = w / w.sum()
    d = len(lam)
    diag = np.zeros(d**n)
    for q in enumerate_types(n, d):
        if is_typical_type(q, lam, delta):
            diag[_basis_index(_sequences(q), d)] = 1.0
    Vn = qmat.kron_power(V, n)
    P = qmat.herm((Vn * diag) @ Vn.conj().T)
    if return_eigvals:
        return P, lam
    return P


def typical_constant(sigma) -> float:
    """Typicality constant ``c = S(sigma)`` used with a state's typical projector."""
    return vn_entropy(sigma)


def tau_dominance_gap(sigma, n: int, seed: int = 0) -> float:
    """Smallest eigenvalue of ``(n+1)^{d^2+d} tau_n - sigma^{(x)n}``."""
    d = np.asarray(sigma).shape[0]
    return qmat.min_eig((n + 1) ** (d * d + d) * tau_n(n, d, seed) - qmat.kron_power(sigma, n))


def sigma_type_decomposition(lam, n: int):
    """Per-type coefficients ``2^{-n[D(q||lam)+H(q)]}`` of ``sigma^{(x)n}`` in its eigenbasis."""
    d = len(lam)
    out = {}
    for q in enumerate_types(n, d):
        qq = np.asarray(q) / n
        out[q] = 2.0 ** (-n * (kl(qq, lam) + shannon(qq)))
    return out

