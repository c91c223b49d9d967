"""Dense Hermitian linear algebra on small tensor-product spaces.

Operators are plain ``numpy`` arrays of shape ``(D, D)``.  Nothing here is
sparse; at desk scale ``D`` stays below a few thousand.
"""

from __future__ import annotations

import numpy as np
import scipy.stats

TOL_HERM = 1e-12
TOL_EIG = 1e-10
TOL_SUPPORT = 1e-10


def herm(A: np.ndarray) -> np.ndarray:
    """Hermitian part ``(A + A^dag) / 2``."""
    A = np.asarray(A)
    return (A + A.conj().T) / 2


def is_hermitian(A, tol=TOL_HERM) -> bool:
    A = np.asarray(A)
    return A.ndim == 2 and A.shape[0] == A.shape[1] and np.abs(A - A.conj().T).max() <= tol


def check_density(rho, tol=1e-10, name="state") -> np.ndarray:
    """Validate a density operator and return it as a complex array.

    Raises ValueError naming ``name`` when the matrix is not square, not
    Hermitian, has an eigenvalue below ``-tol`` or trace off by more than ``tol``.
    """
    rho = np.asarray(rho, dtype=complex)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise ValueError(f"{name}: expected a square matrix, got shape {rho.shape}")
    if np.abs(rho - rho.conj().T).max() > max(tol, TOL_HERM):
        raise ValueError(f"{name}: matrix is not Hermitian")
    w = np.linalg.eigvalsh(herm(rho))
    if w.min() < -tol:
        raise ValueError(f"{name}: matrix is not positive semidefinite (min eigenvalue {w.min():.3g})")
    if abs(np.trace(rho).real - 1) > tol:
        raise ValueError(f"{name}: trace {np.trace(rho).real:.12g} != 1")
    return rho


def is_projector(P, tol=1e-9) -> bool:
    P = np.asarray(P)
    if not is_hermitian(P, tol):
        return False
    return np.abs(P @ P - P).max() <= tol


def kron(*ops) -> np.ndarray:
    """Kronecker product of any number of operators (or vectors)."""
    if not ops:
        return np.ones((1, 1))
    out = np.asarray(ops[0])
    for op in ops[1:]:
        out = np.kron(out, op)
    return out


def kron_power(A, n: int) -> np.ndarray:
    A = np.asarray(A)
    if n == 0:
        return np.ones((1, 1), dtype=A.dtype)
    return kron(*([A] * n))


def eigh(A):
    """Eigendecomposition of the Hermitian part of ``A``."""
    return np.linalg.eigh(herm(A))


def from_eig(w, V) -> np.ndarray:
    return (V * w) @ V.conj().T


def support_mask(w, rel_tol=TOL_SUPPORT):
    """Eigenvalues treated as nonzero: above ``rel_tol`` times the largest |eigenvalue|."""
    w = np.asarray(w)
    scale = np.abs(w).max() if w.size else 0.0
    if scale == 0:
        return np.zeros(w.shape, dtype=bool)
    return w > rel_tol * scale


def positive_part_projector(A, B=None, tol=TOL_EIG) -> np.ndarray:
    """Projector ``{A >= B}`` onto the nonnegative eigenspace of ``A - B``.

    Eigenvalues in ``[-tol, 0)`` count as nonnegative.
    """
    C = np.asarray(A) if B is None else np.asarray(A) - np.asarray(B)
    w, V = eigh(C)
    keep = w >= -tol
    Vk = V[:, keep]
    return Vk @ Vk.conj().T


def trace_norm(A) -> float:
    """Sum of absolute eigenvalues of a Hermitian operator."""
    return float(np.abs(np.linalg.eigvalsh(herm(A))).sum())


def min_eig(A) -> float:
    return float(np.linalg.eigvalsh(herm(A))[0])


def psd_leq(A, B, tol=1e-10) -> bool:
    """Operator order ``A <= B``: the smallest eigenvalue of ``B - A`` is at least ``-tol``."""
    return min_eig(np.asarray(B) - np.asarray(A)) >= -tol


def partial_trace(M, dims, keep) -> np.ndarray:
    """Trace out every tensor factor of ``M`` not listed in ``keep``.

    ``dims`` lists the factor dimensions, ``keep`` holds 0-based factor indices.
    Kept factors stay in their original order.
    """
    M = np.asarray(M)
    dims = [int(d) for d in dims]
    D = int(np.prod(dims)) if dims else 1
    if M.shape != (D, D):
        raise ValueError(f"factor dimensions {dims} do not match operator shape {M.shape}")
    keep = sorted(set(int(i) for i in keep))
    if any(i < 0 or i >= len(dims) for i in keep):
        raise ValueError(f"keep indices {keep} out of range for {len(dims)} factors")
    n = len(dims)
    T = M.reshape(dims + dims)
    # trace out from the highest axis down so remaining axis numbers stay valid
    for i in reversed(range(n)):
        if i in keep:
            continue
        m = T.ndim // 2
        T = np.trace(T, axis1=i, axis2=i + m)
    dk = int(np.prod([dims[i] for i in keep])) if keep else 1
    return T.reshape(dk, dk)


def frac_power(H, t: float, rel_tol=TOL_SUPPORT) -> np.ndarray:
    """``H**t`` for PSD ``H``, taken on the support (zero eigenvalues stay zero)."""
    w, V = eigh(H)
    on = support_mask(w, rel_tol)
    wt = np.zeros_like(w)
    wt[on] = w[on] ** t
    return from_eig(wt, V)


def pinv_sqrt(A, rel_tol=TOL_SUPPORT) -> np.ndarray:
    """Inverse square root on the support of a PSD operator."""
    return frac_power(A, -0.5, rel_tol)


def support_projector(A, rel_tol=TOL_SUPPORT) -> np.ndarray:
    w, V = eigh(A)
    Vk = V[:, support_mask(w, rel_tol)]
    return Vk @ Vk.conj().T


def commutator(A, B) -> np.ndarray:
    return A @ B - B @ A


def max_abs(A) -> float:
    return float(np.abs(A).max())


# --- permutations of tensor factors -------------------------------------------------


def _check_perm(s):
    s = np.asarray(s, dtype=int)
    if sorted(s.tolist()) != list(range(len(s))):
        raise ValueError(f"{s.tolist()} is not a permutation of 0..{len(s) - 1}")
    return s


def permutation_unitary(s, d: int) -> np.ndarray:
    """Unitary ``U_s`` moving tensor factor ``i`` to position ``s[i]``.

    On basis states ``U_s |y_0 ... y_{n-1}>`` has ``y_i`` at slot ``s[i]``,
    so ``U_s U_r = U_{s o r}``.
    """
    s = _check_perm(s)
    n = len(s)
    D = d**n
    idx = np.arange(D).reshape((d,) * n)
    # column j of U_s is the basis vector reached from basis vector j
    target = np.transpose(idx, np.argsort(s)).reshape(-1)
    U = np.zeros((D, D))
    U[np.arange(D), target] = 1.0
    return U


def permute_operator(A, s, d: int) -> np.ndarray:
    """``U_s A U_s^dag`` without forming ``U_s``."""
    s = _check_perm(s)
    n = len(s)
    A = np.asarray(A)
    inv = np.argsort(s)
    T = A.reshape((d,) * (2 * n))
    T = np.transpose(T, list(inv) + [n + i for i in inv])
    return T.reshape(d**n, d**n)


def compose(s, r):
    """Permutation ``s o r`` (apply ``r`` first)."""
    s = np.asarray(s)
    return s[np.asarray(r)]


# --- random test objects --------------------------------------------------------------


def haar_unitary(d: int, rng) -> np.ndarray:
    """Haar-distributed unitary (QR of a complex Ginibre matrix with phase fix)."""
    return scipy.stats.unitary_group.rvs(d, random_state=rng)


def random_density(d: int, rng, rank=None) -> np.ndarray:
    """Random density matrix of the given rank (full rank by default)."""
    rank = d if rank is None else rank
    G = rng.normal(size=(d, rank)) + 1j * rng.normal(size=(d, rank))
    rho = G @ G.conj().T
    return herm(rho / np.trace(rho).real)


def random_psd(d: int, rng, scale=1.0) -> np.ndarray:
    G = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    return herm(scale * G @ G.conj().T / d)


def random_hermitian(d: int, rng) -> np.ndarray:
    G = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    return herm(G)


def random_effect(d: int, rng) -> np.ndarray:
    """Random operator ``0 <= L <= I``."""
    V = haar_unitary(d, rng)
    return from_eig(rng.uniform(0, 1, size=d), V)


def ket(i: int, d: int) -> np.ndarray:
    v = np.zeros(d, dtype=complex)
    v[i] = 1
    return v


def proj(v) -> np.ndarray:
    v = np.asarray(v, dtype=complex).reshape(-1)
    return np.outer(v, v.conj())


def sqrtm_psd(A) -> np.ndarray:
    return frac_power(A, 0.5)
