"""Universal covering: obfuscation error of random typical sets and its smoothing analysis.

A covering set is drawn from the typical-set law alone; channel knowledge is
needed only to *evaluate* it (the obfuscation error) or to build the operators
of the smoothing chain

    W(x^n) -> sigma (conditional typical) -> phi (average typical)
           -> theta (Chernoff window) -> psi (rescaled theta)

used by the operator Chernoff argument.

Naming: ``k_alpha`` is the alphabet size, ``K_C = 1/(2 ln^2 2)`` the Chernoff
constant, ``t_thresh`` the lower spectral bound in the Chernoff lemma.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from . import qmat, symm
from .entropy import holevo, vn_entropy
from .packing import CqChannel, channel_output
from .seqtypes import TypicalSampler, ct_constant, ordered_rep, typical_set
from .trials import binomial_stderr, mean_stderr, run_trials

K_C = 1 / (2 * math.log(2) ** 2)


def obfus_threshold(k_alpha: int, eps: float) -> float:
    """``eps + 4 sqrt(k eps) + 8 sqrt(3 eps + 2 sqrt(k eps))``."""
    ke = math.sqrt(k_alpha * eps)
    return eps + 4 * ke + 8 * math.sqrt(3 * eps + 2 * ke)


def covering_size(chi1: float, n: int, c: float, delta: float) -> int:
    """``L_n = 2^{n[chi_1 + 2 c delta]}``, rounded and floored at one."""
    return max(1, int(round(2.0 ** (n * (chi1 + 2 * c * delta)))))


def eps_prime_n(n: int, eps: float, chi1: float, chi: float, S_avg: float, c: float, delta: float) -> float:
    """``2 * 2^{-K_C eps^3 2^{n[chi_1 - chi]} + n[S(W_avg) + c delta]}``.

    Decays in ``n`` only when ``chi_1 > chi``; equality gets a warning.
    """
    if chi1 <= chi:
        warnings.warn("chi_1 does not exceed chi(p, W^E); the covering bound does not decay", stacklevel=2)
    return 2.0 * 2.0 ** (-K_C * eps**3 * 2.0 ** (n * (chi1 - chi)) + n * (S_avg + c * delta))


def cover_bound(L_n: int, n: int, eps: float, chi: float, c: float, delta: float, rank_avg: float) -> float:
    """Chernoff bound ``2 Tr(Pi_avg) 2^{-L_n K_C eps^3 2^{-n[chi + 2 c delta]}}``."""
    return 2.0 * rank_avg * 2.0 ** (-L_n * K_C * eps**3 * 2.0 ** (-n * (chi + 2 * c * delta)))


# --- typical projectors ----------------------------------------------------------------


def cond_typical_projector(W_E: CqChannel, x, delta: float) -> np.ndarray:
    """``U_s (Pi^{m_1}_{W(1)} (x) ... (x) Pi^{m_k}_{W(k)}) U_s^dag`` for ``x = s x_o``."""
    x = np.asarray(x, dtype=int)
    xo, s = ordered_rep(x)
    counts = np.bincount(xo, minlength=W_E.k)
    blocks = [symm.typical_projector(W_E.outputs[a], int(m), delta) for a, m in enumerate(counts) if m > 0]
    return qmat.permute_operator(qmat.kron(*blocks), s, W_E.d)


def letter_deficiencies(W_E: CqChannel, x, delta: float) -> np.ndarray:
    """``1 - Tr Pi^{m_a} W(a)^{(x)m_a}`` for each letter ``a`` present in ``x``."""
    counts = np.bincount(np.asarray(x, dtype=int), minlength=W_E.k)
    out = []
    for a, m in enumerate(counts):
        if m > 0:
            P = symm.typical_projector(W_E.outputs[a], int(m), delta)
            out.append(1.0 - np.trace(P @ qmat.kron_power(W_E.outputs[a], int(m))).real)
    return np.array(out)


@dataclass
class SmoothingContext:
    """Per-(channel, p, n, delta, eps) operators shared by every sequence.

    ``Pi_avg`` is the typical projector of ``W_avg^{(x)n}``, ``phi_bar`` the exact
    typical-set average of ``phi``, ``Pi_hat`` the Chernoff window projector
    ``{phi_bar >= eps 2^{-n[S(W_avg) + c_avg delta]} Pi_avg}`` and
    ``phi_bar_p = Pi_hat phi_bar Pi_hat``.
    """

    W_E: CqChannel
    p: np.ndarray
    n: int
    delta: float
    eps: float
    c: float
    c_avg: float
    W_avg: np.ndarray
    Pi_avg: np.ndarray
    phi_bar: np.ndarray
    Pi_hat: np.ndarray
    phi_bar_p: np.ndarray
    floor: float
    typical_Q: float
    _cond: dict = field(default_factory=dict, repr=False)

    @property
    def psi_scale(self) -> float:
        """``2^{n[sum_i p_i S(W(i)) - c delta]}``."""
        cond_ent = sum(pi * vn_entropy(W) for pi, W in zip(self.p, self.W_E.outputs))
        return 2.0 ** (self.n * (cond_ent - self.c * self.delta))

    def cond_projector(self, x) -> np.ndarray:
        key = tuple(int(a) for a in x)
        if key not in self._cond:
            self._cond[key] = cond_typical_projector(self.W_E, x, self.delta)
        return self._cond[key]

    def phi(self, x) -> np.ndarray:
        P = self.cond_projector(x)
        sigma = P @ channel_output(self.W_E, x) @ P
        return self.Pi_avg @ sigma @ self.Pi_avg

    def theta(self, x) -> np.ndarray:
        return self.Pi_hat @ self.phi(x) @ self.Pi_hat


def smoothing_context(W_E: CqChannel, p, n: int, delta: float, eps: float, c: float | None = None,
                      c_avg: float | None = None) -> SmoothingContext:
    """Build the shared operators; ``c`` defaults to ``H(p)`` and ``c_avg`` to ``S(W_avg)``."""
    p = np.asarray(p, dtype=float)
    c = ct_constant(p) if c is None else c
    W_avg = W_E.average(p)
    c_avg = vn_entropy(W_avg) if c_avg is None else c_avg
    Pi_avg = symm.typical_projector(W_avg, n, delta)
    ts = typical_set(p, n, delta)
    ctx = SmoothingContext(W_E, p, n, delta, eps, c, c_avg, W_avg, Pi_avg, None, None, None, 0.0, ts.Q)
    phi_bar = np.zeros_like(Pi_avg, dtype=complex)
    for x, w in zip(ts.sequences, ts.conditional_probs):
        phi_bar += w * ctx.phi(x)
    ctx._cond.clear()
    phi_bar = qmat.herm(phi_bar)
    floor = eps * 2.0 ** (-n * (vn_entropy(W_avg) + c_avg * delta))
    # phi_bar and Pi_avg commute; drop the kernel of Pi_avg, which ties at zero
    Pi_hat = qmat.herm(Pi_avg @ qmat.positive_part_projector(phi_bar, floor * Pi_avg) @ Pi_avg)
    ctx.phi_bar = phi_bar
    ctx.Pi_hat = Pi_hat
    ctx.phi_bar_p = qmat.herm(Pi_hat @ phi_bar @ Pi_hat)
    ctx.floor = floor
    return ctx


@dataclass(frozen=True)
class SmoothingChain:
    x: np.ndarray
    W: np.ndarray
    sigma: np.ndarray
    phi: np.ndarray
    theta: np.ndarray
    psi: np.ndarray
    letter_deficiency: float
    avg_deficiency: float


def smoothing_chain(W_E: CqChannel, x, delta: float, eps: float, p=None, ctx: SmoothingContext | None = None):
    """The four smoothed operators for one sequence.

    Reuse ``ctx`` across sequences; otherwise it is built from ``p`` (which
    is then required).
    """
    x = np.asarray(x, dtype=int)
    if ctx is None:
        if p is None:
            raise ValueError("need p (or a prebuilt context) for the average-state projectors")
        ctx = smoothing_context(W_E, p, len(x), delta, eps)
    W = channel_output(W_E, x)
    P = ctx.cond_projector(x)
    sigma = P @ W @ P
    phi = ctx.Pi_avg @ sigma @ ctx.Pi_avg
    theta = ctx.Pi_hat @ phi @ ctx.Pi_hat
    defs = letter_deficiencies(W_E, x, delta)
    avg_def = 1.0 - np.trace(ctx.Pi_avg @ W).real
    return SmoothingChain(x, W, sigma, phi, theta, ctx.psi_scale * theta, float(defs.max(initial=0.0)), float(avg_def))


def chain_bounds(chain: SmoothingChain, k_alpha: int, eps: float) -> dict:
    """Measured quantities next to their bounds, keyed by step.

    Each value is ``(measured, bound)``; for trace lower bounds ``measured``
    must be at least ``bound``, for distances at most.
    """
    ke = math.sqrt(k_alpha * eps)
    return {
        "trace_sigma": (np.trace(chain.sigma).real, 1 - k_alpha * eps),
        "sigma_vs_W": (qmat.trace_norm(chain.sigma - chain.W), 2 * ke),
        "trace_phi": (np.trace(chain.phi).real, 1 - eps - 2 * ke),
        "phi_vs_sigma": (qmat.trace_norm(chain.phi - chain.sigma), 2 * math.sqrt(eps + 2 * ke)),
        "phi_vs_W": (qmat.trace_norm(chain.phi - chain.W), 2 * ke + 2 * math.sqrt(eps + 2 * ke)),
    }


def context_bounds(ctx: SmoothingContext, eps: float | None = None) -> dict:
    """Checks on the shared operators, in the same ``(measured, bound)`` layout.

    ``window_floor`` is the smallest eigenvalue of ``phi_bar' - floor * Pi_avg``
    (should be at least 0); ``commutator`` is ``max |[phi_bar, Pi_avg]|``
    (should be at most 1e-9).
    """
    eps = ctx.eps if eps is None else eps
    ke = math.sqrt(ctx.W_E.k * eps)
    return {
        "trace_phi_bar": (np.trace(ctx.phi_bar).real, 1 - eps - 2 * ke),
        "trace_phi_bar_p": (np.trace(ctx.phi_bar_p).real, 1 - 2 * eps - 2 * ke),
        "window_floor": (qmat.min_eig(ctx.phi_bar_p - ctx.floor * ctx.Pi_avg), 0.0),
        "commutator": (qmat.max_abs(qmat.commutator(ctx.phi_bar, ctx.Pi_avg)), 1e-9),
    }


def chain_eps(ctx: SmoothingContext) -> float:
    """Smallest ``eps`` for which every chain hypothesis holds on the typical set.

    Covers the per-letter conditional projectors, the average-state projector
    on ``W_avg^{(x)n}`` and on every typical ``W(x^n)``.
    """
    W_E, n, delta = ctx.W_E, ctx.n, ctx.delta
    worst = 1.0 - np.trace(ctx.Pi_avg @ qmat.kron_power(ctx.W_avg, n)).real
    for a, W in enumerate(W_E.outputs):
        for m in range(1, n + 1):
            P = symm.typical_projector(W, m, delta)
            worst = max(worst, 1.0 - np.trace(P @ qmat.kron_power(W, m)).real)
    for x in typical_set(ctx.p, n, delta).sequences:
        worst = max(worst, 1.0 - np.trace(ctx.Pi_avg @ channel_output(W_E, x)).real)
    return float(max(worst, 0.0))


# --- obfuscation ---------------------------------------------------------------------


def set_average(W_E: CqChannel, S) -> np.ndarray:
    S = np.atleast_2d(np.asarray(S, dtype=int))
    return sum(channel_output(W_E, x) for x in S) / len(S)


def obfuscation_error(W_E: CqChannel, S, p) -> float:
    """``|| (1/|S|) sum_{x in S} W(x) - W_avg^{(x)n} ||_1``."""
    S = np.atleast_2d(np.asarray(S, dtype=int))
    if S.size == 0:
        raise ValueError("covering set must be nonempty")
    target = qmat.kron_power(W_E.average(p), S.shape[1])
    return qmat.trace_norm(set_average(W_E, S) - target)


def in_operator_interval(A, Omega, eps: float, tol: float = 1e-10) -> bool:
    """``(1-eps) Omega <= A <= (1+eps) Omega`` in operator order."""
    return qmat.psd_leq((1 - eps) * Omega, A, tol) and qmat.psd_leq(A, (1 + eps) * Omega, tol)


@dataclass(frozen=True)
class CoveringStats:
    n: int
    L_n: int
    delta: float
    eps: float
    deltas: np.ndarray
    Delta_mean: float
    Delta_stderr: float
    threshold_obfus: float
    freq_above_threshold: float
    eps_prime_n: float
    chernoff_freq: float
    chernoff_bound: float
    seed: int


def covering_experiment(W_E: CqChannel, p, n: int, delta: float, eps: float, L_n: int, trials: int, seed: int,
                        chi1: float | None = None, c: float | None = None, workers: int = 1) -> CoveringStats:
    """Draw ``trials`` random covering sets of size ``L_n`` and record their obfuscation.

    ``chi1`` (default: the true Holevo quantity) enters only the analytic
    ``eps'_n``.  The Chernoff columns compare the empirical frequency of
    ``mean theta not in [1 +- eps] phi_bar'`` with its analytic bound.
    """
    p = np.asarray(p, dtype=float)
    c = ct_constant(p) if c is None else c
    sampler = TypicalSampler(p, n, delta)
    ctx = smoothing_context(W_E, p, n, delta, eps, c=c)
    target = qmat.kron_power(ctx.W_avg, n)
    theta_cache = {}

    def theta(x):
        key = tuple(x)
        if key not in theta_cache:
            theta_cache[key] = ctx.theta(x)
        return theta_cache[key]

    def one(rng):
        S = sampler.draw(rng, L_n)
        D = qmat.trace_norm(set_average(W_E, S) - target)
        avg_theta = sum(theta(x) for x in S) / L_n
        return D, not in_operator_interval(avg_theta, ctx.phi_bar_p, eps)

    results = run_trials(one, trials, seed, workers)
    deltas = np.array([r[0] for r in results])
    fails = np.array([r[1] for r in results], dtype=float)
    chi = holevo(p, W_E.outputs)
    chi1 = chi if chi1 is None else chi1
    S_avg = vn_entropy(ctx.W_avg)
    thr = obfus_threshold(W_E.k, eps)
    mean, se = mean_stderr(deltas)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        epn = eps_prime_n(n, eps, chi1, chi, S_avg, c, delta)
    bound = cover_bound(L_n, n, eps, chi, c, delta, np.trace(ctx.Pi_avg).real)
    return CoveringStats(n, L_n, delta, eps, deltas, mean, se, thr, float(np.mean(deltas >= thr)), epn,
                         float(fails.mean()), bound, seed)


# --- operator Chernoff bound -----------------------------------------------------------


def chernoff_check(ops, probs, N: int, eps: float, trials: int, seed: int, tol: float = 1e-10):
    """Empirical ``Pr{mean of N samples not in [1 +- eps] Omega}`` and its bound.

    ``ops`` take values between 0 and I; the bound is
    ``2 dim 2^{-N K_C eps^2 t_thresh}`` with ``t_thresh`` the smallest eigenvalue of
    ``Omega = E[op]``.  Returns ``(empirical, bound, stderr)``.
    """
    if not 0 < eps < 0.5:
        raise ValueError("eps must lie in (0, 1/2)")
    ops = np.asarray(ops)
    probs = np.asarray(probs, dtype=float)
    for i, A in enumerate(ops):
        if qmat.min_eig(A) < -tol or qmat.min_eig(np.eye(A.shape[0]) - A) < -tol:
            raise ValueError(f"operator {i} is not between 0 and I")
    Omega = np.tensordot(probs, ops, axes=1)
    t_thresh = qmat.min_eig(Omega)
    if not 0 < t_thresh < 1:
        raise ValueError(f"need Omega >= t I with 0 < t < 1; smallest eigenvalue is {t_thresh:.3g}")
    dim = Omega.shape[0]
    bound = 2 * dim * 2.0 ** (-N * K_C * eps**2 * t_thresh)

    def one(rng):
        picks = rng.choice(len(ops), size=N, p=probs)
        counts = np.bincount(picks, minlength=len(ops))
        mean = np.tensordot(counts / N, ops, axes=1)
        return not in_operator_interval(mean, Omega, eps, tol)

    fails = run_trials(one, trials, seed)
    freq = float(np.mean(fails))
    return freq, bound, binomial_stderr(freq, trials)
