"""Universal classical-quantum code: random typical codebooks and the square-root decoder.

The decoder for codeword ``x^n`` starts from the projector

    Lambda_{x^n} = { omega_{x^n} - 2^{n gamma_n} tau_n >= 0 }

which depends only on ``(x^n, gamma_n, d_B)``.  Nothing in this construction
takes a channel argument; channels enter only when a code is evaluated.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from . import qmat, symm
from .entropy import alpha_chi
from .seqtypes import TypicalSampler, ordered_rep, typical_set, zeta
from .trials import mean_stderr, run_trials


@dataclass(frozen=True)
class CqChannel:
    """Letter ``x`` (0-based) goes to the density operator ``outputs[x]``."""

    outputs: tuple

    def __post_init__(self):
        outs = tuple(qmat.check_density(W, 1e-8, name=f"letter {x}") for x, W in enumerate(self.outputs))
        if not outs:
            raise ValueError("channel needs at least one letter")
        if len({W.shape for W in outs}) != 1:
            raise ValueError("all channel outputs must have the same dimension")
        object.__setattr__(self, "outputs", outs)

    @property
    def k(self) -> int:
        return len(self.outputs)

    @property
    def d(self) -> int:
        return self.outputs[0].shape[0]

    def average(self, p) -> np.ndarray:
        return sum(pi * W for pi, W in zip(p, self.outputs))

    def rotated(self, V) -> "CqChannel":
        """Channel with every output conjugated by the unitary ``V``."""
        return CqChannel(tuple(V @ W @ V.conj().T for W in self.outputs))


def channel_output(W: CqChannel, x) -> np.ndarray:
    """``W(x_1) (x) ... (x) W(x_n)``."""
    x = np.asarray(x, dtype=int)
    if x.size and (x.min() < 0 or x.max() >= W.k):
        raise ValueError(f"sequence {x.tolist()} uses letters outside 0..{W.k - 1}")
    return qmat.kron(*[W.outputs[i] for i in x])


@dataclass(frozen=True)
class PovmSet:
    """POVM elements ``elements[i]``; the remainder ``I - sum`` is the failure outcome."""

    elements: np.ndarray  # (M, D, D)

    @property
    def dim(self) -> int:
        return self.elements.shape[1]

    def __len__(self):
        return len(self.elements)

    @property
    def remainder(self) -> np.ndarray:
        return np.eye(self.dim) - self.elements.sum(axis=0)


@dataclass(frozen=True)
class CqCode:
    codewords: np.ndarray  # (M, n) int
    povm: PovmSet
    gamma_n: float
    lambdas: np.ndarray = field(repr=False)  # (M, D, D)

    @property
    def M(self) -> int:
        return len(self.codewords)

    @property
    def n(self) -> int:
        return self.codewords.shape[1]


def _lambda_ordered(counts: tuple, gamma_n: float, n: int, d_B: int, seed: int) -> np.ndarray:
    om = symm.omega_ordered(counts, d_B, seed)
    return qmat.positive_part_projector(om, 2.0 ** (n * gamma_n) * symm.tau_n(n, d_B, seed))


def lambda_projector(x, gamma_n: float, d_B: int, seed: int = 0, k: int | None = None) -> np.ndarray:
    """``{omega_{x^n} >= 2^{n gamma_n} tau_n}`` for the codeword ``x``.

    ``tau_n`` is permutation invariant, so the projector is computed for the
    sorted sequence and carried over by the sorting permutation.
    """
    x = np.asarray(x, dtype=int)
    n = len(x)
    k = int(x.max()) + 1 if k is None else k
    xo, s = ordered_rep(x)
    counts = tuple(int(c) for c in np.bincount(xo, minlength=k))
    return qmat.permute_operator(_lambda_ordered(counts, float(gamma_n), n, d_B, seed), s, d_B)


def sqrt_measurement(lambdas) -> PovmSet:
    """``S^{-1/2} Lambda_i S^{-1/2}`` with ``S = sum_j Lambda_j`` (inverse on the support)."""
    lambdas = np.asarray(lambdas)
    R = qmat.pinv_sqrt(lambdas.sum(axis=0))
    return PovmSet(np.array([qmat.herm(R @ L @ R) for L in lambdas]))


def build_sqrt_povm(codewords, gamma_n: float, d_B: int, seed: int = 0, k: int | None = None) -> CqCode:
    """Universal code for ``codewords``: Lambda projectors plus square-root POVM."""
    codewords = np.atleast_2d(np.asarray(codewords, dtype=int))
    if codewords.size == 0:
        raise ValueError("need at least one codeword")
    k = int(codewords.max()) + 1 if k is None else k
    cache = {}
    lambdas = []
    for x in codewords:
        key = tuple(x)
        if key not in cache:
            cache[key] = lambda_projector(x, gamma_n, d_B, seed, k)
        lambdas.append(cache[key])
    lambdas = np.array(lambdas)
    return CqCode(codewords, sqrt_measurement(lambdas), float(gamma_n), lambdas)


def message_errors(W: CqChannel, code: CqCode) -> np.ndarray:
    """Per-message ``Tr W(phi(i)) (I - Upsilon_i)``."""
    out = np.empty(code.M)
    for i, x in enumerate(code.codewords):
        rho = channel_output(W, x)
        out[i] = 1.0 - np.trace(rho @ code.povm.elements[i]).real
    return out


def avg_error_prob(W: CqChannel, code: CqCode) -> float:
    """Average error probability; weight on the failure outcome always counts as an error."""
    return float(min(max(message_errors(W, code).mean(), 0.0), 1.0))


def hayashi_nagaoka_check(W: CqChannel, code: CqCode) -> tuple[float, float]:
    """``(p_e, 2/M sum Tr(I-Lambda_i)W(x_i) + 4/M sum_{i!=j} Tr Lambda_j W(x_i))``."""
    M = code.M
    lhs = avg_error_prob(W, code)
    first = second = 0.0
    for i, x in enumerate(code.codewords):
        rho = channel_output(W, x)
        tr_lam = np.array([np.trace(L @ rho).real for L in code.lambdas])
        first += 1.0 - tr_lam[i]
        second += tr_lam.sum() - tr_lam[i]
    return lhs, (2 * first + 4 * second) / M


# --- sizing and the analytic bound -----------------------------------------------------


@dataclass(frozen=True)
class RateParams:
    R: float
    t: float
    n: int
    k: int
    d_B: int
    chi_ref: float
    M_n: int
    M_n_exact: float
    gamma_n: float
    r_t: float

    @property
    def R_effective(self) -> float:
        return math.log2(self.M_n) / self.n


def code_size(R: float, n: int, k: int, d_B: int) -> float:
    """Unrounded ``2^{n[R - zeta_n((k+1)(d_B^2+d_B))]}``."""
    return 2.0 ** (n * (R - zeta(n, (k + 1) * (d_B**2 + d_B))))


def rate_params(R: float, t: float, n: int, k: int, d_B: int, chi_ref: float) -> RateParams:
    """Code size, threshold ``gamma_n`` and exponent ``r(t)`` from a Holevo estimate.

    ``r(t) = t/(t+1) (chi_ref - R)`` and ``gamma_n = R + r(t) - zeta_n(k(d_B^2+d_B))``.
    The size is rounded and floored at one codeword.
    """
    if not 0 < t < 1:
        raise ValueError(f"t must lie in (0, 1), got {t}")
    if R >= chi_ref:
        warnings.warn(f"rate {R} is not below chi_ref {chi_ref}; r(t) <= 0 and the bound is vacuous", stacklevel=2)
    r_t = t / (t + 1) * (chi_ref - R)
    gamma_n = R + r_t - zeta(n, k * (d_B**2 + d_B))
    M_exact = code_size(R, n, k, d_B)
    M_n = max(1, int(round(M_exact)))
    return RateParams(R, t, n, k, d_B, chi_ref, M_n, M_exact, gamma_n, r_t)


def error_bound(n: int, k: int, d_B: int, chi_1mt: float, gamma_n: float, M_n: float, eps: float, t: float) -> float:
    """Upper bound on the expected error of the random universal code.

    ``2^{-nt[chi_{1-t} - gamma_n - zeta_n(k(d^2+d))]}
    + 4 (1-eps)^{-1} M_n 2^{-n(gamma_n - zeta_n(d^2+d))} + 2 eps``
    """
    D = d_B**2 + d_B
    first = 2.0 ** (-n * t * (chi_1mt - gamma_n - zeta(n, k * D)))
    second = 4.0 / (1 - eps) * M_n * 2.0 ** (-n * (gamma_n - zeta(n, D)))
    return first + second + 2 * eps


def error_bound_for_channel(W: CqChannel, p, params: RateParams, eps: float) -> float:
    """The bound at ``params`` using the true ``chi_{1-t}`` of ``(p, W)``."""
    chi_1mt = alpha_chi(1 - params.t, p, W.outputs)
    return error_bound(params.n, W.k, W.d, chi_1mt, params.gamma_n, params.M_n_exact, eps, params.t)


# --- random codes ----------------------------------------------------------------------


def random_code(sampler: TypicalSampler, M_n: int, gamma_n: float, d_B: int, rng, seed: int = 0) -> CqCode:
    """``M_n`` i.i.d. typical codewords (repeats allowed) and their decoder."""
    words = sampler.draw(rng, M_n)
    return build_sqrt_povm(words, gamma_n, d_B, seed, k=len(sampler.p))


def expected_error_mc(
    W: CqChannel, p, n: int, delta: float, M_n: int, gamma_n: float, trials: int, seed: int, workers: int = 1
) -> tuple[float, float]:
    """Mean and standard error of ``p_e`` over random typical codebooks."""
    sampler = TypicalSampler(p, n, delta)

    def one(rng):
        return avg_error_prob(W, random_code(sampler, M_n, gamma_n, W.d, rng))

    return mean_stderr(run_trials(one, trials, seed, workers))


def expected_single_codeword_error(W: CqChannel, p, n: int, delta: float, gamma_n: float) -> float:
    """Exact ``E[p_e]`` for ``M_n = 1`` by enumerating the typical set."""
    ts = typical_set(p, n, delta)
    errs = []
    for x in ts.sequences:
        L = lambda_projector(x, gamma_n, W.d, k=W.k)
        Pi = qmat.support_projector(L)
        errs.append(1.0 - np.trace(channel_output(W, x) @ Pi).real)
    return float(np.dot(ts.conditional_probs, errs))
