"""Universal private codes: a packing code whose codebook is split into covering sets.

Message ``j`` is sent as a uniformly random member of the covering set
``S_j = {x_{j,1}, ..., x_{j,L}}``.  Bob decodes the pair ``(j, l)`` with the
universal square-root POVM; Eve's view of message ``j`` is the uniform mixture
over ``S_j``, so privacy is the obfuscation error of ``S_j``.

The constructor sees only ``(p, chi_0, chi_1, n, delta, eps, t, seed)`` and the
output dimension ``d_B`` the decoder lives on.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from . import qmat
from .covering import eps_prime_n, obfus_threshold, obfuscation_error
from .entropy import alpha_chi, holevo, vn_entropy
from .packing import CqChannel, CqCode, avg_error_prob, build_sqrt_povm, channel_output, error_bound, rate_params
from .seqtypes import TypicalSampler, ct_constant, typical_set
from .trials import binomial_stderr, run_trials


@dataclass(frozen=True)
class BipartiteCqChannel:
    """Letter ``x`` goes to a density operator on ``H_B (x) H_E`` (B first)."""

    outputs: tuple
    d_B: int
    d_E: int

    def __post_init__(self):
        D = self.d_B * self.d_E
        outs = []
        for x, W in enumerate(self.outputs):
            W = qmat.check_density(W, 1e-8, name=f"letter {x}")
            if W.shape != (D, D):
                raise ValueError(f"letter {x}: output is {W.shape[0]}-dimensional, expected d_B*d_E = {D}")
            outs.append(W)
        if not outs:
            raise ValueError("channel needs at least one letter")
        object.__setattr__(self, "outputs", tuple(outs))

    @property
    def k(self) -> int:
        return len(self.outputs)


def marginals(W: BipartiteCqChannel) -> tuple[CqChannel, CqChannel]:
    """``(W^B, W^E)`` by partial trace of every output."""
    dims = (W.d_B, W.d_E)
    WB = tuple(qmat.partial_trace(O, dims, keep=[0]) for O in W.outputs)
    WE = tuple(qmat.partial_trace(O, dims, keep=[1]) for O in W.outputs)
    return CqChannel(WB), CqChannel(WE)


def private_rate(p, W: BipartiteCqChannel) -> float:
    """``chi(p, W^B) - chi(p, W^E)``; negative values are returned as is."""
    WB, WE = marginals(W)
    return holevo(p, WB.outputs) - holevo(p, WE.outputs)


@dataclass(frozen=True)
class PrivateSizing:
    M_n: int
    L_n: int
    J_n: int
    M_n_exact: float
    gamma_n: float
    c: float


def private_sizing(chi0: float, chi1: float, n: int, k: int, d_B: int, delta: float, c: float,
                   M_n: int | None = None, L_n: int | None = None) -> PrivateSizing:
    """Code size ``M_n`` at rate ``chi_0``, covering size ``2^{n[chi_1 + 2 c delta]}``, ``J_n = floor(M_n/L_n)``.

    ``M_n`` reuses the packing sizing with ``R = chi_0``; the decoder threshold
    uses ``chi_0`` as its Holevo estimate, so ``r(t) = 0``.  Explicit ``M_n`` or
    ``L_n`` override the formulas.  All three sizes are floored at one.
    """
    if chi0 <= chi1:
        warnings.warn(f"chi_0 = {chi0} does not exceed chi_1 = {chi1}; using a single message", stacklevel=3)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        rp = rate_params(chi0, 0.5, n, k, d_B, chi0)
    M = rp.M_n if M_n is None else int(M_n)
    L = max(1, int(round(2.0 ** (n * (chi1 + 2 * c * delta))))) if L_n is None else int(L_n)
    if M < 1 or L < 1:
        raise ValueError("M_n and L_n must be positive")
    J = 1 if chi0 <= chi1 else max(1, M // L)
    return PrivateSizing(M, L, J, rp.M_n_exact, rp.gamma_n, c)


@dataclass(frozen=True)
class PrivateCode:
    J_n: int
    L_n: int
    codewords: np.ndarray  # (J, L, n)
    code: CqCode  # decoder over the flattened (j, l) messages, row j*L + l
    sizing: PrivateSizing
    collisions: int
    seed: int

    @property
    def n(self) -> int:
        return self.codewords.shape[2]

    def covering_set(self, j: int) -> np.ndarray:
        return self.codewords[j]

    def encode(self, j: int, rng) -> np.ndarray:
        """A uniformly random member of ``S_j``."""
        return self.codewords[j, rng.integers(self.L_n)]


def count_collisions(codewords) -> int:
    """Number of draws whose sequence also occurs in a different covering set."""
    J = codewords.shape[0]
    owners = {}
    for j in range(J):
        for x in codewords[j]:
            owners.setdefault(x.tobytes(), set()).add(j)
    return sum(1 for j in range(J) for x in codewords[j] if len(owners[x.tobytes()]) > 1)


def _colliding_mask(codewords) -> np.ndarray:
    """Draws whose sequence already belongs to an earlier covering set."""
    J, L = codewords.shape[:2]
    first = {}
    mask = np.zeros((J, L), dtype=bool)
    for j in range(J):
        for l in range(L):
            owner = first.setdefault(codewords[j, l].tobytes(), j)
            mask[j, l] = owner != j
    return mask


def build_private_code(p, chi0: float, chi1: float, n: int, delta: float, eps: float, t: float, seed: int,
                       d_B: int, *, M_n: int | None = None, L_n: int | None = None, c: float | None = None,
                       strict_disjoint: bool = False, max_retries: int = 100) -> PrivateCode:
    """Draw ``J_n * L_n`` i.i.d. typical codewords and the universal decoder.

    ``eps`` and ``t`` are accepted for the record; the finite-n sizing uses
    neither.  With ``strict_disjoint`` colliding draws are redrawn until the
    covering sets share no sequence, at most ``max_retries`` rounds.
    """
    if not 0 < t < 1:
        raise ValueError(f"t must lie in (0, 1), got {t}")
    if eps <= 0:
        raise ValueError("eps must be positive")
    sampler = TypicalSampler(p, n, delta)
    c = ct_constant(sampler.p) if c is None else c
    sz = private_sizing(chi0, chi1, n, len(sampler.p), d_B, delta, c, M_n, L_n)
    rng = np.random.default_rng(seed)
    words = sampler.draw(rng, sz.J_n * sz.L_n).reshape(sz.J_n, sz.L_n, n)
    if strict_disjoint and sz.J_n > 1:
        if sz.J_n > len(typical_set(p, n, delta)):
            raise ValueError("more covering sets than typical sequences; disjoint sets are impossible")
        for _ in range(max_retries):
            mask = _colliding_mask(words)
            if not mask.any():
                break
            words[mask] = sampler.draw(rng, int(mask.sum()))
        else:
            if _colliding_mask(words).any():
                raise RuntimeError(f"covering sets still collide after {max_retries} redraws")
    flat = words.reshape(-1, n)
    code = build_sqrt_povm(flat, sz.gamma_n, d_B, k=len(sampler.p))
    return PrivateCode(sz.J_n, sz.L_n, words, code, sz, count_collisions(words), int(seed))


@dataclass(frozen=True)
class PrivateEvaluation:
    p_e: float
    p_e_message: float
    deltas: np.ndarray
    Delta_max: float
    eps_target: float
    delta_target: float
    verdict: bool


def message_error(WB: CqChannel, code: PrivateCode) -> float:
    """Error of the message ``j`` alone, each ``j`` sent as a uniform member of ``S_j``."""
    E = code.code.povm.elements
    J, L = code.J_n, code.L_n
    group = E.reshape(J, L, *E.shape[1:]).sum(axis=1)
    errs = [1.0 - np.trace(channel_output(WB, x) @ group[j]).real for j in range(J) for x in code.codewords[j]]
    return float(min(max(math.fsum(errs) / (J * L), 0.0), 1.0))


def default_eps_target(W: BipartiteCqChannel, p, code: PrivateCode, eps: float, t: float) -> float:
    """``sqrt(eps_n)`` with ``eps_n`` the packing bound at the code's sizing."""
    WB, _ = marginals(W)
    sz = code.sizing
    chi_1mt = alpha_chi(1 - t, p, WB.outputs)
    return math.sqrt(error_bound(code.n, WB.k, WB.d, chi_1mt, sz.gamma_n, code.J_n * code.L_n, eps, t))


def evaluate_private_code(W: BipartiteCqChannel, code: PrivateCode, eps_target: float, delta_target: float,
                          p=None) -> PrivateEvaluation:
    """Bob's flattened ``(j, l)`` error, Eve's ``Delta(S_j)`` per ``j`` and the verdict.

    Eve's average state uses ``p`` (defaults to uniform over the alphabet).
    """
    WB, WE = marginals(W)
    p = np.full(W.k, 1 / W.k) if p is None else np.asarray(p, dtype=float)
    p_e = avg_error_prob(WB, code.code)
    deltas = np.array([obfuscation_error(WE, code.covering_set(j), p) for j in range(code.J_n)])
    dmax = float(deltas.max())
    return PrivateEvaluation(p_e, message_error(WB, code), deltas, dmax, eps_target, delta_target,
                             bool(p_e <= eps_target and dmax <= delta_target))


@dataclass(frozen=True)
class EventAnalysis:
    trials: int
    J_n: int
    L_n: int
    freq_pe_fail: float
    freq_cover_fail: np.ndarray  # per j
    freq_any_fail: float
    stderr_any: float
    eps_n: float
    eps_prime_n: float
    union_bound: float
    consistent: bool  # empirical within 3 stderr of the bound, or the bound exceeds one


def event_analysis(W: BipartiteCqChannel, p, chi0: float, chi1: float, n: int, delta: float, eps: float, t: float,
                   trials: int, seed: int, *, M_n=None, L_n=None, workers: int = 1) -> EventAnalysis:
    """Frequencies of ``p_e > sqrt(eps_n)`` and ``Delta(S_j) >= threshold`` over random codes."""
    p = np.asarray(p, dtype=float)
    WB, WE = marginals(W)
    c = ct_constant(p)
    sz = private_sizing(chi0, chi1, n, W.k, W.d_B, delta, c, M_n, L_n)
    chi_1mt = alpha_chi(1 - t, p, WB.outputs)
    eps_n = error_bound(n, W.k, W.d_B, chi_1mt, sz.gamma_n, sz.J_n * sz.L_n, eps, t)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        epn = eps_prime_n(n, eps, chi1, holevo(p, WE.outputs), vn_entropy(WE.average(p)), c, delta)
    thr = obfus_threshold(W.k, eps)
    root = math.sqrt(eps_n)

    def one(rng):
        code = build_private_code(p, chi0, chi1, n, delta, eps, t, int(rng.integers(2**63)), W.d_B,
                                  M_n=M_n, L_n=L_n, c=c)
        pe = avg_error_prob(WB, code.code)
        cover = [obfuscation_error(WE, code.covering_set(j), p) >= thr for j in range(code.J_n)]
        return pe > root, cover

    res = run_trials(one, trials, seed, workers)
    pe_fail = np.array([r[0] for r in res])
    cover_fail = np.array([r[1] for r in res])
    any_fail = pe_fail | cover_fail.any(axis=1)
    freq = float(any_fail.mean())
    se = binomial_stderr(freq, trials)
    bound = sz.J_n * epn + root
    return EventAnalysis(trials, sz.J_n, sz.L_n, float(pe_fail.mean()), cover_fail.mean(axis=0), freq, se,
                         eps_n, epn, bound, bool(bound > 1 or freq <= bound + 3 * se))
