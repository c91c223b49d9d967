"""Finite-n checks of every supporting inequality and invariant.

Each check returns a :class:`CheckResult` whose ``margin`` is the worst slack
found; a check passes when ``margin >= -tol``.  Margins are oriented so that
positive means "inside the bound".  All randomness comes from the seed.
"""

from __future__ import annotations

import inspect
import itertools
import math
from dataclasses import dataclass

import numpy as np

from . import covering, fixtures, qmat, symm
from .entropy import alpha_chi, holevo, holevo_relative, shannon
from .packing import CqChannel, build_sqrt_povm, channel_output, hayashi_nagaoka_check, lambda_projector
from .seqtypes import enumerate_types, multinomial, typical_set
from .trials import trial_rng

TOL = 1e-9


@dataclass(frozen=True)
class CheckResult:
    name: str
    params: str
    margin: float
    passed: bool

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status}  {self.name:<28} margin={self.margin: .6e}  {self.params}"


def _result(name, params, margin, tol=TOL):
    margin = float(margin)
    return CheckResult(name, params, margin, margin >= -tol)


def _qubit_channel(rng, k=2):
    return CqChannel(tuple(qmat.random_density(2, rng) for _ in range(k)))


# --- operator lemmas -------------------------------------------------------------------


def check_tau_dominance(seed=0, states=20, ns=(1, 2, 3, 4)):
    """``(n+1)^{d^2+d} tau_n >= sigma^{(x)n}``."""
    rng = trial_rng(seed, 1)
    worst = min(symm.tau_dominance_gap(qmat.random_density(2, rng), n) for _ in range(states) for n in ns)
    return _result("tau_dominance", f"d=2 n={list(ns)} states={states}", worst)


def check_threshold_trace(seed=0, instances=50, d=4):
    """``Tr[{rho >= 2^{-g} omega} omega] <= 2^g``."""
    rng = trial_rng(seed, 2)
    worst = math.inf
    for _ in range(instances):
        rho, om = qmat.random_density(d, rng), qmat.random_psd(d, rng)
        for g in (-2, 0, 2):
            P = qmat.positive_part_projector(rho, 2.0 ** (-g) * om)
            worst = min(worst, 2.0**g - np.trace(P @ om).real)
    return _result("threshold_trace", f"d={d} gamma=-2,0,2 instances={instances}", worst)


def check_gentle_measurement(seed=0, instances=50, d=4):
    """``||rho - sqrt(L) rho sqrt(L)||_1 <= 2 sqrt(1 - Tr rho L)``."""
    rng = trial_rng(seed, 3)
    worst = math.inf
    for _ in range(instances):
        rho, L = qmat.random_density(d, rng), qmat.random_effect(d, rng)
        gap = max(1 - np.trace(rho @ L).real, 0.0)
        R = qmat.sqrtm_psd(L)
        worst = min(worst, 2 * math.sqrt(gap) - qmat.trace_norm(rho - R @ rho @ R))
    return _result("gentle_measurement", f"d={d} instances={instances}", worst)


def check_hayashi_nagaoka(seed=0, instances=50, d=4):
    """``I - (S+T)^{-1/2} S (S+T)^{-1/2} <= 2(I - S) + 4T``."""
    rng = trial_rng(seed, 4)
    worst = math.inf
    I = np.eye(d)
    for _ in range(instances):
        S, T = qmat.random_effect(d, rng), qmat.random_psd(d, rng)
        R = qmat.pinv_sqrt(S + T)
        worst = min(worst, qmat.min_eig(2 * (I - S) + 4 * T - (I - R @ S @ R)))
    return _result("hayashi_nagaoka", f"d={d} instances={instances}", worst)


def check_hayashi_nagaoka_code(seed=0, instances=20, n=3):
    """Code-level form: ``p_e <= 2/M sum Tr(I-L_i)W_i + 4/M sum_{i!=j} Tr L_j W_i``."""
    rng = trial_rng(seed, 5)
    worst = math.inf
    for _ in range(instances):
        W = _qubit_channel(rng)
        words = rng.integers(0, 2, size=(3, n))
        code = build_sqrt_povm(words, float(rng.uniform(-0.5, 0.5)), 2, k=2)
        lhs, rhs = hayashi_nagaoka_check(W, code)
        worst = min(worst, rhs - lhs)
    return _result("hayashi_nagaoka_code", f"d=2 n={n} M=3 instances={instances}", worst)


def check_power_trace_max(seed=0, instances=50, d=3):
    """``max_sigma Tr(A sigma^t) = [Tr A^{1/(1-t)}]^{1-t}``, attained at ``A^{1/(1-t)}`` normalised."""
    rng = trial_rng(seed, 6)
    worst = math.inf
    for _ in range(instances):
        A = qmat.random_psd(d, rng)
        t = float(rng.uniform(0.1, 0.9))
        value = np.trace(qmat.frac_power(A, 1 / (1 - t))).real ** (1 - t)
        opt = qmat.frac_power(A, 1 / (1 - t))
        opt = opt / np.trace(opt).real
        worst = min(worst, -abs(np.trace(A @ qmat.frac_power(opt, t)).real - value))
        for _ in range(5):
            sigma = qmat.random_density(d, rng)
            worst = min(worst, value - np.trace(A @ qmat.frac_power(sigma, t)).real)
    return _result("power_trace_max", f"d={d} instances={instances}", worst)


# --- universal-state invariants --------------------------------------------------------


def check_decoder_complement(seed=0, instances=50, ns=(1, 2, 3)):
    """``I - Lambda_x <= 2^{n t gamma} omega_x^{-t} tau_n^t``."""
    rng = trial_rng(seed, 7)
    worst = math.inf
    for i in range(instances):
        n = ns[i % len(ns)]
        x = rng.integers(0, 2, size=n)
        g = float(rng.choice([0.2, 0.5]))
        om, tn = symm.omega(x, 2, k=2), symm.tau_n(n, 2)
        L = lambda_projector(x, g, 2, k=2)
        for t in (0.3, 0.7):
            rhs = 2.0 ** (n * t * g) * qmat.frac_power(om, -t) @ qmat.frac_power(tn, t)
            worst = min(worst, qmat.min_eig(qmat.herm(rhs) - (np.eye(len(L)) - L)))
    return _result("decoder_complement", f"d_B=2 n={list(ns)} t=0.3,0.7 instances={instances}", worst)


def check_omega_dominance(seed=0, instances=50, ns=(1, 2, 3), k=2):
    """``W(x^n) <= (n+1)^{k(d^2+d)} omega_x``."""
    rng = trial_rng(seed, 8)
    worst = math.inf
    for i in range(instances):
        n = ns[i % len(ns)]
        W = _qubit_channel(rng, k)
        x = rng.integers(0, k, size=n)
        rhs = (n + 1) ** (k * 6) * symm.omega(x, 2, k=k)
        worst = min(worst, qmat.min_eig(rhs - channel_output(W, x)))
    return _result("omega_dominance", f"d_B=2 k={k} n={list(ns)} instances={instances}", worst)


def check_lambda_tau(seed=0, instances=20, ns=(1, 2, 3, 4)):
    """``Tr[Lambda_x tau_n] <= 2^{-n gamma}``."""
    rng = trial_rng(seed, 9)
    worst = math.inf
    for i in range(instances):
        n = ns[i % len(ns)]
        x = rng.integers(0, 2, size=n)
        for g in (0.2, 0.5):
            L = lambda_projector(x, g, 2, k=2)
            worst = min(worst, 2.0 ** (-n * g) - np.trace(L @ symm.tau_n(n, 2)).real)
    return _result("lambda_tau", f"d_B=2 n={list(ns)} gamma=0.2,0.5", worst)


def check_rank_bounds(seeds=(0, 1, 2), max_n=4, d=2):
    """``|K_q| <= rank ~I_q <= (n+1)^{d^2} |K_q|`` and the rank is seed independent."""
    worst = math.inf
    for n in range(1, max_n + 1):
        for q in enumerate_types(n, d):
            ranks = {symm.projector_tildeIq(q, d, s).rank for s in seeds}
            K = multinomial(q)
            r = ranks.pop()
            worst = min(worst, r - K, (n + 1) ** (d * d) * K - r, -len(ranks))
    return _result("rank_bounds", f"d={d} n<={max_n} seeds={list(seeds)}", worst)


def check_iq_tau_q(seed=0, states=5, max_n=3, d=2):
    """``I_q sigma^{(x)n} I_q <= (n+1)^{d^2} tau_q`` with ``I_q`` in the eigenbasis of ``sigma``."""
    rng = trial_rng(seed, 10)
    worst = math.inf
    for _ in range(states):
        sigma = qmat.random_density(d, rng)
        _, V = qmat.eigh(sigma)
        for n in range(1, max_n + 1):
            Vn = qmat.kron_power(V, n)
            sn = qmat.kron_power(sigma, n)
            for q in enumerate_types(n, d):
                Iq = Vn @ symm.projector_Iq(q, d) @ Vn.conj().T
                worst = min(worst, qmat.min_eig((n + 1) ** (d * d) * symm.tau_q(q, d) - Iq @ sn @ Iq))
    return _result("iq_tau_q", f"d={d} n<={max_n} states={states}", worst)


def check_sigma_type(seed=0, n=3, d=2):
    """``I_q sigma^{(x)n} I_q = 2^{-n[D(q||lam)+H(q)]} I_q`` in the eigenbasis."""
    rng = trial_rng(seed, 11)
    lam = np.sort(rng.dirichlet(np.ones(d)))[::-1]
    sn = qmat.kron_power(np.diag(lam).astype(complex), n)
    worst = 0.0
    for q, coef in symm.sigma_type_decomposition(lam, n).items():
        Iq = symm.projector_Iq(q, d)
        worst = max(worst, qmat.max_abs(Iq @ sn @ Iq - coef * Iq))
    return _result("sigma_type", f"d={d} n={n}", -worst)


def check_commutators(seed=0, max_n=4, states=5):
    """``[omega_x, tau_n] = 0`` for every ``x`` and ``[tau_n, sigma^{(x)n}] = 0``."""
    rng = trial_rng(seed, 12)
    worst = 0.0
    for n in range(1, max_n + 1):
        tn = symm.tau_n(n, 2)
        for x in itertools.product(range(2), repeat=n):
            worst = max(worst, qmat.max_abs(qmat.commutator(symm.omega(x, 2, k=2), tn)))
        for _ in range(states):
            sigma = qmat.random_density(2, rng)
            worst = max(worst, qmat.max_abs(qmat.commutator(tn, qmat.kron_power(sigma, n))))
    return _result("commutators", f"k=2 d=2 n<={max_n} states={states}", -worst)


def check_tau_permutation(max_n=4, d=2):
    """``U_s tau_n U_s^dag = tau_n`` for every ``s``."""
    worst = 0.0
    for n in range(1, max_n + 1):
        tn = symm.tau_n(n, d)
        for s in itertools.permutations(range(n)):
            worst = max(worst, qmat.max_abs(qmat.permute_operator(tn, s, d) - tn))
    return _result("tau_permutation", f"d={d} n<={max_n}", -worst)


def check_typical_projector(seed=0, states=10, ns=(2, 4, 6), delta=0.5):
    """``Tr Pi = sum over typical types`` (exact mass) and ``Tr Pi <= 2^{n[S + c delta]}``, ``c = S(sigma)``."""
    rng = trial_rng(seed, 13)
    worst = math.inf
    for _ in range(states):
        sigma = qmat.random_density(2, rng)
        for n in ns:
            P, lam = symm.typical_projector(sigma, n, delta, return_eigvals=True)
            S = shannon(lam)
            mass = sum(multinomial(q) * np.prod(lam ** np.array(q)) for q in enumerate_types(n, 2)
                       if np.all(np.abs(np.array(q) / n - lam) <= lam * delta + 1e-12))
            worst = min(worst, -abs(np.trace(P @ qmat.kron_power(sigma, n)).real - mass))
            worst = min(worst, 2.0 ** (n * (S + S * delta)) - np.trace(P).real)
    return _result("typical_projector", f"d=2 n={list(ns)} delta={delta}", worst)


def check_smoothing_chain(n=6, delta=2.0, eps=0.1):
    """Every smoothing step on the covering qubit, at the measured effective eps.

    The effective eps is the worst typical-projector deficiency actually
    present, so each step's hypothesis holds by construction.
    """
    W = fixtures.covering_qubit()
    p = np.array([0.5, 0.5])
    eff = max(covering.chain_eps(covering.smoothing_context(W, p, n, delta, eps)), 1e-12)
    ctx = covering.smoothing_context(W, p, n, delta, eff)
    worst = math.inf
    for x in typical_set(p, n, delta).sequences:
        chain = covering.smoothing_chain(W, x, delta, eff, ctx=ctx)
        for key, (val, bound) in covering.chain_bounds(chain, W.k, eff).items():
            worst = min(worst, val - bound if key.startswith("trace") else bound - val)
    for key, (val, bound) in covering.context_bounds(ctx).items():
        worst = min(worst, bound - val if key == "commutator" else val - bound)
    return _result("smoothing_chain", f"covering qubit n={n} delta={delta} eps_eff={eff:.4g}", worst)


# --- entropy identities ----------------------------------------------------------------


def check_entropy_identities(seed=0, instances=10):
    """Relative-entropy form of chi, ``chi_a <= chi``, monotonicity in ``t`` and ``chi_0.999 ~ chi``."""
    rng = trial_rng(seed, 14)
    worst = math.inf
    grid = np.round(np.arange(0.05, 0.951, 0.05), 2)
    for _ in range(instances):
        k = int(rng.integers(2, 4))
        probs = rng.dirichlet(np.ones(k))
        states = [qmat.random_density(2, rng) for _ in range(k)]
        chi = holevo(probs, states)
        worst = min(worst, 1e-9 - abs(holevo_relative(probs, states) - chi))
        worst = min(worst, 0.01 - abs(alpha_chi(0.999, probs, states) - chi))
        vals = [alpha_chi(1 - t, probs, states) for t in grid]
        worst = min(worst, chi - max(vals), -max(np.diff(vals).max(), 0.0))
        worst = min(worst, chi, math.log2(2) - chi)
    return _result("entropy_identities", f"d=2 instances={instances}", worst)


SUITE = (
    check_tau_dominance,
    check_threshold_trace,
    check_gentle_measurement,
    check_hayashi_nagaoka,
    check_hayashi_nagaoka_code,
    check_power_trace_max,
    check_decoder_complement,
    check_omega_dominance,
    check_lambda_tau,
    check_rank_bounds,
    check_iq_tau_q,
    check_sigma_type,
    check_commutators,
    check_tau_permutation,
    check_typical_projector,
    check_smoothing_chain,
    check_entropy_identities,
)


def run_suite(seed: int = 0) -> list[CheckResult]:
    """Every check at its default size; seed-free checks ignore ``seed``."""
    return [fn(seed=seed) if "seed" in inspect.signature(fn).parameters else fn() for fn in SUITE]
