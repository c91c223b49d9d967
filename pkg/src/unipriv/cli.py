"""Batch driver: ``unipriv {verify,packing,covering,private,entropy,fixture}``.

Exit codes: 0 success, 1 failed check/verdict or infeasible sizing, 2 bad input.
CSV floats carry 12 significant digits so equal runs give equal bytes.
"""

from __future__ import annotations

import argparse
import csv
import io
import math
import sys
import warnings
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import covering, fixtures, packing, private, qmat, symm, verify
from .entropy import alpha_chi, holevo, vn_entropy
from .seqtypes import EmptyTypicalSetError, ct_constant

PACKING_COLUMNS = ["n", "R_requested", "R_effective", "M_n", "gamma_n", "t", "p_e_mean", "p_e_stderr", "bound_e16",
                   "seed"]
COVERING_COLUMNS = ["n", "L_n", "delta", "eps", "Delta_mean", "Delta_stderr", "threshold_obfus", "eps_prime_n", "seed"]
PRIVATE_COLUMNS = ["n", "J_n", "L_n", "p_e", "Delta_max", "verdict", "collisions", "seed"]

FIXTURES = {
    "distinguishable": lambda: (fixtures.distinguishable_qubit(), [0.5, 0.5]),
    "hadamard": lambda: (fixtures.hadamard_qubit(), [0.5, 0.5]),
    "covering": lambda: (fixtures.covering_qubit(), [0.5, 0.5]),
    "degraded": lambda: (fixtures.degraded_eavesdropper(), [0.5, 0.5]),
}
DEFAULT_FIXTURE = {"verify": None, "packing": "distinguishable", "covering": "covering", "private": "degraded",
                   "entropy": "covering"}


class InputError(Exception):
    """Bad flags or channel file; exit code 2."""


def fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "pass" if v else "fail"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return f"{float(v):.12g}"


def write_csv(columns, rows, out) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        w.writerow([fmt(row[c]) for c in columns])
    emit(buf.getvalue(), out)
    return buf.getvalue()


def emit(text: str, out) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--channel", help="channel file (JSON); defaults to a built-in fixture")
    common.add_argument("--n", type=int, default=6, help="block length, 1..10")
    common.add_argument("--delta", type=float, default=0.5)
    common.add_argument("--eps", type=float, default=0.1)
    common.add_argument("--t", type=float, default=0.5)
    common.add_argument("--chi0", type=float, help="lower bound on Bob's Holevo quantity")
    common.add_argument("--chi1", type=float, help="upper bound on Eve's Holevo quantity")
    common.add_argument("--rate", type=float, default=0.5, help="requested packing rate R")
    common.add_argument("--gamma", type=float, help="decoder threshold gamma_n (overrides the sizing formula)")
    common.add_argument("--ln", type=int, help="covering-set size override")
    common.add_argument("--mn", type=int, help="code-size override")
    common.add_argument("--trials", type=int, default=20)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--workers", type=int, default=1)
    common.add_argument("--out", help="output path (default stdout)")
    common.add_argument("--strict-disjoint", action="store_true", help="redraw codewords shared between covering sets")
    common.add_argument("--eps-target", type=float, help="private verdict: bound on p_e")
    common.add_argument("--delta-target", type=float, help="private verdict: bound on max_j Delta")

    parser = argparse.ArgumentParser(prog="unipriv", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("verify", parents=[common], help="run the lemma and invariant suite")
    sub.add_parser("packing", parents=[common], help="random universal codes: error vs bound")
    sub.add_parser("covering", parents=[common], help="random covering sets: obfuscation error")
    sub.add_parser("private", parents=[common], help="universal private codes: reliability and privacy")
    sub.add_parser("entropy", parents=[common], help="entropic quantities of a channel")
    fx = sub.add_parser("fixture", help="write a built-in channel to a file")
    fx.add_argument("name", choices=sorted(FIXTURES))
    fx.add_argument("--out", required=True)
    return parser


def check_config(a) -> None:
    if not 1 <= a.n <= 10:
        raise InputError(f"--n must lie in [1, 10], got {a.n}")
    if a.delta <= 0 or a.eps <= 0:
        raise InputError("--delta and --eps must be positive")
    if not 0 < a.t < 1:
        raise InputError("--t must lie in (0, 1)")
    if a.trials < 1:
        raise InputError("--trials must be at least 1")
    if not 0 <= a.seed < 2**64:
        raise InputError("--seed must be a 64-bit unsigned integer")
    if a.workers < 1:
        raise InputError("--workers must be at least 1")
    for name in ("ln", "mn"):
        v = getattr(a, name)
        if v is not None and v < 1:
            raise InputError(f"--{name} must be positive")


def load_channel(a, command):
    """``(channel, p)`` from ``--channel`` or the command's default fixture."""
    if a.channel:
        try:
            spec = fixtures.load_spec(a.channel)
        except OSError as exc:
            raise InputError(f"cannot read {a.channel}: {exc}") from exc
        except ValueError as exc:
            raise InputError(f"{a.channel}: {exc}") from exc
        return spec.channel(), spec.p
    name = DEFAULT_FIXTURE[command]
    if name is None:
        return None, None
    W, p = FIXTURES[name]()
    return W, np.asarray(p)


def cq_side(W, side: str):
    if isinstance(W, private.BipartiteCqChannel):
        return private.marginals(W)[0 if side == "B" else 1]
    return W


# --- subcommands -----------------------------------------------------------------------


def cmd_verify(a) -> int:
    W, p = load_channel(a, "verify")
    results = verify.run_suite(a.seed)
    if W is not None:
        results.append(channel_check(cq_side(W, "B"), min(a.n, 3)))
    lines = [r.line() for r in results]
    ok = all(r.passed for r in results)
    lines.append(f"{sum(r.passed for r in results)}/{len(results)} checks passed")
    emit("\n".join(lines) + "\n", a.out)
    return 0 if ok else 1


def channel_check(W, n: int) -> verify.CheckResult:
    """``W(x^n) <= (n+1)^{k(d^2+d)} omega_x`` for every ``x`` on a loaded channel."""
    worst = math.inf
    for x in np.ndindex(*([W.k] * n)):
        rhs = (n + 1) ** (W.k * (W.d**2 + W.d)) * symm.omega(np.array(x), W.d, k=W.k)
        worst = min(worst, qmat.min_eig(rhs - packing.channel_output(W, x)))
    return verify._result("channel_omega_dominance", f"loaded channel k={W.k} d={W.d} n={n}", worst)


def cmd_packing(a) -> int:
    W, p = load_channel(a, "packing")
    WB = cq_side(W, "B")
    chi_ref = a.chi0 if a.chi0 is not None else holevo(p, WB.outputs)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        rp = packing.rate_params(a.rate, a.t, a.n, WB.k, WB.d, chi_ref)
    if a.mn is not None:
        rp = replace(rp, M_n=a.mn, M_n_exact=float(a.mn))
    if a.gamma is not None:
        rp = replace(rp, gamma_n=a.gamma)
    mean, se = packing.expected_error_mc(WB, p, a.n, a.delta, rp.M_n, rp.gamma_n, a.trials, a.seed, a.workers)
    row = dict(n=a.n, R_requested=a.rate, R_effective=rp.R_effective, M_n=rp.M_n, gamma_n=rp.gamma_n, t=a.t,
               p_e_mean=mean, p_e_stderr=se, bound_e16=packing.error_bound_for_channel(WB, p, rp, a.eps), seed=a.seed)
    write_csv(PACKING_COLUMNS, [row], a.out)
    return 0


def cmd_covering(a) -> int:
    W, p = load_channel(a, "covering")
    WE = cq_side(W, "E")
    chi1 = a.chi1 if a.chi1 is not None else holevo(p, WE.outputs)
    L = a.ln if a.ln is not None else covering.covering_size(chi1, a.n, ct_constant(p), a.delta)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        st = covering.covering_experiment(WE, p, a.n, a.delta, a.eps, L, a.trials, a.seed, chi1=chi1,
                                          workers=a.workers)
    row = dict(n=a.n, L_n=L, delta=a.delta, eps=a.eps, Delta_mean=st.Delta_mean, Delta_stderr=st.Delta_stderr,
               threshold_obfus=st.threshold_obfus, eps_prime_n=st.eps_prime_n, seed=a.seed)
    write_csv(COVERING_COLUMNS, [row], a.out)
    return 0


def cmd_private(a) -> int:
    W, p = load_channel(a, "private")
    if not isinstance(W, private.BipartiteCqChannel):
        raise InputError("private needs a bipartite channel file")
    WB, WE = private.marginals(W)
    chi0 = a.chi0 if a.chi0 is not None else holevo(p, WB.outputs)
    chi1 = a.chi1 if a.chi1 is not None else holevo(p, WE.outputs)
    d_target = a.delta_target if a.delta_target is not None else covering.obfus_threshold(W.k, a.eps)
    rows, ok = [], True
    for i in range(a.trials):
        code = private.build_private_code(p, chi0, chi1, a.n, a.delta, a.eps, a.t, a.seed + i, W.d_B,
                                          M_n=a.mn, L_n=a.ln, strict_disjoint=a.strict_disjoint)
        e_target = a.eps_target
        if e_target is None:
            e_target = private.default_eps_target(W, p, code, a.eps, a.t)
        ev = private.evaluate_private_code(W, code, e_target, d_target, p)
        ok &= ev.verdict
        rows.append(dict(n=a.n, J_n=code.J_n, L_n=code.L_n, p_e=ev.p_e, Delta_max=ev.Delta_max,
                         verdict=ev.verdict, collisions=code.collisions, seed=a.seed + i))
    write_csv(PRIVATE_COLUMNS, rows, a.out)
    return 0 if ok else 1


def cmd_entropy(a) -> int:
    W, p = load_channel(a, "entropy")
    rows = []
    sides = (("B", private.marginals(W)[0]), ("E", private.marginals(W)[1])) if isinstance(
        W, private.BipartiteCqChannel) else (("", W),)
    for tag, C in sides:
        pre = f"{tag}:" if tag else ""
        rows.append((pre + "holevo", holevo(p, C.outputs)))
        rows.append((pre + "S_average", vn_entropy(C.average(p))))
        rows.append((pre + f"chi_{1 - a.t:g}", alpha_chi(1 - a.t, p, C.outputs)))
    if isinstance(W, private.BipartiteCqChannel):
        rows.append(("private_rate", private.private_rate(p, W)))
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["quantity", "value"])
    for name, v in rows:
        w.writerow([name, fmt(v)])
    emit(buf.getvalue(), a.out)
    return 0


def cmd_fixture(a) -> int:
    W, p = FIXTURES[a.name]()
    fixtures.save_spec(fixtures.ChannelSpec.of(W, p), a.out)
    return 0


COMMANDS = {"verify": cmd_verify, "packing": cmd_packing, "covering": cmd_covering, "private": cmd_private,
            "entropy": cmd_entropy, "fixture": cmd_fixture}


def main(argv=None) -> int:
    a = build_parser().parse_args(argv)
    try:
        if a.command != "fixture":
            check_config(a)
        return COMMANDS[a.command](a)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except EmptyTypicalSetError as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
