"""
Hiding a message from an eavesdropper by covering
=================================================

Averaging the eavesdropper's output over L random typical codewords pulls
the mixture toward the average output state.  The obfuscation error is the
trace distance between the two.
"""

import numpy as np

from unipriv import covering, fixtures
from unipriv.entropy import holevo

WE = fixtures.covering_qubit()
p = np.array([0.5, 0.5])
print(f"eavesdropper Holevo quantity: {holevo(p, WE.outputs):.4f}")

# Mean obfuscation error over 50 random covering sets, for growing L.
for L in (1, 4, 16, 64):
    st = covering.covering_experiment(WE, p, n=6, delta=0.5, eps=0.1, L_n=L, trials=50, seed=1)
    print(f"L={L:3d}  Delta = {st.Delta_mean:.3f} +- {st.Delta_stderr:.3f}")

# The operator Chernoff bound behind the covering argument, on a tiny example:
# sample means of random effects stay inside a multiplicative window.
ops = [np.diag([0.9, 0.2]), np.diag([0.3, 0.8])]
freq, bound, se = covering.chernoff_check(ops, [0.5, 0.5], N=400, eps=0.2, trials=200, seed=2)
print(f"window failures {freq:.3f} (bound {bound:.3g})")

# The smoothing chain that feeds the proof, checked at the measured epsilon.
ctx = covering.smoothing_context(WE, p, n=6, delta=2.0, eps=0.1)
chain = covering.smoothing_chain(WE, np.array([0, 1, 0, 1, 1, 0]), 2.0, 0.1, ctx=ctx)
eff = covering.chain_eps(ctx)
for name, (measured, bound) in covering.chain_bounds(chain, 2, eff).items():
    print(f"{name:14s} measured {measured:.4f}  bound {bound:.4f}")
