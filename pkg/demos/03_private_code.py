"""
A universal private code against a degraded eavesdropper
========================================================

Bob receives the letter perfectly.  Eve sees it through a strong
depolarizing channel.  The code is drawn from the input distribution and
two Holevo bounds only, and is then scored against the real channel.
"""

import numpy as np

from unipriv import fixtures
from unipriv import private as pv

W = fixtures.degraded_eavesdropper(0.8)
p = np.array([0.5, 0.5])
print(f"private rate chi(B) - chi(E) = {pv.private_rate(p, W):.4f}")

# With the sizing formulas, n=6 leaves room for a single message hidden among three codewords.
code = pv.build_private_code(p, chi0=1.0, chi1=0.05, n=6, delta=0.1, eps=0.1, t=0.5, seed=0, d_B=2)
print("J_n, L_n =", code.J_n, code.L_n)
ev = pv.evaluate_private_code(W, code, eps_target=0.2, delta_target=0.5, p=p)
print(f"p_e over (j, l) {ev.p_e:.3f}, message error {ev.p_e_message:.3f}, max Delta {ev.Delta_max:.3f}")

# Overriding the sizes shows the trade-off: larger covering sets hide better.
for L in (2, 8, 32):
    code = pv.build_private_code(p, 1.0, 0.05, 6, 0.5, 0.1, 0.5, seed=0, d_B=2, M_n=2 * L, L_n=L)
    ev = pv.evaluate_private_code(W, code, 0.2, 0.5, p)
    print(f"L={L:2d}  J={code.J_n}  max Delta {ev.Delta_max:.3f}  collisions {code.collisions}")
