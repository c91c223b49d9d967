"""
A universal decoder for a qubit channel
=======================================

The decoder is built from the codewords alone.  Each codeword gets the
projector onto where its permutation-symmetric state dominates the
symmetric reference state, and the square-root measurement combines them.
"""

import numpy as np

from unipriv import fixtures, symm
from unipriv.packing import avg_error_prob, build_sqrt_povm, rate_params
from unipriv.seqtypes import TypicalSampler

# Two channels that differ by a Hadamard rotation of every output.
W = fixtures.distinguishable_qubit()
H = fixtures.hadamard_qubit()
p = np.array([0.5, 0.5])

# The reference state tau_n commutes with every permutation, so it is
# the same for both channels.
tau = symm.tau_n(4, 2)
print("tau_4 eigenvalues:", np.unique(np.round(np.linalg.eigvalsh(tau), 6)))

# Draw four typical codewords and build the decoder without ever looking at W.
rng = np.random.default_rng(3)
codewords = TypicalSampler(p, 4, 0.5).draw(rng, 4)
code = build_sqrt_povm(codewords, gamma_n=0.5, d_B=2)
print("codewords:\n", codewords)

# The same measurement decodes both channels equally well.
print("p_e on W:", avg_error_prob(W, code))
print("p_e on H:", avg_error_prob(H, code))

# The asymptotic sizing rule says how many messages a block of length n
# carries at a requested rate; at desk scale the polynomial corrections win.
for n in (4, 6, 8):
    rp = rate_params(0.5, 0.5, n, 2, 2, chi_ref=1.0)
    print(f"n={n}: M_n={rp.M_n}  gamma_n={rp.gamma_n:.3f}  effective rate {rp.R_effective:.3f}")
