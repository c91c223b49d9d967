import math

import numpy as np
import pytest
from scipy.optimize import minimize

from unipriv import qmat
from unipriv.entropy import (Ensemble, alpha_chi, classical_renyi, cq_state, holevo, holevo_relative, kl,
                             rel_entropy, renyi_rel_entropy, shannon, vn_entropy)

PAULI = np.array([[[0, 1], [1, 0]], [[0, -1j], [1j, 0]], [[1, 0], [0, -1]]])
PLUS = qmat.proj(np.array([1, 1]) / np.sqrt(2))
ZERO, ONE = qmat.proj(qmat.ket(0, 2)), qmat.proj(qmat.ket(1, 2))


def h2(x):
    return -x * math.log2(x) - (1 - x) * math.log2(1 - x)


def test_vn_entropy_examples():
    assert vn_entropy(ZERO) == pytest.approx(0, abs=1e-12)
    assert vn_entropy(np.eye(2) / 2) == pytest.approx(1)
    assert vn_entropy(np.diag([0.75, 0.25])) == pytest.approx(0.8112781244591328)


def test_rel_entropy_examples(rng):
    rho = qmat.random_density(3, rng)
    assert rel_entropy(rho, rho) == pytest.approx(0, abs=1e-10)
    assert rel_entropy(ZERO, np.eye(2) / 2) == pytest.approx(1)
    assert rel_entropy(ZERO, ONE) == math.inf


def test_renyi_examples(rng):
    rho = qmat.random_density(2, rng)
    assert renyi_rel_entropy(0.4, rho, rho) == pytest.approx(0, abs=1e-10)
    p, q = np.array([0.2, 0.8]), np.array([0.6, 0.4])
    assert renyi_rel_entropy(0.3, np.diag(p), np.diag(q)) == pytest.approx(classical_renyi(0.3, p, q))
    scalar = math.log2((p**0.3 * q**0.7).sum()) / (0.3 - 1)
    assert classical_renyi(0.3, p, q) == pytest.approx(scalar)
    for _ in range(10):
        a, b = qmat.random_density(2, rng), qmat.random_density(2, rng)
        assert abs(renyi_rel_entropy(0.999, a, b) - rel_entropy(a, b)) <= 0.01
    for alpha in (0.0, 1.0, 1.5):
        with pytest.raises(ValueError):
            renyi_rel_entropy(alpha, rho, rho)


def test_holevo_examples():
    assert holevo([0.5, 0.5], [PLUS, PLUS]) == pytest.approx(0, abs=1e-12)
    assert holevo([0.5, 0.5], [ZERO, ONE]) == pytest.approx(1)
    # average of |0> and |+> has eigenvalues (1 +- 1/sqrt2)/2
    assert holevo([0.5, 0.5], [ZERO, PLUS]) == pytest.approx(h2((1 + 1 / math.sqrt(2)) / 2))
    assert holevo([0.5, 0.5], [ZERO, PLUS]) == pytest.approx(0.6009, abs=1e-4)


def test_holevo_as_relative_entropy(rng):
    for _ in range(10):
        probs = rng.dirichlet(np.ones(3))
        states = [qmat.random_density(2, rng) for _ in range(3)]
        assert holevo_relative(probs, states) == pytest.approx(holevo(probs, states), abs=1e-9)
        chi = holevo(probs, states)
        assert -1e-12 <= chi <= 1 + 1e-12


def test_cq_state_trace_and_blocks(rng):
    states = [qmat.random_density(2, rng) for _ in range(2)]
    s = cq_state([0.3, 0.7], states)
    assert np.trace(s).real == pytest.approx(1)
    assert np.allclose(s[2:, 2:], 0.7 * states[1])


def test_ensemble_validation():
    with pytest.raises(ValueError):
        Ensemble([0.5, 0.5], [ZERO])
    E = Ensemble([0.5, 0.5], [ZERO, PLUS])
    assert E.dim == 2 and np.allclose(E.average, (ZERO + PLUS) / 2)
    assert holevo(E) == pytest.approx(holevo([0.5, 0.5], [ZERO, PLUS]))


def test_kl_examples():
    q = np.array([0.3, 0.7])
    assert kl(q, q) == 0
    assert kl([1, 0], [0.5, 0.5]) == pytest.approx(1)
    assert kl([0.75, 0.25], [0.5, 0.5]) == pytest.approx(0.18872187554086717)
    assert kl([0.5, 0.5], [1, 0]) == math.inf
    assert shannon([0.5, 0.5]) == 1


def bloch_states(r):
    """Density operators for Bloch vectors ``r`` (rows)."""
    return (np.eye(2) + np.einsum("ni,ijk->njk", r, PAULI)) / 2


def variational_alpha_chi(alpha, probs, states, step=0.02):
    """``min_omega S_alpha(sigma_XQ || sigma_X (x) omega)`` over the qubit Bloch ball."""
    A = sum(p * qmat.frac_power(s, alpha) for p, s in zip(probs, states))
    a0 = np.trace(A).real
    avec = np.array([np.trace(A @ P).real for P in PAULI])
    beta = 1 - alpha

    def value(r):
        r = np.atleast_2d(r)
        norm = np.linalg.norm(r, axis=1)
        nhat = np.divide(r, norm[:, None], out=np.zeros_like(r), where=norm[:, None] > 0)
        proj = nhat @ avec
        lp, lm = (1 + norm) / 2, (1 - norm) / 2
        lm_b = np.where(lm > 0, np.abs(lm) ** beta, 0.0)
        tr = lp**beta * (a0 + proj) / 2 + lm_b * (a0 - proj) / 2
        return np.log2(tr) / (alpha - 1)

    g = np.arange(-1, 1 + 1e-9, step)
    grid = np.stack(np.meshgrid(g, g, g, indexing="ij"), -1).reshape(-1, 3)
    grid = grid[np.linalg.norm(grid, axis=1) <= 1]
    vals = value(grid)
    r0 = grid[np.argmin(vals)]

    def inside(v):
        nv = np.linalg.norm(v)
        return v if nv == 0 else v * math.tanh(nv) / nv

    def seed_of(r):
        nr = np.linalg.norm(r)
        return r if nr == 0 else r / nr * math.atanh(min(nr, 1 - 1e-9))

    res = minimize(lambda v: value(inside(v))[0], seed_of(r0), method="Nelder-Mead",
                   options={"xatol": 1e-10, "fatol": 1e-12, "maxiter": 4000})
    return min(vals.min(), res.fun)


def test_alpha_chi_matches_variational(rng):
    for _ in range(10):
        k = int(rng.integers(2, 4))
        probs = rng.dirichlet(np.ones(k))
        states = [qmat.random_density(2, rng) for _ in range(k)]
        alpha = float(rng.uniform(0.2, 0.9))
        assert alpha_chi(alpha, probs, states) == pytest.approx(variational_alpha_chi(alpha, probs, states),
                                                                abs=1e-4)


def test_alpha_chi_limits_and_order(rng):
    assert alpha_chi(0.5, [1.0], [PLUS]) == pytest.approx(0, abs=1e-12)
    grid = np.round(np.arange(0.05, 0.951, 0.05), 2)
    for _ in range(10):
        probs = rng.dirichlet(np.ones(2))
        states = [qmat.random_density(2, rng) for _ in range(2)]
        chi = holevo(probs, states)
        assert abs(alpha_chi(0.999, probs, states) - chi) <= 0.01
        vals = [alpha_chi(1 - t, probs, states) for t in grid]
        assert np.all(np.diff(vals) <= 1e-12)
        assert max(vals) <= chi + 1e-12
    with pytest.raises(ValueError):
        alpha_chi(1.0, [1.0], [PLUS])
