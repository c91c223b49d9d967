import itertools
import math

import numpy as np
import pytest

from unipriv import covering as cv
from unipriv import fixtures, qmat, symm
from unipriv.entropy import holevo, vn_entropy
from unipriv.packing import CqChannel, channel_output
from unipriv.seqtypes import typical_set

P = np.array([0.5, 0.5])


@pytest.fixture(scope="module")
def W():
    return fixtures.covering_qubit()


def test_constants():
    assert cv.K_C == pytest.approx(1.0407, abs=1e-4)
    ke = math.sqrt(0.2)
    assert cv.obfus_threshold(2, 0.1) == pytest.approx(0.1 + 4 * ke + 8 * math.sqrt(0.3 + 2 * ke))


def test_cond_projector_flat_and_single_letter(rng):
    flat = fixtures.identical_outputs()
    assert np.allclose(cv.cond_typical_projector(flat, [0, 1, 1], 1.0), np.eye(8))
    Wr = CqChannel((qmat.random_density(2, rng), qmat.random_density(2, rng)))
    assert np.allclose(cv.cond_typical_projector(Wr, [1], 0.4), symm.typical_projector(Wr.outputs[1], 1, 0.4))


def test_cond_projector_product_trace(W, rng):
    for x in rng.integers(0, 2, size=(5, 6)):
        Pc = cv.cond_typical_projector(W, x, 0.9)
        out = channel_output(W, x)
        assert qmat.max_abs(qmat.commutator(Pc, out)) <= 1e-9
        tr = np.trace(Pc @ out).real
        defs = cv.letter_deficiencies(W, x, 0.9)
        assert tr == pytest.approx(np.prod(1 - defs), abs=1e-12)
        eps = max(defs.max(), 1e-15)
        assert tr >= 1 - W.k * eps - 1e-12


def test_cond_projector_mixed_letters(rng):
    Wr = CqChannel((qmat.random_density(2, rng), qmat.random_density(2, rng)))
    x = np.array([1, 0, 1, 1, 0])
    Pc = cv.cond_typical_projector(Wr, x, 0.6)
    assert qmat.is_projector(Pc)
    assert qmat.max_abs(qmat.commutator(Pc, channel_output(Wr, x))) <= 1e-9


def test_chain_flat_channel():
    flat = fixtures.identical_outputs()
    ctx = cv.smoothing_context(flat, P, 3, 1.0, 0.1)
    ch = cv.smoothing_chain(flat, [0, 1, 0], 1.0, 0.1, ctx=ctx)
    for op in (ch.sigma, ch.phi, ch.theta):
        assert np.allclose(op, ch.W)
    assert ch.letter_deficiency == pytest.approx(0, abs=1e-12)
    assert ch.avg_deficiency == pytest.approx(0, abs=1e-12)


def test_chain_requires_p(W):
    with pytest.raises(ValueError):
        cv.smoothing_chain(W, [0, 1], 0.5, 0.1)


def test_chain_bounds_at_effective_eps(W):
    n, delta = 6, 2.0
    eps = cv.chain_eps(cv.smoothing_context(W, P, n, delta, 0.1))
    ctx = cv.smoothing_context(W, P, n, delta, eps)
    ke = math.sqrt(2 * eps)
    for x in typical_set(P, n, delta).sequences[::7]:
        ch = cv.smoothing_chain(W, x, delta, eps, ctx=ctx)
        b = cv.chain_bounds(ch, 2, eps)
        assert b["trace_sigma"][0] >= b["trace_sigma"][1] - 1e-12
        assert b["phi_vs_W"][0] <= 2 * ke + 2 * math.sqrt(eps + 2 * ke) + 1e-12
        assert np.trace(ch.phi).real <= np.trace(ch.sigma).real + 1e-12 <= 1 + 2e-12
        for key in ("sigma_vs_W", "phi_vs_sigma"):
            assert b[key][0] <= b[key][1] + 1e-12
    cb = cv.context_bounds(ctx)
    assert cb["trace_phi_bar_p"][0] >= cb["trace_phi_bar_p"][1] - 1e-12
    assert cb["window_floor"][0] >= -1e-12
    assert cb["commutator"][0] <= 1e-9


def test_psi_scale_pure_outputs(W):
    n, delta = 4, 0.5
    ctx = cv.smoothing_context(W, P, n, delta, 0.1)
    c = ctx.c
    assert ctx.psi_scale == pytest.approx(2 ** (-n * c * delta))
    ch = cv.smoothing_chain(W, [0, 1, 0, 1], delta, 0.1, ctx=ctx)
    assert np.allclose(ch.psi, ctx.psi_scale * ch.theta)


def test_phi_bar_is_exact_average(W):
    n, delta = 4, 0.5
    ctx = cv.smoothing_context(W, P, n, delta, 0.1)
    ts = typical_set(P, n, delta)
    avg = sum(w * ctx.phi(x) for x, w in zip(ts.sequences, ts.conditional_probs))
    assert np.allclose(ctx.phi_bar, avg)
    assert np.allclose(sum(w * ctx.theta(x) for x, w in zip(ts.sequences, ts.conditional_probs)), ctx.phi_bar_p)


def test_obfuscation_examples(W):
    flat = fixtures.identical_outputs()
    assert cv.obfuscation_error(flat, [[0, 1, 1]], P) == pytest.approx(0, abs=1e-12)
    everything = np.array(list(itertools.product(range(2), repeat=4)))
    assert cv.obfuscation_error(W, everything, P) == pytest.approx(0, abs=1e-12)
    assert cv.obfuscation_error(fixtures.distinguishable_qubit(), [[0, 0, 1, 1]], P) == pytest.approx(1.875)
    with pytest.raises(ValueError):
        cv.obfuscation_error(W, np.zeros((0, 3), dtype=int), P)


def test_obfuscation_relabel_invariant(W, rng):
    S = rng.integers(0, 2, size=(5, 4))
    assert cv.obfuscation_error(W, S, P) == pytest.approx(cv.obfuscation_error(W, S[rng.permutation(5)], P),
                                                          abs=1e-12)


def test_experiment_degenerate_and_flat():
    st = cv.covering_experiment(fixtures.covering_qubit(), [1.0, 0.0], 4, 0.5, 0.1, 3, 5, seed=0)
    assert np.ptp(st.deltas) == 0
    assert st.Delta_stderr == 0
    flat = cv.covering_experiment(fixtures.identical_outputs(), P, 4, 0.5, 0.1, 4, 5, seed=0)
    assert np.allclose(flat.deltas, 0)


def test_experiment_reconstruction(W):
    st = cv.covering_experiment(W, P, 4, 0.5, 0.1, 8, 10, seed=2)
    assert np.all(st.deltas <= st.threshold_obfus)
    assert st.freq_above_threshold == 0


def test_experiment_reproducible(W):
    a = cv.covering_experiment(W, P, 4, 0.5, 0.1, 8, 6, seed=4)
    b = cv.covering_experiment(W, P, 4, 0.5, 0.1, 8, 6, seed=4, workers=3)
    assert np.array_equal(a.deltas, b.deltas) and a.Delta_mean == b.Delta_mean


def test_eps_prime_warns_on_equality(W):
    chi = holevo(P, W.outputs)
    with pytest.warns(UserWarning):
        cv.eps_prime_n(6, 0.1, chi, chi, vn_entropy(W.average(P)), 1.0, 0.5)


def test_chernoff_examples():
    A = np.diag([0.6, 0.4])
    emp, bound, se = cv.chernoff_check([A], [1.0], 50, 0.2, 20, seed=0)
    assert emp == 0
    ops = [np.diag([0.9, 0.3]), np.diag([0.5, 0.7])]
    emp, bound, se = cv.chernoff_check(ops, [0.5, 0.5], 200, 0.3, 500, seed=1)
    assert emp <= bound + 3 * se
    assert bound == pytest.approx(4 * 2 ** (-200 * cv.K_C * 0.09 * 0.5))


def test_chernoff_preconditions():
    with pytest.raises(ValueError):
        cv.chernoff_check([np.diag([1.0, 0.0])], [1.0], 10, 0.2, 5, seed=0)
    with pytest.raises(ValueError):
        cv.chernoff_check([np.diag([1.5, 0.5])], [1.0], 10, 0.2, 5, seed=0)
    with pytest.raises(ValueError):
        cv.chernoff_check([np.diag([0.5, 0.5])], [1.0], 10, 0.7, 5, seed=0)
