import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from unipriv.entropy import shannon
from unipriv.seqtypes import (EmptyTypicalSetError, TypicalSampler, apply_perm, conditional_sampler, enumerate_types,
                              multinomial, num_types, ordered_rep, sequence_prob, type_class, type_of, typical_mass,
                              typical_set, zeta)


def test_enumerate_types_examples():
    assert enumerate_types(2, 2) == [(2, 0), (1, 1), (0, 2)]
    assert len(enumerate_types(1, 3)) == 3
    assert len(enumerate_types(4, 2)) == 5 <= 25


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 6), st.integers(1, 3))
def test_types_partition_sequences(n, k):
    types = enumerate_types(n, k)
    assert len(types) == num_types(n, k) <= (n + 1) ** k
    assert sum(multinomial(q) for q in types) == k**n
    seen = set()
    for q in types:
        cls = list(type_class(q))
        assert len(cls) == multinomial(q)
        assert all(type_of(x, k) == q for x in cls)
        seen.update(cls)
    assert len(seen) == k**n


def test_type_class_examples():
    assert list(type_class((1, 1))) == [(0, 1), (1, 0)]
    assert list(type_class((2, 0))) == [(0, 0)]
    size = len(list(type_class((2, 2))))
    assert size == 6
    assert 2 ** (4 * (1 - zeta(4, 2))) <= size <= 16


def test_type_class_size_bounds():
    for n, k in [(5, 2), (4, 3)]:
        for q in enumerate_types(n, k):
            H = shannon(np.array(q) / n)
            assert 2 ** (n * (H - zeta(n, k))) <= multinomial(q) * (1 + 1e-12)
            assert multinomial(q) <= 2 ** (n * H) * (1 + 1e-12)


def test_zeta_examples():
    assert zeta(1, 1) == 1
    assert zeta(3, 2) == pytest.approx(4 / 3)
    assert zeta(100, 2) == pytest.approx(0.02 * math.log2(101))
    assert zeta(100, 2) == pytest.approx(0.1332, abs=1e-4)
    with pytest.raises(ValueError):
        zeta(0, 1)


def test_typical_set_examples():
    ts = typical_set([0.5, 0.5], 4, 0.5)
    assert len(ts) == 14 and ts.Q == pytest.approx(0.875)
    full = typical_set([0.3, 0.7], 5, (1 - 0.3) / 0.3)
    assert len(full) == 32 and full.Q == pytest.approx(1)
    deg = typical_set([1.0, 0.0], 5, 0.3)
    assert deg.sequences.tolist() == [[0] * 5] and deg.Q == 1
    assert typical_mass([0.5, 0.5], 4, 0.5) == pytest.approx(0.875)


def test_typical_sequence_bounds():
    p = np.array([0.3, 0.7])
    n, delta = 8, 0.4
    H = shannon(p)
    c = H
    ts = typical_set(p, n, delta)
    for x in ts.sequences:
        px = sequence_prob(x, p)
        assert 2 ** (-n * (H + c * delta)) <= px <= 2 ** (-n * (H - c * delta))
    assert len(ts) <= 2 ** (n * (H + c * delta))


def test_sampler_degenerate_and_seeded():
    assert conditional_sampler([1.0, 0.0], 5, 0.2, seed=3).tolist() == [0] * 5
    assert np.array_equal(conditional_sampler([0.5, 0.5], 6, 0.5, 11), conditional_sampler([0.5, 0.5], 6, 0.5, 11))


def test_sampler_law_matches_enumeration():
    p, n, delta = [0.5, 0.5], 4, 0.5
    ts = typical_set(p, n, delta)
    draws = TypicalSampler(p, n, delta).draw(np.random.default_rng(0), 100_000)
    idx = draws @ (2 ** np.arange(n - 1, -1, -1))
    counts = np.bincount(idx, minlength=2**n)
    target = np.zeros(2**n)
    target[ts.sequences @ (2 ** np.arange(n - 1, -1, -1))] = ts.conditional_probs
    sd = np.sqrt(target * (1 - target) / 1e5)
    assert np.all(np.abs(counts / 1e5 - target) <= 3 * sd + 1e-12)


def test_sampler_close_to_product_law():
    p, n, delta = np.array([0.3, 0.7]), 6, 0.5
    ts = typical_set(p, n, delta)
    eps = 1 - ts.Q
    prod = {tuple(x): sequence_prob(x, p) for x in itertools.product(range(2), repeat=n)}
    cond = {tuple(x): w for x, w in zip(ts.sequences, ts.conditional_probs)}
    tv = sum(abs(prod[x] - cond.get(x, 0.0)) for x in prod)
    assert tv <= 2 * eps + 1e-12


def test_empty_typical_set():
    with pytest.raises(EmptyTypicalSetError):
        TypicalSampler([0.5, 0.5], 3, 0.1)


def test_ordered_rep_examples(rng):
    xo, s = ordered_rep([0, 1, 2])
    assert xo.tolist() == [0, 1, 2] and s.tolist() == [0, 1, 2]
    xo, s = ordered_rep([1, 0])
    assert xo.tolist() == [0, 1] and s.tolist() == [1, 0]
    for _ in range(20):
        x = rng.integers(0, 3, size=6)
        xo, s = ordered_rep(x)
        assert np.all(np.diff(xo) >= 0)
        assert np.array_equal(apply_perm(s, xo), x)
