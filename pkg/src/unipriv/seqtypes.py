"""Method of types: types, type classes, typical sets and the typical-set sampler.

Letters are 0-based integers ``0..k-1``; sequences are integer arrays.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .entropy import shannon

_SLACK = 1e-12


def enumerate_types(n: int, k: int) -> list[tuple[int, ...]]:
    """All count vectors of length ``k`` summing to ``n``, in descending lexicographic order."""
    if n < 0 or k < 1:
        raise ValueError("need n >= 0 and k >= 1")
    out = []
    for bars in itertools.combinations(range(n + k - 1), k - 1):
        edges = (-1,) + bars + (n + k - 1,)
        out.append(tuple(edges[i + 1] - edges[i] - 1 for i in range(k)))
    return out[::-1]


def num_types(n: int, k: int) -> int:
    return math.comb(n + k - 1, k - 1)


def type_of(x, k: int) -> tuple[int, ...]:
    return tuple(int(c) for c in np.bincount(np.asarray(x, dtype=int), minlength=k)[:k])


def multinomial(q) -> int:
    """Size of the type class with counts ``q``."""
    out, rest = 1, sum(q)
    for c in q:
        out *= math.comb(rest, c)
        rest -= c
    return out


def type_class(q) -> Iterator[tuple[int, ...]]:
    """Lexicographic iterator over all sequences with letter counts ``q``."""
    q = list(q)
    n = sum(q)
    seq = [0] * n

    def rec(pos):
        if pos == n:
            yield tuple(seq)
            return
        for a, c in enumerate(q):
            if c:
                q[a] -= 1
                seq[pos] = a
                yield from rec(pos + 1)
                q[a] += 1

    yield from rec(0)


def zeta(n: int, k: float) -> float:
    """``(k/n) log2(n+1)``; ``2^(n zeta)`` is the polynomial type-counting factor."""
    if n < 1:
        raise ValueError("n must be positive")
    return k / n * math.log2(n + 1)


def check_dist(p) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    if p.ndim != 1 or len(p) == 0:
        raise ValueError("distribution must be a nonempty vector")
    if np.any(p < 0) or abs(p.sum() - 1) > 1e-12:
        raise ValueError(f"not a probability vector: {p.tolist()}")
    return p


def is_typical_type(q, p, delta: float) -> bool:
    """``|q_i/n - p_i| <= p_i delta`` for every letter (forces ``q_i = 0`` where ``p_i = 0``)."""
    q = np.asarray(q, dtype=float)
    n = q.sum()
    return bool(np.all(np.abs(q / n - p) <= p * delta + _SLACK))


class EmptyTypicalSetError(ValueError):
    """No type satisfies the typicality condition."""


def typical_types(p, n: int, delta: float) -> list[tuple[int, ...]]:
    p = check_dist(p)
    if delta <= 0:
        raise ValueError("delta must be positive")
    return [q for q in enumerate_types(n, len(p)) if is_typical_type(q, p, delta)]


def sequence_prob(x, p) -> float:
    """Product probability ``p^n(x^n)``."""
    return float(np.prod(np.asarray(p, dtype=float)[np.asarray(x, dtype=int)]))


def type_prob(q, p) -> float:
    """Probability of any single sequence of type ``q``."""
    return float(np.prod([pi**c for pi, c in zip(p, q)]))


@dataclass(frozen=True)
class TypicalSet:
    """Delta-typical sequences with their product probabilities and total mass ``Q``."""

    p: np.ndarray
    n: int
    delta: float
    sequences: np.ndarray  # (N, n) int
    probs: np.ndarray  # p^n(x^n) for each row
    Q: float

    def __len__(self):
        return len(self.sequences)

    @property
    def conditional_probs(self) -> np.ndarray:
        """``p^n(x^n) / Q`` on the typical set."""
        return self.probs / self.Q


def typical_set(p, n: int, delta: float) -> TypicalSet:
    """Enumerate ``T^n_{p,delta}``; materialised, so keep ``k^n`` modest."""
    p = check_dist(p)
    types = typical_types(p, n, delta)
    seqs, probs = [], []
    for q in types:
        pq = type_prob(q, p)
        for x in type_class(q):
            seqs.append(x)
            probs.append(pq)
    seqs = np.array(seqs, dtype=int).reshape(-1, n)
    probs = np.array(probs, dtype=float)
    return TypicalSet(p, n, delta, seqs, probs, float(probs.sum()))


def typical_mass(p, n: int, delta: float) -> float:
    """``Q_n``, computed per type without listing sequences."""
    p = check_dist(p)
    return float(sum(multinomial(q) * type_prob(q, p) for q in typical_types(p, n, delta)))


class TypicalSampler:
    """Draws i.i.d. sequences with law ``p^n(x^n)/Q_n`` on the typical set.

    A type is drawn with probability ``|T(q)| p^q / Q_n`` and then a uniformly
    random arrangement of it, so the typical set is never listed.
    """

    def __init__(self, p, n: int, delta: float):
        self.p = check_dist(p)
        self.n = n
        self.delta = delta
        self.types = typical_types(self.p, n, delta)
        if not self.types:
            raise EmptyTypicalSetError(f"typical set is empty for p={self.p.tolist()}, n={n}, delta={delta}")
        w = np.array([multinomial(q) * type_prob(q, self.p) for q in self.types])
        self.Q = float(w.sum())
        self.type_weights = w / self.Q
        self._ordered = [np.repeat(np.arange(len(self.p)), q) for q in self.types]

    def draw(self, rng, size: int | None = None) -> np.ndarray:
        """One sequence (``size=None``) or an array of ``size`` sequences."""
        m = 1 if size is None else size
        picks = rng.choice(len(self.types), size=m, p=self.type_weights)
        out = np.empty((m, self.n), dtype=int)
        for r, i in enumerate(picks):
            out[r] = rng.permutation(self._ordered[i])
        return out[0] if size is None else out


def conditional_sampler(p, n: int, delta: float, seed) -> np.ndarray:
    """Single seeded draw from the typical-set conditional law."""
    return TypicalSampler(p, n, delta).draw(np.random.default_rng(seed))


def ordered_rep(x):
    """Sorted sequence ``x_o`` and permutation ``s`` with ``x[s[i]] = x_o[i]``.

    ``s`` maps positions of ``x_o`` to positions of ``x`` (stable ordering), so
    permuting factors of an operator built on ``x_o`` by ``s`` lands it on ``x``.
    """
    x = np.asarray(x, dtype=int)
    s = np.argsort(x, kind="stable")
    return x[s], s


def apply_perm(s, y):
    """Sequence with ``y[i]`` moved to slot ``s[i]``."""
    y = np.asarray(y)
    out = np.empty_like(y)
    out[np.asarray(s)] = y
    return out


def ct_constant(p) -> float:
    """Default typicality constant ``c = H(p)``."""
    return shannon(p)
