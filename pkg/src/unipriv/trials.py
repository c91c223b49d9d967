"""Counter-seeded Monte Carlo trials with schedule-independent aggregation."""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor

import numpy as np


def trial_rng(seed: int, trial: int) -> np.random.Generator:
    """Generator for trial ``trial`` of a run seeded with ``seed``."""
    return np.random.default_rng([int(seed), int(trial)])


def run_trials(fn, trials: int, seed: int, workers: int = 1) -> list:
    """``[fn(trial_rng(seed, i)) for i in range(trials)]``, optionally threaded.

    Results come back in trial order whatever the worker count.
    """
    if trials < 1:
        raise ValueError("trials must be at least 1")
    if seed < 0:
        raise ValueError("seed must be nonnegative")
    if workers <= 1:
        return [fn(trial_rng(seed, i)) for i in range(trials)]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda i: fn(trial_rng(seed, i)), range(trials)))


def mean_stderr(values) -> tuple[float, float]:
    """Sample mean and standard error (0 for a single value), summed in order."""
    values = [float(v) for v in values]
    m = len(values)
    mean = math.fsum(values) / m
    if m == 1:
        return mean, 0.0
    var = math.fsum((v - mean) ** 2 for v in values) / (m - 1)
    return mean, math.sqrt(var / m)


def binomial_stderr(freq: float, m: int) -> float:
    return math.sqrt(max(freq * (1 - freq), 0.0) / m)
