"""Random instance generators shared by the tests."""

import numpy as np

from wtsp.core import LinearSpeedCost, StepCost, WTspInstance


def random_step(rng, max_thresholds=4, max_rate=5):
    k = int(rng.integers(0, max_thresholds + 1))
    thresholds = sorted(rng.choice(np.arange(0, 60), size=k, replace=False).tolist())
    rates = sorted(rng.integers(0, max_rate + 1, size=k + 1).tolist())
    if rates[-1] == 0:
        rates[-1] = 1
    return StepCost(tuple(thresholds), tuple(rates[:-1]), rates[-1])


def random_path(rng, n, max_gap=10, max_weight=10, f=None):
    gaps = rng.integers(0, max_gap + 1, size=n - 1).tolist()
    weights = rng.integers(0, max_weight + 1, size=n).tolist()
    perm = rng.permutation(n)
    x = np.concatenate([[0], np.cumsum(gaps)]).astype(np.int64)
    f = random_step(rng) if f is None else f
    start = int(rng.integers(n))
    return WTspInstance.path(x[perm], np.array(weights)[perm], f, start=start)


def random_star(rng, leaves, max_dist=10, max_weight=10, f=None, start=0):
    radius = [0] + rng.integers(1, max_dist + 1, size=leaves).tolist()
    weights = [int(rng.integers(0, max_weight + 1))] + rng.integers(0, max_weight + 1, size=leaves).tolist()
    f = random_step(rng) if f is None else f
    return WTspInstance.star(0, radius, weights, f, start=start)


def random_euclidean(rng, n, nu_min=0.0, nu_max=1.0, scale=100):
    pts = rng.uniform(0, scale, size=(n, 2))
    d = np.sqrt(((pts[:, None] - pts[None]) ** 2).sum(-1))
    w = rng.integers(0, 11, size=n)
    w_ref = max(int(w.sum()), 1)
    return WTspInstance.general(d, w, LinearSpeedCost(nu_max, nu_min, w_ref), start=0)
