"""Logarithmic-factor approximation for linear speed decrease on general metrics.

Take a constant-factor TSP tour that ignores weights and choose where to start
it.  After normalising (tour length, total weight and top speed all equal to
``n``; minimum speed zero), define per edge

    a_i = gap_i - w_{i+1} + eps * (1 - w_{i+1}),

which sums to zero.  Starting right after the lowest prefix sum makes every
cyclic prefix sum nonnegative.  Then the remaining speed never falls far
behind the remaining distance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import LinearSpeedCost, WTspInstance, tour_cost, validate_metric


# --------------------------------------------------------------------------
# Weight-oblivious TSP tour
# --------------------------------------------------------------------------

def minimum_spanning_tree(distance: np.ndarray, root: int = 0) -> np.ndarray:
    """Prim's algorithm; returns the parent array (``-1`` at the root).

    Ties go to the lowest-index candidate.
    """
    d = np.asarray(distance, dtype=float)
    n = len(d)
    parent = np.full(n, -1)
    in_tree = np.zeros(n, dtype=bool)
    key = np.full(n, np.inf)
    key[root] = 0.0
    for _ in range(n):
        cand = np.where(in_tree, np.inf, key)
        u = int(np.argmin(cand))
        if not np.isfinite(cand[u]):
            raise ValueError("distance matrix describes a disconnected graph")
        in_tree[u] = True
        better = ~in_tree & (d[u] < key)
        key[better] = d[u][better]
        parent[better] = u
    return parent


def metric_tsp_approx(instance: WTspInstance, check: bool = True) -> tuple:
    """Double-tree tour: preorder walk of a minimum spanning tree.

    The walk starts at ``instance.start`` and visits children in index order.
    On a metric its length is at most twice the optimal tour length.
    """
    if check and instance.n <= 300:
        bad = validate_metric(instance)
        if bad:
            raise ValueError(f"distances are not a metric: {bad[0]}")
    parent = minimum_spanning_tree(instance.distance, instance.start)
    children = [[] for _ in range(instance.n)]
    for v, p in enumerate(parent):
        if p >= 0:
            children[p].append(v)
    tour, stack = [], [instance.start]
    while stack:
        v = stack.pop()
        tour.append(v)
        stack.extend(reversed(children[v]))
    return tuple(tour)


# --------------------------------------------------------------------------
# Normalisation and start selection
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class NormalizedTour:
    """Tour data rescaled so that gaps and weights each sum to ``n``.

    ``gaps[i]`` is the scaled length of edge ``order[i] -> order[i+1]``
    (cyclic) and ``weights[i]`` the scaled weight of ``order[i]``.  Top speed is
    ``n`` and minimum speed ``0`` in these units.
    """

    order: tuple
    gaps: np.ndarray
    weights: np.ndarray
    eps: float
    length_scale: float   # original length = scaled length * length_scale
    weight_scale: float

    @property
    def n(self) -> int:
        return len(self.order)


def normalize(instance: WTspInstance, order, eps: float | None = None) -> NormalizedTour:
    n = len(order)
    eps = 1.0 / n if eps is None else eps
    if eps <= 0:
        raise ValueError("eps must be positive")
    arr = np.asarray(order)
    gaps = instance.edge_lengths(arr).astype(float)
    weights = instance.weights[arr].astype(float)
    length, total = gaps.sum(), weights.sum()
    if length <= 0 or total <= 0:
        raise ValueError("normalisation needs positive tour length and total weight")
    return NormalizedTour(tuple(int(v) for v in order), gaps * n / length, weights * n / total,
                          float(eps), float(length / n), float(total / n))


def a_sequence(norm: NormalizedTour) -> np.ndarray:
    """``a_i = gap_i - w_{i+1} + eps (1 - w_{i+1})`` with cyclic indices."""
    nxt = np.roll(norm.weights, -1)
    return norm.gaps - nxt + norm.eps * (1.0 - nxt)


def select_start(a, tol: float = 1e-9) -> int:
    """Smallest 1-based index ``s`` whose cyclic prefix sums are all nonnegative.

    Feasible starts follow the positions where the prefix sums from index 1
    reach their minimum (the empty prefix and the full sum count as 0).
    """
    a = np.asarray(a, dtype=float)
    n = len(a)
    if n == 0:
        raise ValueError("empty sequence")
    scale = max(1.0, float(np.abs(a).sum()))
    if abs(a.sum()) > tol * scale:
        raise ValueError(f"sequence sums to {a.sum()!r}, expected 0")
    prefix = np.cumsum(a)
    low = min(0.0, float(prefix.min()))
    # prefix[k-1] minimal  =>  start at k+1; the full sum (k = n) means s = 1
    hits = np.flatnonzero(prefix <= low + 1e-12 * scale) + 1
    starts = {(k % n) + 1 for k in hits.tolist()}
    return min(starts)


def cyclic_prefix_sums(a, s: int) -> np.ndarray:
    a = np.asarray(a, dtype=float)
    return np.cumsum(np.roll(a, -(s - 1)))


def scaled_duration(norm: NormalizedTour, s: int) -> float:
    """Travel time in normalised units when the tour starts at position ``s`` (1-based).

    The start's weight is picked up last; speed is ``n`` minus the carried load.
    """
    n = norm.n
    gaps = np.roll(norm.gaps, -(s - 1))
    w = np.roll(norm.weights, -(s - 1))
    load = np.concatenate([[0.0], np.cumsum(w[1:])])
    speed = n - load
    out = 0.0
    for g, v in zip(gaps.tolist(), speed.tolist()):
        if g == 0:
            continue
        if v <= 1e-12:
            return math.inf
        out += g / v
    return out


def duration_bound(n: int, eps: float) -> float:
    """``(1 + eps)(ln n + 1 - ln eps)``."""
    return (1 + eps) * (math.log(n) + 1 - math.log(eps))


@dataclass
class LinearResult:
    tour: tuple
    cost: float
    start: int
    scaled_duration: float
    bound: float
    a: np.ndarray
    base_order: tuple


def solve_linear(instance: WTspInstance, eps: float | None = None) -> LinearResult:
    """Double-tree tour rotated to the selected start.

    ``cost`` is the true travel time under ``instance.f``.  The tour starts at
    ``result.start``, which generally differs from ``instance.start``.
    ``scaled_duration`` is the normalised travel time with minimum speed zero,
    which is what ``bound`` limits.
    """
    f = instance.f
    if not isinstance(f, LinearSpeedCost):
        raise ValueError("solve_linear needs a linear_speed cost function")
    n = instance.n
    eps = 1.0 / n if eps is None else eps
    if eps <= 0:
        raise ValueError("eps must be positive")
    base = metric_tsp_approx(instance)
    bound = duration_bound(n, eps)
    length = float(instance.edge_lengths(np.asarray(base)).sum())
    if instance.total_weight <= 0 or length <= 0 or n == 1:
        # nothing slows the agent down: length n at speed n
        duration = 1.0 if length > 0 else 0.0
        return LinearResult(base, tour_cost(instance, base), base[0], duration, bound,
                            np.zeros(n), base)
    norm = normalize(instance, base, eps)
    a = a_sequence(norm)
    s = select_start(a)
    tour = base[s - 1:] + base[:s - 1]
    return LinearResult(tour, tour_cost(instance, tour), tour[0],
                        scaled_duration(norm, s), bound, a, base)
