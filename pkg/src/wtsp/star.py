"""Constant-factor approximation for the weighted TSP on star metrics.

Every tour from the center is a sequence of round trips, one per leaf.  The
algorithm computes, for doubling distance budgets ``2, 4, 8, ...``, a
maximum-weight set of leaves whose round trips fit the budget (a knapsack
problem).  It then visits the leaves from the largest budget down.  Leaves
that fit a small budget are therefore collected last, when the load is
largest.
"""

from __future__ import annotations

import math
from bisect import bisect_left
from dataclasses import dataclass

import numpy as np

from .core import CostFunction, WTspInstance
from .oracle import KnapsackItem, knapsack_exact, knapsack_fptas


@dataclass(frozen=True)
class StarInstance:
    """Center-start star: leaf ``k`` sits at distance ``distances[k]``."""

    distances: tuple
    weights: tuple
    f: CostFunction
    center_weight: float = 0

    def __post_init__(self):
        object.__setattr__(self, "distances", tuple(self.distances))
        object.__setattr__(self, "weights", tuple(self.weights))
        if len(self.distances) != len(self.weights):
            raise ValueError("distances and weights differ in length")
        if any(d < 0 for d in self.distances) or any(w < 0 for w in self.weights):
            raise ValueError("distances and weights must be nonnegative")

    @property
    def m(self) -> int:
        return len(self.distances)

    @classmethod
    def from_instance(cls, instance: WTspInstance) -> tuple["StarInstance", list]:
        """Star view of a center-start instance; also returns the node id of each leaf."""
        if instance.metric != "star":
            raise ValueError("instance is not a star metric")
        if instance.start != instance.center:
            raise ValueError("use solve_star for tours that start at a leaf")
        leaves = [v for v in range(instance.n) if v != instance.center]
        star = cls(tuple(instance.radius[leaves].tolist()),
                   tuple(instance.weights[leaves].tolist()),
                   instance.f, instance.weights[instance.center].item())
        return star, leaves

    def to_instance(self) -> WTspInstance:
        """Node 0 is the center, leaf ``k`` becomes node ``k + 1``."""
        return WTspInstance.star(0, (0,) + self.distances,
                                 (self.center_weight,) + self.weights, self.f)


def scale_instance(star: StarInstance) -> tuple[StarInstance, float]:
    """Divide all distances by the smallest one; returns ``(scaled, factor)``."""
    if star.m == 0:
        return star, 1
    factor = min(star.distances)
    if factor <= 0:
        raise ValueError("scaling needs strictly positive leaf distances")
    scaled = StarInstance(tuple(d / factor for d in star.distances), star.weights,
                          star.f, star.center_weight)
    return scaled, factor


def knapsack_sets(star: StarInstance, mode: str = "exact", eps: float = 0.25) -> list:
    """The leaf sets for budgets ``2^1 .. 2^K`` with ``K = ceil(log2 D(J))``.

    ``D(J)`` is the total round-trip length.  Item ``k`` has size
    ``2 * distance`` and value ``weight``; the last set is all leaves.  Expects
    a scaled instance (all distances at least 1).
    """
    if star.m == 0:
        return []
    items = [KnapsackItem(k, 2 * d, w) for k, (d, w) in enumerate(zip(star.distances, star.weights))]
    total = sum(it.size for it in items)
    levels = max(1, math.ceil(math.log2(total) - 1e-12))
    sets = []
    for i in range(1, levels):
        budget = 2.0 ** i
        if mode == "exact":
            chosen = knapsack_exact(items, budget)
        elif mode == "fptas":
            chosen = knapsack_fptas(items, budget, eps)
        else:
            raise ValueError(f"unknown knapsack mode {mode!r}")
        sets.append(frozenset(chosen))
    sets.append(frozenset(range(star.m)))
    return sets


def build_tour(star: StarInstance, eps: float = 0.25, mode: str = "exact") -> tuple:
    """Leaf visiting order (leaf indices) for a center-start star.

    Leaves at distance zero are appended at the end: their round trips cost
    nothing and they then add no load to any other trip.
    """
    zero = [k for k, d in enumerate(star.distances) if d == 0]
    keep = [k for k, d in enumerate(star.distances) if d > 0]
    if not keep:
        return tuple(zero)
    sub = StarInstance(tuple(star.distances[k] for k in keep),
                       tuple(star.weights[k] for k in keep), star.f, star.center_weight)
    scaled, _ = scale_instance(sub)
    sets = knapsack_sets(scaled, mode, eps)
    order = []
    for i in range(len(sets) - 1, -1, -1):
        earlier = frozenset().union(*sets[:i])
        order.extend(sorted(sets[i] - earlier))
    return tuple(keep[k] for k in order) + tuple(zero)


def star_tour_cost(star: StarInstance, order) -> float:
    """Cost of visiting the leaves in ``order`` from the center (center weight last)."""
    if sorted(order) != list(range(star.m)):
        raise ValueError("order is not a permutation of the leaves")
    f = star.f
    load = 0
    cost = 0
    for k in order:
        d = star.distances[k]
        w = star.weights[k]
        if d:
            cost += f(load) * d + f(load + w) * d
        load += w
    return cost


def expand_order(leaves: list, order, center: int) -> tuple:
    """Node tour ``(center, leaf nodes...)`` for a leaf order."""
    return (center,) + tuple(leaves[k] for k in order)


@dataclass(frozen=True)
class RoundTripProfile:
    """Step function ``w -> D(w)``: total length of round trips whose return
    leg carries at least ``w``.

    ``D(w) = lengths[k]`` for ``thresholds[k-1] < w <= thresholds[k]`` and zero
    beyond the last threshold.
    """

    thresholds: tuple
    lengths: tuple

    def __call__(self, w) -> float:
        k = bisect_left(self.thresholds, w)
        return self.lengths[k] if k < len(self.lengths) else 0

    @property
    def breakpoints(self) -> tuple:
        return self.thresholds


def round_trip_profile(star: StarInstance, order) -> RoundTripProfile:
    loads = np.cumsum([star.weights[k] for k in order]).tolist()
    trips = [2 * star.distances[k] for k in order]
    suffix = np.cumsum(trips[::-1])[::-1].tolist()
    thresholds, lengths = [], []
    for k, load in enumerate(loads):
        # the first leaf of each group of equal loads carries the group's value
        if k == 0 or loads[k - 1] != load:
            thresholds.append(load)
            lengths.append(suffix[k])
    return RoundTripProfile(tuple(thresholds), tuple(lengths))


def solve_star(instance: WTspInstance, eps: float = 0.25, mode: str = "exact"):
    """Approximate tour for a star instance with any start node.

    Starting at a leaf ``v`` is a center-start problem on the other leaves plus
    the center itself as a leaf at distance zero.  The legs ``v -> center`` and
    ``center -> v`` at the beginning and end cost the same for every order.
    Returns ``(tour, cost)``.
    """
    from .core import tour_cost

    if instance.metric != "star":
        raise ValueError("instance is not a star metric")
    c, t = instance.center, instance.start
    if t == c:
        star, leaves = StarInstance.from_instance(instance)
        tour = expand_order(leaves, build_tour(star, eps, mode), c)
        return tour, tour_cost(instance, tour)
    others = [v for v in range(instance.n) if v != t]
    dists = tuple(instance.radius[others].tolist())
    star = StarInstance(dists, tuple(instance.weights[others].tolist()), instance.f, 0)
    order = build_tour(star, eps, mode)
    tour = (t,) + tuple(others[k] for k in order)
    return tour, tour_cost(instance, tour)
