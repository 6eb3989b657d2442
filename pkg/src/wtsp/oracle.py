"""Exact reference solvers used to validate the approximate and DP solvers."""

from __future__ import annotations

import itertools
import math
from typing import NamedTuple, Sequence

import numpy as np

from .core import WTspInstance, batch_tour_costs

MAX_BRUTE_FORCE_NODES = 12


class InstanceTooLarge(ValueError):
    pass


# --------------------------------------------------------------------------
# Weighted TSP by enumeration
# --------------------------------------------------------------------------

def _best_from_start(instance: WTspInstance, start: int):
    n = instance.n
    if n == 1:
        return (start,), 0.0
    others = [v for v in range(n) if v != start]
    best_cost, best_tour = math.inf, None
    # one block per first move; permutations() yields lexicographic order
    for first in others:
        rest = [v for v in others if v != first]
        tails = np.fromiter(itertools.chain.from_iterable(itertools.permutations(rest)),
                            dtype=np.int64, count=math.factorial(len(rest)) * len(rest))
        tails = tails.reshape(math.factorial(len(rest)), len(rest))
        tours = np.empty((len(tails), n), dtype=np.int64)
        tours[:, 0] = start
        tours[:, 1] = first
        tours[:, 2:] = tails
        costs = batch_tour_costs(instance, tours)
        k = int(np.argmin(costs))
        if best_tour is None or costs[k] < best_cost:
            best_cost, best_tour = float(costs[k]), tuple(int(v) for v in tours[k])
    return best_tour, best_cost


def brute_force_wtsp(instance: WTspInstance, free_start: bool = False):
    """Minimum-cost tour by full enumeration.

    Returns ``(tour, cost)``.  With ``free_start`` every node is tried as the
    start.  Ties go to the lexicographically smallest tour.
    """
    if instance.n > MAX_BRUTE_FORCE_NODES:
        raise InstanceTooLarge(
            f"brute force is limited to {MAX_BRUTE_FORCE_NODES} nodes, got {instance.n}")
    starts = range(instance.n) if free_start else [instance.start]
    best = None
    for t in starts:
        tour, cost = _best_from_start(instance, t)
        if best is None or (cost, tour) < (best[1], best[0]):
            best = (tour, cost)
    return best


def held_karp_wtsp(instance: WTspInstance):
    """Exact fixed-start optimum by DP over visited subsets, ``O(2^n n^2)``.

    The carried weight depends only on the set of visited nodes, so the
    classical subset recursion applies.  Used to cross-check the enumeration.
    """
    n = instance.n
    if n > 16:
        raise InstanceTooLarge("held_karp_wtsp is limited to 16 nodes")
    if n == 1:
        return 0.0
    t = instance.start
    others = [v for v in range(n) if v != t]
    m = len(others)
    w = [instance.weights[v].item() for v in others]
    set_weight = [0] * (1 << m)
    for mask in range(1, 1 << m):
        low = (mask & -mask).bit_length() - 1
        set_weight[mask] = set_weight[mask & (mask - 1)] + w[low]
    d = instance.distance

    def leg(rate, length):
        return 0 if length == 0 else rate * length

    f = instance.f
    dp = [[math.inf] * m for _ in range(1 << m)]
    for a in range(m):
        dp[1 << a][a] = leg(f(0), d[t, others[a]].item())
    for mask in range(1, 1 << m):
        rate = f(set_weight[mask])
        row = dp[mask]
        for a in range(m):
            cur = row[a]
            if cur == math.inf or not mask >> a & 1:
                continue
            for b in range(m):
                if mask >> b & 1:
                    continue
                val = cur + leg(rate, d[others[a], others[b]].item())
                nxt = mask | 1 << b
                if val < dp[nxt][b]:
                    dp[nxt][b] = val
    full = (1 << m) - 1
    rate = f(set_weight[full])
    return min(dp[full][a] + leg(rate, d[others[a], t].item()) for a in range(m))


# --------------------------------------------------------------------------
# Knapsack
# --------------------------------------------------------------------------

class KnapsackItem(NamedTuple):
    id: int
    size: float
    value: float


def _check_items(items, budget):
    if budget < 0:
        raise ValueError("budget must be nonnegative")
    for it in items:
        if it.size < 0 or it.value < 0:
            raise ValueError(f"item {it.id} has a negative size or value")


def subset_value(items: Sequence[KnapsackItem], ids) -> float:
    ids = set(ids)
    return sum(it.value for it in items if it.id in ids)


def subset_size(items: Sequence[KnapsackItem], ids) -> float:
    ids = set(ids)
    return sum(it.size for it in items if it.id in ids)


def _fits(size, budget):
    return size <= budget + 1e-12 * max(1.0, abs(budget))


def knapsack_enumerate(items: Sequence[KnapsackItem], budget: float) -> tuple:
    """Best subset by depth-first enumeration in lexicographic id order.

    A fractional-relaxation bound prunes branches that cannot beat the
    incumbent strictly, so the first optimum found is the lexicographically
    smallest one.
    """
    _check_items(items, budget)
    items = sorted(items, key=lambda it: it.id)
    m = len(items)
    # fractional bound over the suffix items[k:], by value density
    order_by_density = sorted(range(m), key=lambda k: -(math.inf if items[k].size == 0
                                                        else items[k].value / items[k].size))

    def bound(k, cap):
        total = 0.0
        for idx in order_by_density:
            if idx < k:
                continue
            it = items[idx]
            if it.size <= cap:
                total += it.value
                cap -= it.size
            else:
                total += it.value * cap / it.size
                break
        return total

    best_val = -1.0
    best_set: tuple = ()
    chosen: list = []

    def visit(k, val, cap):
        nonlocal best_val, best_set
        if val > best_val:
            best_val, best_set = val, tuple(chosen)
        for idx in range(k, m):
            it = items[idx]
            if not _fits(it.size, cap):
                continue
            if val + it.value + bound(idx + 1, cap - it.size) <= best_val:
                continue
            chosen.append(it.id)
            visit(idx + 1, val + it.value, cap - it.size)
            chosen.pop()

    visit(0, 0.0, budget)
    return best_set


def _knapsack_integer_dp(items, budget: int) -> tuple:
    m = len(items)
    sizes = [int(it.size) for it in items]
    values = [it.value for it in items]
    # suffix[k][c] = best value from items[k:] within capacity c
    suffix = [None] * (m + 1)
    suffix[m] = np.zeros(budget + 1)
    for k in range(m - 1, -1, -1):
        prev = suffix[k + 1]
        cur = prev.copy()
        s = sizes[k]
        if s <= budget:
            cand = prev[: budget + 1 - s] + values[k]
            cur[s:] = np.maximum(cur[s:], cand)
        suffix[k] = cur
    opt = suffix[0][budget]
    # lexicographically smallest optimal id set: stop as soon as the prefix is
    # optimal, otherwise take the smallest next item that keeps optimality
    chosen, val, cap, k = [], 0.0, budget, 0
    while not math.isclose(val, opt, rel_tol=0, abs_tol=1e-9 * max(1.0, opt)):
        for idx in range(k, m):
            s = sizes[idx]
            if s > cap:
                continue
            if val + values[idx] + suffix[idx + 1][cap - s] >= opt - 1e-9 * max(1.0, opt):
                chosen.append(items[idx].id)
                val += values[idx]
                cap -= s
                k = idx + 1
                break
        else:  # pragma: no cover - guarded by construction of suffix
            raise RuntimeError("knapsack reconstruction failed")
    return tuple(chosen)


def knapsack_exact(items: Sequence[KnapsackItem], budget: float,
                   granularity: float | None = None) -> tuple:
    """Maximum-value subset with total size at most ``budget``.

    Integer sizes use the pseudo-polynomial DP over capacities.  With
    ``granularity`` the sizes are rounded up to multiples of it first (exact
    for the rounded instance).  Otherwise up to 25 real-sized items are
    enumerated.  Ties resolve to the lexicographically smallest id set.
    Returns the sorted tuple of chosen ids.
    """
    _check_items(items, budget)
    items = sorted(items, key=lambda it: it.id)
    if not items:
        return ()
    if granularity is not None:
        if granularity <= 0:
            raise ValueError("granularity must be positive")
        scaled = [KnapsackItem(it.id, math.ceil(it.size / granularity - 1e-12), it.value)
                  for it in items]
        return _knapsack_integer_dp(scaled, int(math.floor(budget / granularity + 1e-12)))
    integral = all(float(it.size).is_integer() for it in items)
    cap = int(math.floor(budget + 1e-12)) if integral else None
    if integral and cap <= 10**6:
        return _knapsack_integer_dp(items, cap)
    if len(items) <= 25:
        return knapsack_enumerate(items, budget)
    raise InstanceTooLarge("real-sized knapsack with more than 25 items: "
                           "pass a granularity or use knapsack_fptas")


def knapsack_fptas(items: Sequence[KnapsackItem], budget: float, eps: float) -> tuple:
    """Subset of value at least ``(1 - eps)`` times the optimum (value scaling).

    Values are scaled down by ``K = eps * vmax / m`` and rounded; a DP over
    scaled profit finds the smallest size for every profit level.
    """
    if not 0 < eps < 1:
        raise ValueError("eps must lie in (0, 1)")
    _check_items(items, budget)
    items = sorted((it for it in items if _fits(it.size, budget)), key=lambda it: it.id)
    if not items:
        return ()
    vmax = max(it.value for it in items)
    if vmax == 0:
        return ()
    m = len(items)
    scale = eps * vmax / m
    profits = [int(math.floor(it.value / scale)) for it in items]
    total = sum(profits)
    # min_size[p] = smallest size reaching scaled profit exactly p
    min_size = np.full(total + 1, np.inf)
    min_size[0] = 0.0
    take = np.zeros((m, total + 1), dtype=bool)
    reach = 0
    for k, (it, p) in enumerate(zip(items, profits)):
        if p == 0:
            continue
        cand = min_size[: reach + 1] + it.size
        better = cand < min_size[p: reach + p + 1]
        min_size[p: reach + p + 1] = np.where(better, cand, min_size[p: reach + p + 1])
        take[k, p: reach + p + 1] = better
        reach += p
    feasible = np.flatnonzero(min_size <= budget + 1e-12 * max(1.0, abs(budget)))
    p = int(feasible.max())
    chosen = []
    for k in range(m - 1, -1, -1):
        if p > 0 and take[k, p]:
            chosen.append(items[k].id)
            p -= profits[k]
    return tuple(sorted(chosen))


# --------------------------------------------------------------------------
# Partition
# --------------------------------------------------------------------------

def partition_oracle(values: Sequence[int]) -> bool:
    """True iff ``values`` splits into two halves of equal sum (subset-sum DP)."""
    values = [int(v) for v in values]
    if any(v <= 0 for v in values):
        raise ValueError("partition entries must be positive integers")
    total = sum(values)
    if total % 2:
        return False
    reachable = 1  # bit s set <=> some subset sums to s
    for v in values:
        reachable |= reachable << v
    return bool(reachable >> (total // 2) & 1)


def partition_enumerate(values: Sequence[int]) -> bool:
    total = sum(values)
    if total % 2:
        return False
    return any(sum(c) * 2 == total
               for r in range(len(values) + 1)
               for c in itertools.combinations(values, r))
