import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wtsp.core import ConstantCost, StepCost, WTspInstance, tour_cost
from wtsp.oracle import (
    InstanceTooLarge, KnapsackItem, brute_force_wtsp, held_karp_wtsp, knapsack_enumerate,
    knapsack_exact, knapsack_fptas, partition_enumerate, partition_oracle, subset_size,
    subset_value,
)

from generators import random_path, random_star

PLUS_ONE = StepCost.from_integer_values(range(1, 12), final_rate=12)


def all_subsets_best(items, budget):
    best = 0
    for r in range(len(items) + 1):
        for combo in itertools.combinations(items, r):
            if sum(it.size for it in combo) <= budget:
                best = max(best, sum(it.value for it in combo))
    return best


def test_brute_force_small_path():
    inst = WTspInstance.path([0, 1, 3], [0, 2, 1], PLUS_ONE)
    tour, cost = brute_force_wtsp(inst)
    # only two orders leave v1; they cost 19 and 11
    costs = {t: tour_cost(inst, t) for t in [(0, 1, 2), (0, 2, 1)]}
    assert cost == min(costs.values()) == 11
    assert costs[tour] == cost


def test_brute_force_two_nodes():
    inst = WTspInstance.path([0, 4], [0, 3], PLUS_ONE)
    assert brute_force_wtsp(inst) == ((0, 1), 1 * 4 + 4 * 4)


def test_brute_force_constant_cost_is_tsp():
    rng = np.random.default_rng(0)
    pts = rng.uniform(0, 10, size=(6, 2))
    d = np.sqrt(((pts[:, None] - pts[None]) ** 2).sum(-1))
    inst = WTspInstance.general(d, [1] * 6, ConstantCost(1))
    _, cost = brute_force_wtsp(inst)
    best = min(sum(d[a, b] for a, b in zip((0,) + p, p + (0,)))
               for p in itertools.permutations(range(1, 6)))
    assert cost == pytest.approx(best)


def test_brute_force_guard():
    inst = WTspInstance.path(list(range(13)), [0] * 13, PLUS_ONE)
    with pytest.raises(InstanceTooLarge):
        brute_force_wtsp(inst)


def test_held_karp_agrees_with_enumeration():
    rng = np.random.default_rng(3)
    for _ in range(40):
        inst = random_path(rng, int(rng.integers(2, 8))) if rng.random() < 0.5 \
            else random_star(rng, int(rng.integers(1, 6)))
        assert held_karp_wtsp(inst) == brute_force_wtsp(inst)[1]


def test_free_start_is_min_over_starts():
    rng = np.random.default_rng(4)
    inst = random_path(rng, 6)
    tour, cost = brute_force_wtsp(inst, free_start=True)
    assert cost == min(brute_force_wtsp(inst.with_start(t))[1] for t in range(6))
    assert tour_cost(inst, tour) == cost


def test_knapsack_small_example():
    items = [KnapsackItem(0, 2, 3), KnapsackItem(1, 3, 4), KnapsackItem(2, 4, 5)]
    best = all_subsets_best(items, 6)
    chosen = knapsack_exact(items, 6)
    assert best == 8
    assert subset_value(items, chosen) == 8
    assert chosen == (0, 2)
    assert knapsack_enumerate(items, 6) == (0, 2)


def test_knapsack_trivial_cases():
    items = [KnapsackItem(i, s, v) for i, (s, v) in enumerate([(1, 1), (2, 5), (3, 2)])]
    assert knapsack_exact(items, 100) == (0, 1, 2)
    assert knapsack_exact([], 5) == ()
    assert knapsack_fptas([KnapsackItem(7, 2, 3)], 2, 0.5) == (7,)
    zero = items + [KnapsackItem(3, 0, 4)]
    assert knapsack_fptas(zero, 0, 0.25) == (3,)
    assert knapsack_exact(zero, 0) == (3,)


def test_knapsack_real_sizes():
    rng = np.random.default_rng(6)
    for _ in range(30):
        items = [KnapsackItem(i, float(s), int(v)) for i, (s, v) in
                 enumerate(zip(rng.uniform(0.1, 5, 10), rng.integers(0, 20, 10)))]
        budget = float(rng.uniform(1, 15))
        chosen = knapsack_exact(items, budget)
        assert subset_size(items, chosen) <= budget
        assert subset_value(items, chosen) == all_subsets_best(items, budget)


def test_knapsack_granularity_rounds_up():
    items = [KnapsackItem(0, 1.2, 5), KnapsackItem(1, 1.2, 5)]
    # rounded to whole units each item needs 2, so only one fits in 3
    assert len(knapsack_exact(items, 3, granularity=1)) == 1
    assert len(knapsack_exact(items, 3)) == 2


def test_fptas_against_exact():
    rng = np.random.default_rng(7)
    for eps in (0.1, 0.25, 0.5):
        for _ in range(20):
            items = [KnapsackItem(i, int(s), int(v)) for i, (s, v) in
                     enumerate(zip(rng.integers(1, 30, 15), rng.integers(0, 100, 15)))]
            budget = int(rng.integers(10, 150))
            exact = subset_value(items, knapsack_exact(items, budget))
            chosen = knapsack_fptas(items, budget, eps)
            assert subset_size(items, chosen) <= budget
            assert subset_value(items, chosen) >= (1 - eps) * exact - 1e-9


def test_fptas_rejects_bad_eps():
    with pytest.raises(ValueError):
        knapsack_fptas([KnapsackItem(0, 1, 1)], 1, 0)


def test_partition_examples():
    assert partition_oracle((1, 1, 2))
    assert not partition_oracle((1, 2))
    assert not partition_oracle((2, 3, 7))
    with pytest.raises(ValueError):
        partition_oracle((0, 1))


@settings(max_examples=200, deadline=None)
@given(st.lists(st.integers(1, 30), min_size=1, max_size=14))
def test_partition_matches_enumeration(values):
    assert partition_oracle(values) == partition_enumerate(values)


@settings(max_examples=80, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 9), st.integers(0, 9)), max_size=9),
       st.integers(0, 25))
def test_knapsack_dp_matches_enumeration(pairs, budget):
    items = [KnapsackItem(i, s, v) for i, (s, v) in enumerate(pairs)]
    chosen = knapsack_exact(items, budget)
    assert subset_size(items, chosen) <= budget
    assert subset_value(items, chosen) == all_subsets_best(items, budget)
    assert subset_value(items, knapsack_enumerate(items, budget)) == subset_value(items, chosen)
