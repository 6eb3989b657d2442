import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wtsp.core import ConstantCost, LinearSpeedCost, WTspInstance, tour_cost, tour_length
from wtsp.linear import (
    a_sequence, cyclic_prefix_sums, duration_bound, metric_tsp_approx, minimum_spanning_tree,
    normalize, scaled_duration, select_start, solve_linear,
)
from wtsp.oracle import brute_force_wtsp

from generators import random_euclidean


def brute_tsp_length(d):
    n = len(d)
    return min(sum(d[a, b] for a, b in zip((0,) + p, p + (0,)))
               for p in itertools.permutations(range(1, n)))


def test_select_start_examples():
    assert select_start([1, -2, 1, 0]) == 3
    assert cyclic_prefix_sums([1, -2, 1, 0], 3).tolist() == [1, 1, 2, 0]
    assert select_start([0, 0, 0]) == 1
    assert select_start([-1, 1]) == 2


def test_select_start_requires_zero_sum():
    with pytest.raises(ValueError):
        select_start([1, 1])


@settings(max_examples=200, deadline=None)
@given(st.lists(st.integers(-20, 20), min_size=1, max_size=12))
def test_select_start_is_smallest_feasible(vals):
    a = np.array(vals + [-sum(vals)], dtype=float)
    s = select_start(a)
    feasible = [t for t in range(1, len(a) + 1) if cyclic_prefix_sums(a, t).min() >= -1e-9]
    assert s == feasible[0]


def test_mst_on_a_line_is_the_path():
    x = np.array([0.0, 4.0, 1.0, 3.0])
    d = np.abs(x[:, None] - x[None])
    parent = minimum_spanning_tree(d, 0)
    edges = {tuple(sorted((v, int(p)))) for v, p in enumerate(parent) if p >= 0}
    assert edges == {(0, 2), (2, 3), (1, 3)}
    inst = WTspInstance.general(d, [0] * 4, ConstantCost(1))
    assert tour_length(inst, metric_tsp_approx(inst)) <= 2 * 2 * 4


def test_double_tree_within_twice_optimal():
    rng = np.random.default_rng(0)
    for _ in range(30):
        inst = random_euclidean(rng, int(rng.integers(3, 9)))
        tour = metric_tsp_approx(inst)
        assert sorted(tour) == list(range(inst.n)) and tour[0] == inst.start
        assert tour_length(inst, tour) <= 2 * brute_tsp_length(inst.distance) + 1e-9


def test_double_tree_rejects_non_metric():
    d = np.array([[0, 1, 5], [1, 0, 1], [5, 1, 0]])
    with pytest.raises(ValueError):
        metric_tsp_approx(WTspInstance.general(d, [0, 1, 1], ConstantCost(1)))


def test_uniform_sequence_is_zero():
    d = 1 - np.eye(4)
    inst = WTspInstance.general(d, [1] * 4, LinearSpeedCost(1, 0, 4))
    for eps in (0.1, 0.5, 1.0):
        norm = normalize(inst, (0, 1, 2, 3), eps)
        assert np.allclose(a_sequence(norm), 0)


def test_a_sequence_by_hand():
    # gaps along the tour (2, 0, 1, 1), weights of the next nodes (1, 2, 0, 1)
    x = np.array([0, 2, 2, 3])
    d = np.abs(x[:, None] - x[None]).astype(float)
    d[3, 0] = d[0, 3] = 1.0
    inst = WTspInstance.general(d, [1, 1, 2, 0], LinearSpeedCost(1, 0, 4))
    norm = normalize(inst, (0, 1, 2, 3), eps=1e-300)
    assert norm.gaps.tolist() == [2, 0, 1, 1]
    a = a_sequence(norm)
    expected = [2 - 1, 0 - 2, 1 - 0, 1 - 1]
    assert np.allclose(a, expected)
    norm = normalize(inst, (0, 1, 2, 3), eps=0.5)
    nxt = [1, 2, 0, 1]
    assert np.allclose(a_sequence(norm),
                       [g - w + 0.5 * (1 - w) for g, w in zip([2, 0, 1, 1], nxt)])


def test_a_sums_to_zero():
    rng = np.random.default_rng(1)
    for _ in range(30):
        inst = random_euclidean(rng, int(rng.integers(2, 10)))
        if inst.total_weight == 0:
            continue
        norm = normalize(inst, metric_tsp_approx(inst), float(rng.uniform(0.01, 1)))
        assert abs(a_sequence(norm).sum()) < 1e-9
        assert norm.gaps.sum() == pytest.approx(norm.n)
        assert norm.weights.sum() == pytest.approx(norm.n)


def test_uniform_duration():
    n = 5
    d = np.full((n, n), 1.0) - np.eye(n)
    inst = WTspInstance.general(d, [1] * n, LinearSpeedCost(1, 0, n))
    res = solve_linear(inst)
    # speeds n, n-1, ..., 1 over unit gaps
    expected = sum(1 / k for k in range(1, n + 1))
    assert res.scaled_duration == pytest.approx(expected)
    assert res.scaled_duration <= duration_bound(n, 1 / n)


def test_no_slowdown():
    rng = np.random.default_rng(2)
    inst = random_euclidean(rng, 7, nu_min=2.0, nu_max=2.0)
    res = solve_linear(inst)
    assert res.cost == pytest.approx(tour_length(inst, res.tour) / 2)


def test_bound_and_ratio_on_random_instances():
    rng = np.random.default_rng(3)
    for _ in range(40):
        n = int(rng.integers(4, 9))
        inst = random_euclidean(rng, n)
        res = solve_linear(inst)
        eps = 1 / n
        assert cyclic_prefix_sums(res.a, res.base_order.index(res.start) + 1).min() >= -1e-9
        assert res.scaled_duration <= duration_bound(n, eps) + 1e-9
        # the real travel time is the normalised one in original units
        length = tour_length(inst, res.base_order)
        assert res.cost == pytest.approx(res.scaled_duration * length / inst.f.nu_max)
        opt = brute_force_wtsp(inst, free_start=True)[1]
        assert res.cost <= 2 * duration_bound(n, eps) * opt


def test_requires_linear_cost():
    inst = WTspInstance.general(1 - np.eye(3), [1, 1, 1], ConstantCost(1))
    with pytest.raises(ValueError):
        solve_linear(inst)


def test_zero_weight_instance():
    d = 1 - np.eye(3)
    inst = WTspInstance.general(d, [0, 0, 0], LinearSpeedCost(1, 0, 1))
    res = solve_linear(inst)
    assert res.cost == 3 and res.scaled_duration == 1.0
