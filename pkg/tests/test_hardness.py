import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wtsp.core import validate_metric
from wtsp.hardness import check_threshold, partition_cost_function, reduce_partition
from wtsp.oracle import partition_oracle


def test_construction_for_1_1_2():
    red = reduce_partition((1, 1, 2))
    inst = red.instance
    assert (red.lam, red.s_max, red.threshold) == (4, 2, 6)
    assert inst.radius[1:].tolist() == [1, 1, 2, 2]
    assert inst.weights.tolist() == [7, 1, 1, 2, 2]
    assert inst.start == inst.center == 0
    assert inst.f.thresholds == (2, 6)
    assert [inst.f(w) for w in (0, 2, 3, 6, 7)] == [0, 0, 1, 1, math.inf]
    assert validate_metric(inst) == []


def test_smallest_case():
    red = reduce_partition((1,))
    assert (red.lam, red.s_max) == (1, 1)
    assert red.instance.n == 3
    assert red.instance.f.thresholds == (0.5, 2)


def test_cost_function_half_threshold():
    assert partition_cost_function(4, 2).thresholds == (2, 6)
    assert partition_cost_function(5, 3).thresholds == (2.5, 8)


def test_rejects_bad_values():
    for bad in ((), (0, 1), (-2,)):
        with pytest.raises(ValueError):
            reduce_partition(bad)


@pytest.mark.parametrize("values, flag, optimum, threshold", [
    ((1, 1, 2), True, 6, 6),
    ((1, 2), False, 6, 5),
    ((2, 2), True, 6, 6),
    ((3, 3), True, 9, 9),
    ((1,), False, 3, 2),
])
def test_threshold_examples(values, flag, optimum, threshold):
    res = check_threshold(values)
    assert res.partitionable == flag
    assert res.optimum == optimum
    assert res.threshold == threshold
    assert (res.optimum <= res.threshold) == flag


def test_unpartitionable_cost_exceeds_threshold():
    assert check_threshold((1, 2)).optimum > 5


def test_size_guard():
    with pytest.raises(ValueError):
        check_threshold([1] * 11)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(1, 9), min_size=1, max_size=5))
def test_iff_property(values):
    res = check_threshold(values)
    assert res.partitionable == partition_oracle(values)
