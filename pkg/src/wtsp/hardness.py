"""Partition -> star-metric weighted TSP reduction (instance generator)."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .core import INF, StepCost, WTspInstance
from .oracle import brute_force_wtsp, partition_oracle

MAX_CHECK_SIZE = 10


@dataclass(frozen=True)
class ReducedInstance:
    instance: WTspInstance
    values: tuple
    lam: int        # sum of the values
    s_max: int

    @property
    def threshold(self) -> int:
        """Optimal cost is at most this iff the values can be partitioned."""
        return self.s_max + self.lam


def partition_cost_function(lam: int, s_max: int) -> StepCost:
    """0 up to ``lam/2``, 1 up to ``lam + s_max``, infinite beyond."""
    half = lam // 2 if lam % 2 == 0 else lam / 2
    return StepCost((half, lam + s_max), (0, 1), INF)


def reduce_partition(values: Sequence[int]) -> ReducedInstance:
    """Star instance whose optimum is ``<= s_max + lam`` iff ``values`` is partitionable.

    Node 0 is the center (weight ``lam + s_max + 1``, and the start).  Node ``i``
    for ``i = 1..n`` has distance and weight ``values[i-1]``.  Node ``n + 1``
    has distance and weight ``s_max``.
    """
    values = tuple(int(v) for v in values)
    if not values:
        raise ValueError("need at least one value")
    if any(v <= 0 for v in values):
        raise ValueError("values must be positive integers")
    lam, s_max = sum(values), max(values)
    radius = (0,) + values + (s_max,)
    weights = (lam + s_max + 1,) + values + (s_max,)
    inst = WTspInstance.star(0, radius, weights, partition_cost_function(lam, s_max),
                             start=0, name="partition-" + "-".join(map(str, values)))
    return ReducedInstance(inst, values, lam, s_max)


@dataclass(frozen=True)
class ThresholdCheck:
    partitionable: bool
    optimum: float
    threshold: int
    tour: tuple


def check_threshold(values: Sequence[int]) -> ThresholdCheck:
    """Brute-force the reduced instance and confirm the iff claim.

    Only tours starting at the center are enumerated (all others cost
    infinity).  Raises ``AssertionError`` if the claim fails.
    """
    if len(values) > MAX_CHECK_SIZE:
        raise ValueError(f"check_threshold handles at most {MAX_CHECK_SIZE} values")
    red = reduce_partition(values)
    tour, cost = brute_force_wtsp(red.instance)
    flag = partition_oracle(red.values)
    if (cost <= red.threshold) != flag:
        raise AssertionError(
            f"reduction failed for {red.values}: optimum {cost}, threshold "
            f"{red.threshold}, partitionable={flag}")
    return ThresholdCheck(flag, cost, red.threshold, tour)
