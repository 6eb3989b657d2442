"""Exact weighted tours on a line.

A collector starts somewhere on a line of pickup points.  Every unit of
carried weight makes travel more expensive, so the order matters.  The interval
DP finds the optimum in quadratic time; here it is checked against full
enumeration and its tour is shown to zigzag (it always collects the leftmost or
rightmost remaining point).
"""

import numpy as np

from wtsp import StepCost, WTspInstance, brute_force_wtsp, solve_fixed_start, solve_free_start
from wtsp.path_dp import zigzag_violations

rng = np.random.default_rng(0)
x = rng.integers(0, 30, size=8)
w = rng.integers(0, 6, size=8)
f = StepCost((5, 12), (1, 2), 4)          # rate 1 up to weight 5, then 2, then 4
inst = WTspInstance.path(x, w, f, start=3)

tour, cost = solve_fixed_start(inst)
print("positions:", x.tolist())
print("weights:  ", w.tolist())
print(f"DP tour from node 3: {tour}  cost {cost}")
print("brute force agrees:", brute_force_wtsp(inst)[1] == cost)
print("zigzag violations:", zigzag_violations(inst, tour))

tour, cost, start = solve_free_start(inst)
print(f"best start is node {start} at x={x[start]}: cost {cost}")
