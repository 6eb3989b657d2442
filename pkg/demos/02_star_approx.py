"""Doubling knapsack schedule on a star.

Leaves hang off a central depot.  For budgets 2, 4, 8, ... the heaviest set of
round trips fitting the budget is computed; the tour runs the sets from the
largest budget down, so heavy leaves that are cheap to reach come last.
"""

import numpy as np

from wtsp import StepCost, brute_force_wtsp, solve_star
from wtsp.star import StarInstance, build_tour, knapsack_sets, round_trip_profile, scale_instance

f = StepCost.from_integer_values(range(1, 30), final_rate=30)   # f(w) = 1 + w
star = StarInstance(distances=(1, 4, 2, 7, 3), weights=(6, 1, 5, 2, 1), f=f)
scaled, factor = scale_instance(star)
for i, s in enumerate(knapsack_sets(scaled), start=1):
    print(f"budget {2 ** i:3d}: leaves {sorted(s)}")
order = build_tour(star)
print("visiting order:", order)

inst = star.to_instance()
tour, cost = solve_star(inst)
opt_tour, opt = brute_force_wtsp(inst)
print(f"cost {cost}, optimum {opt}, ratio {cost / opt:.3f}")

mine = round_trip_profile(star, order)
best = round_trip_profile(star, [v - 1 for v in opt_tour[1:]])
for w in sorted(set(mine.breakpoints) | set(best.breakpoints)):
    print(f"  D({w:2d}): ours {mine(w):3d}  optimal {best(w):3d}")

rng = np.random.default_rng(1)
ratios = []
for _ in range(50):
    s = StarInstance(tuple(rng.integers(1, 10, 6)), tuple(rng.integers(0, 10, 6)), f)
    i = s.to_instance()
    ratios.append(solve_star(i)[1] / brute_force_wtsp(i)[1])
print(f"50 random stars: worst ratio {max(ratios):.3f}")
