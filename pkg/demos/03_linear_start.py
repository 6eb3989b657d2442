"""Choosing where to start a fixed round trip under linear slowdown.

Speed falls linearly with the load.  Take a double-tree tour that ignores
weights, normalise it, compute the slack sequence a_i and start right after
the lowest prefix sum.  Every cyclic prefix sum is then nonnegative and the
travel time stays within (1 + eps)(ln n + 1 - ln eps).
"""

import numpy as np

from wtsp import LinearSpeedCost, WTspInstance, brute_force_wtsp, solve_linear
from wtsp.linear import cyclic_prefix_sums, duration_bound

rng = np.random.default_rng(3)
pts = rng.uniform(0, 100, size=(9, 2))
d = np.sqrt(((pts[:, None] - pts[None]) ** 2).sum(-1))
w = rng.integers(0, 10, size=9)
inst = WTspInstance.general(d, w, LinearSpeedCost(1.0, 0.0, int(w.sum())))

res = solve_linear(inst)
s = res.base_order.index(res.start) + 1
print("double-tree order:", res.base_order)
print("a:", np.round(res.a, 3).tolist())
print("chosen start position:", s, "-> node", res.start)
print("cyclic prefix sums:", np.round(cyclic_prefix_sums(res.a, s), 3).tolist())
print(f"scaled duration {res.scaled_duration:.3f} <= bound {duration_bound(9, 1 / 9):.3f}")
opt = brute_force_wtsp(inst, free_start=True)[1]
print(f"travel time {res.cost:.2f}, optimum {opt:.2f}, ratio {res.cost / opt:.3f}")
