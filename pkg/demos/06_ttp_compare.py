"""Improving benchmark tours once the packing plan is fixed.

A traveling thief file is projected onto its x axis, items are packed
greedily along a baseline tour, and the exact path DP re-orders the visits.
The last case shows a baseline that grabs the heavy item first.
"""

import tempfile
from pathlib import Path

import numpy as np

from wtsp.cli import compare
from wtsp.ttp_io import PackingPlan, TtpInstance, random_ttp, read_ttp, write_ttp

with tempfile.TemporaryDirectory() as tmp:
    path = Path(tmp) / "demo.ttp"
    path.write_text(write_ttp(random_ttp(30, 2, seed=4)))
    print(path.read_text().splitlines()[:12])
    ttp = read_ttp(path)

report = compare(ttp, seed=0)
print(f"{ttp.name}: baseline {report.baseline_cost:.2f}, DP {report.cost:.2f}, "
      f"improvement {report.improvement:.2f}%")

coords = np.array([[0, 0], [50, 0], [-10, 0], [-20, 0], [-30, 0]], dtype=float)
heavy = TtpInstance("heavy-first", coords, np.array([100, 10, 10, 10]), np.array([90, 3, 3, 3]),
                    np.array([1, 2, 3, 4]), 100, 0.1, 1, 1.0)
report = compare(heavy, PackingPlan(frozenset(range(4))), baseline_tour=(0, 1, 2, 3, 4))
print(f"heavy item first: baseline {report.baseline_cost:.2f}, DP {report.cost:.2f} "
      f"(tour {report.tour}), improvement {report.improvement:.2f}%")
