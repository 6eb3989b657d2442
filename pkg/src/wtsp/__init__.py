"""Weighted traveling salesman problems: exact path DP, star and general-metric
approximations, a Partition reduction, clustering and TTP tooling."""

from .core import (
    ConstantCost,
    CostFunction,
    LinearSpeedCost,
    StepCost,
    WTspInstance,
    batch_tour_costs,
    carried_weights,
    check_tour,
    load_instance,
    save_instance,
    tour_cost,
    tour_length,
    validate_metric,
)
from .oracle import brute_force_wtsp, knapsack_exact, knapsack_fptas, partition_oracle
from .path_dp import solve_fixed_start, solve_free_start
from .star import solve_star
from .linear import solve_linear
from .hardness import check_threshold, reduce_partition
from .cluster import build_clustered_instance, expand_tour, kmeans, solve_clustered
from .ttp_io import fix_packing, greedy_packing, parse_ttp, project_to_path, two_opt_baseline, write_ttp

__version__ = "0.1.0"
