"""``wtsp`` command line: solve, bench, compare and reduce.

Exit codes: 0 success, 2 usage or solver/metric mismatch, 3 unreadable or
invalid input, 4 an internal invariant failed.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
import time
from dataclasses import asdict, dataclass, field

import numpy as np

from . import cluster, hardness, linear, oracle, path_dp, star, ttp_io
from .core import WTspInstance, check_tour, load_instance, tour_cost

EXIT_OK, EXIT_USAGE, EXIT_INPUT, EXIT_INVARIANT = 0, 2, 3, 4
SOLVERS = ("path-dp", "path-dp-free", "star", "linear", "brute")


class CliError(Exception):
    def __init__(self, message, code):
        super().__init__(message)
        self.code = code


@dataclass
class RunReport:
    instance: str
    solver: str
    cost: float
    tour: list
    baseline_cost: float | None = None
    wall_time: float = 0.0
    params: dict = field(default_factory=dict)

    @property
    def improvement(self) -> float | None:
        if self.baseline_cost is None:
            return None
        return ttp_io.improvement(self.baseline_cost, self.cost)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["improvement"] = self.improvement
        for key in ("cost", "baseline_cost", "improvement"):
            if d[key] is not None and not np.isfinite(d[key]):
                d[key] = "inf"
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def default_seed() -> int:
    raw = os.environ.get("WTSP_SEED")
    if raw is None:
        return cluster.DEFAULT_SEED
    try:
        return int(raw)
    except ValueError:
        raise CliError(f"WTSP_SEED must be an integer, got {raw!r}", EXIT_USAGE) from None


def _read_instance(path) -> WTspInstance:
    try:
        return load_instance(path)
    except (OSError, ValueError, KeyError, TypeError) as exc:
        raise CliError(f"cannot read instance {path}: {exc}", EXIT_INPUT) from None


def _read_ttp(path) -> ttp_io.TtpInstance:
    try:
        return ttp_io.read_ttp(path)
    except (OSError, ValueError) as exc:
        raise CliError(f"cannot read TTP file {path}: {exc}", EXIT_INPUT) from None


def _read_tour(path) -> tuple:
    try:
        return ttp_io.read_tour(path)
    except (OSError, ValueError) as exc:
        raise CliError(f"cannot read tour {path}: {exc}", EXIT_INPUT) from None


def _emit(report: RunReport, out) -> None:
    text = report.to_json()
    if out:
        with open(out, "w") as fh:
            fh.write(text + "\n")
    print(text)


# --------------------------------------------------------------------------
# solve
# --------------------------------------------------------------------------

def run_solver(inst: WTspInstance, solver: str, eps=None, mode="exact") -> tuple:
    """``(tour, cost, params)`` for one solver; raises ``CliError`` on mismatch."""
    params = {}
    if solver in ("path-dp", "path-dp-free") and inst.metric != "path":
        raise CliError(f"{solver} needs a path instance, got {inst.metric}", EXIT_USAGE)
    if solver == "star" and inst.metric != "star":
        raise CliError(f"star needs a star instance, got {inst.metric}", EXIT_USAGE)
    if solver == "path-dp":
        tour, cost = path_dp.solve_fixed_start(inst)
    elif solver == "path-dp-free":
        tour, cost, start = path_dp.solve_free_start(inst)
        params["chosen_start"] = start
    elif solver == "star":
        eps = 0.25 if eps is None else eps
        tour, cost = star.solve_star(inst, eps, mode)
        params.update(eps=eps, mode=mode)
    elif solver == "linear":
        try:
            res = linear.solve_linear(inst, eps)
        except ValueError as exc:
            raise CliError(str(exc), EXIT_USAGE) from None
        tour, cost = res.tour, res.cost
        params.update(eps=1 / inst.n if eps is None else eps, chosen_start=res.start,
                      scaled_duration=res.scaled_duration, bound=res.bound)
    elif solver == "brute":
        try:
            tour, cost = oracle.brute_force_wtsp(inst)
        except oracle.InstanceTooLarge as exc:
            raise CliError(str(exc), EXIT_USAGE) from None
    else:
        raise CliError(f"unknown solver {solver!r}", EXIT_USAGE)
    return tuple(int(v) for v in tour), cost, params


def cmd_solve(args) -> int:
    inst = _read_instance(args.instance)
    if args.start is not None:
        if not 0 <= args.start < inst.n:
            raise CliError(f"start {args.start} outside 0..{inst.n - 1}", EXIT_USAGE)
        inst = inst.with_start(args.start)
    t0 = time.perf_counter()
    tour, cost, params = run_solver(inst, args.solver, args.eps, args.mode)
    elapsed = time.perf_counter() - t0
    try:
        check_tour(inst, tour, fixed_start=args.solver not in ("path-dp-free", "linear"))
    except ValueError as exc:
        raise CliError(f"solver returned an invalid tour: {exc}", EXIT_INVARIANT) from None
    recheck = tour_cost(inst, tour)
    if not np.isclose(recheck, cost, rtol=1e-9, atol=1e-9) and recheck != cost:
        raise CliError(f"solver cost {cost} disagrees with evaluated cost {recheck}",
                       EXIT_INVARIANT)
    if args.solver == "path-dp" and path_dp.zigzag_violations(inst, tour):
        raise CliError("path DP returned a tour that is not zigzag", EXIT_INVARIANT)
    params["start"] = inst.start
    report = RunReport(inst.name, args.solver, cost, list(tour), wall_time=elapsed,
                       params=params)
    if args.tour_out:
        ttp_io.write_tour(tour, args.tour_out)
    _emit(report, args.report)
    return EXIT_OK


# --------------------------------------------------------------------------
# bench
# --------------------------------------------------------------------------

def loglog_slope(ns, times) -> float:
    return float(np.polyfit(np.log(ns), np.log(times), 1)[0])


def bench_rows(sizes, reps: int, seed: int, pipelines=("dp", "clustered")) -> list:
    """One row per ``(pipeline, n)`` with median and mean wall time over ``reps``."""
    rows = []
    for n in sizes:
        inst, items = cluster.synthetic_instance(n, seed=seed + n)
        for pipe in pipelines:
            times, cost = [], None
            for _ in range(reps):
                t0 = time.perf_counter()
                if pipe == "dp":
                    cost = path_dp.solve_fixed_start(inst)[1]
                else:
                    cost = cluster.solve_clustered(inst, items, seed=seed).cost
                times.append(time.perf_counter() - t0)
            rows.append({"pipeline": pipe, "n": n, "median_time": float(np.median(times)),
                         "mean_time": float(np.mean(times)), "cost": cost})
    return rows


def cmd_bench(args) -> int:
    seed = default_seed() if args.seed is None else args.seed
    sizes = [int(s) for s in args.sizes.split(",")]
    if any(n < 2 for n in sizes):
        raise CliError("sizes must be at least 2", EXIT_USAGE)
    rows = bench_rows(sizes, args.reps, seed)
    fh = open(args.csv, "w", newline="") if args.csv else sys.stdout
    try:
        writer = csv.DictWriter(fh, fieldnames=["pipeline", "n", "median_time", "mean_time", "cost"])
        writer.writeheader()
        writer.writerows(rows)
    finally:
        if args.csv:
            fh.close()
    if len(sizes) >= 2:
        for pipe in ("dp", "clustered"):
            sel = [r for r in rows if r["pipeline"] == pipe]
            slope = loglog_slope([r["n"] for r in sel], [r["median_time"] for r in sel])
            print(f"# {pipe} log-log slope: {slope:.3f}", file=sys.stderr)
    return EXIT_OK


# --------------------------------------------------------------------------
# compare
# --------------------------------------------------------------------------

def compare(ttp: ttp_io.TtpInstance, plan=None, baseline_tour=None, seed: int = 0,
            budget: int = 1000, metric: str = "path") -> RunReport:
    """Exact path DP against a baseline tour under the same packing plan.

    Without a baseline tour, a plain-length 2-opt tour is built first and then
    improved by 2-opt under the weighted cost.  Without a plan, items are
    packed greedily along the initial tour.
    """
    empty = ttp_io.fix_packing(ttp, ttp_io.PackingPlan(), metric)
    if baseline_tour is None:
        initial = ttp_io.two_opt_baseline(empty, seed=seed, max_moves=budget)
    else:
        initial = tuple(baseline_tour)
        check_tour(empty, initial)
    if plan is None:
        plan = ttp_io.greedy_packing(ttp, initial, metric)
    inst = ttp_io.fix_packing(ttp, plan, metric)
    if baseline_tour is None:
        base = ttp_io.two_opt_baseline(inst, seed=seed, max_moves=budget, initial=initial)
    else:
        base = initial
    base_cost = tour_cost(inst, base)
    t0 = time.perf_counter()
    tour, cost = path_dp.solve_fixed_start(inst)
    elapsed = time.perf_counter() - t0
    return RunReport(ttp.name, "path-dp", cost, list(tour), base_cost, elapsed,
                     {"seed": seed, "budget": budget, "plan_size": len(plan.items),
                      "plan_weight": plan.weight(ttp), "baseline_tour": list(base)})


def cmd_compare(args) -> int:
    ttp = _read_ttp(args.ttp)
    seed = default_seed() if args.seed is None else args.seed
    plan = None
    if args.packing != "greedy":
        try:
            plan = ttp_io.read_plan(args.packing)
        except (OSError, ValueError, KeyError) as exc:
            raise CliError(f"cannot read packing plan: {exc}", EXIT_INPUT) from None
    tour = _read_tour(args.baseline_tour) if args.baseline_tour else None
    try:
        report = compare(ttp, plan, tour, seed, args.budget)
    except ValueError as exc:
        raise CliError(str(exc), EXIT_INPUT) from None
    if report.improvement < -1e-9:
        raise CliError(f"negative improvement {report.improvement}", EXIT_INVARIANT)
    _emit(report, args.report)
    return EXIT_OK


# --------------------------------------------------------------------------
# reduce
# --------------------------------------------------------------------------

def cmd_reduce(args) -> int:
    try:
        red = hardness.reduce_partition(args.values)
    except ValueError as exc:
        raise CliError(str(exc), EXIT_INPUT) from None
    d = red.instance.to_dict()
    d.setdefault("meta", {}).update(values=list(red.values), threshold=red.threshold)
    text = json.dumps(d, indent=2)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="wtsp", description="Weighted TSP solvers and experiments")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve", help="solve an instance JSON file")
    s.add_argument("instance")
    s.add_argument("--solver", choices=SOLVERS, default="path-dp")
    s.add_argument("--start", type=int, help="0-based start node (overrides the file)")
    s.add_argument("--eps", type=float)
    s.add_argument("--mode", choices=("exact", "fptas"), default="exact",
                   help="knapsack mode for the star solver")
    s.add_argument("--tour-out", help="write the tour, one node per line")
    s.add_argument("--report", help="also write the JSON report here")
    s.set_defaults(func=cmd_solve)

    b = sub.add_parser("bench", help="time the full and clustered DP on synthetic instances")
    b.add_argument("--sizes", default="101,501,1001")
    b.add_argument("--reps", type=int, default=3)
    b.add_argument("--seed", type=int)
    b.add_argument("--csv", help="write the table here instead of stdout")
    b.set_defaults(func=cmd_bench)

    c = sub.add_parser("compare", help="path DP against a baseline on a TTP file")
    c.add_argument("ttp")
    c.add_argument("--packing", default="greedy", help="'greedy' or a packing plan file")
    c.add_argument("--baseline-tour", help="tour file; default is seeded 2-opt")
    c.add_argument("--seed", type=int)
    c.add_argument("--budget", type=int, default=1000, help="maximum 2-opt moves")
    c.add_argument("--report")
    c.set_defaults(func=cmd_compare)

    r = sub.add_parser("reduce", help="partition values to a star instance")
    r.add_argument("values", nargs="+", type=int)
    r.add_argument("-o", "--output")
    r.set_defaults(func=cmd_reduce)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"wtsp: error: {exc}", file=sys.stderr)
        return exc.code
    except AssertionError as exc:
        print(f"wtsp: invariant violated: {exc}", file=sys.stderr)
        return EXIT_INVARIANT


if __name__ == "__main__":
    sys.exit(main())
