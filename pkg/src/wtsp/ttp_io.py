"""Traveling thief benchmark files, projection to a line, and baseline tours.

Files follow the TTP competition layout::

    PROBLEM NAME:	eil51-TTP
    KNAPSACK DATA TYPE:	bounded strongly corr
    DIMENSION:	51
    NUMBER OF ITEMS:	50
    CAPACITY OF KNAPSACK:	4029
    MIN SPEED:	0.1
    MAX SPEED:	1
    RENTING RATIO:	5.61
    EDGE_WEIGHT_TYPE:	CEIL_2D
    NODE_COORD_SECTION	(INDEX, X, Y):
    1	37.00	52.00
    ...
    ITEMS SECTION	(INDEX, PROFIT, WEIGHT, ASSIGNED NODE NUMBER):
    1	101	1	2
    ...

Cities and items are 1-based in the file and 0-based in memory.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .core import INF, ConstantCost, LinearSpeedCost, WTspInstance, batch_tour_costs, tour_cost


class TtpFormatError(ValueError):
    def __init__(self, message, lineno=None):
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)
        self.lineno = lineno


@dataclass
class TtpInstance:
    name: str
    coords: np.ndarray            # (n, 2)
    profits: np.ndarray           # (m,)
    item_weights: np.ndarray      # (m,)
    item_cities: np.ndarray       # (m,) 0-based
    capacity: float
    min_speed: float
    max_speed: float
    renting_ratio: float
    edge_weight_type: str = "CEIL_2D"
    knapsack_data_type: str = ""

    @property
    def n(self) -> int:
        return len(self.coords)

    @property
    def m(self) -> int:
        return len(self.profits)

    def __eq__(self, other):
        if not isinstance(other, TtpInstance):
            return NotImplemented
        scalars = ("name", "capacity", "min_speed", "max_speed", "renting_ratio",
                   "edge_weight_type", "knapsack_data_type")
        arrays = ("coords", "profits", "item_weights", "item_cities")
        return (all(getattr(self, a) == getattr(other, a) for a in scalars)
                and all(np.array_equal(getattr(self, a), getattr(other, a)) for a in arrays))


_HEADER_KEYS = {
    "PROBLEM NAME": "name",
    "KNAPSACK DATA TYPE": "knapsack_data_type",
    "DIMENSION": "dimension",
    "NUMBER OF ITEMS": "items",
    "CAPACITY OF KNAPSACK": "capacity",
    "MIN SPEED": "min_speed",
    "MAX SPEED": "max_speed",
    "RENTING RATIO": "renting_ratio",
    "EDGE_WEIGHT_TYPE": "edge_weight_type",
}
_REQUIRED = ("name", "dimension", "items", "capacity", "min_speed", "max_speed",
             "renting_ratio", "edge_weight_type")


def _number(token: str, lineno: int):
    try:
        value = float(token)
    except ValueError:
        raise TtpFormatError(f"expected a number, got {token!r}", lineno) from None
    return int(value) if value.is_integer() and "." not in token and "e" not in token.lower() else value


def parse_ttp(text: str) -> TtpInstance:
    header = {}
    coords, items = [], []
    section = None
    coord_line = items_line = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        upper = line.upper()
        if upper.startswith("NODE_COORD_SECTION"):
            section, coord_line = "coords", lineno
            continue
        if upper.startswith("ITEMS SECTION"):
            section, items_line = "items", lineno
            continue
        if upper.startswith("EOF"):
            break
        if section is None:
            if ":" not in line:
                raise TtpFormatError(f"malformed header line {line!r}", lineno)
            key, value = (s.strip() for s in line.split(":", 1))
            if key.upper() not in _HEADER_KEYS:
                raise TtpFormatError(f"unknown header key {key!r}", lineno)
            header[_HEADER_KEYS[key.upper()]] = (value, lineno)
            continue
        parts = line.split()
        if section == "coords":
            if len(parts) != 3:
                raise TtpFormatError("coordinate rows need 'index x y'", lineno)
            idx = _number(parts[0], lineno)
            if idx != len(coords) + 1:
                raise TtpFormatError(f"expected city index {len(coords) + 1}, got {parts[0]}", lineno)
            coords.append((float(_number(parts[1], lineno)), float(_number(parts[2], lineno)), lineno))
        else:
            if len(parts) != 4:
                raise TtpFormatError("item rows need 'index profit weight city'", lineno)
            idx = _number(parts[0], lineno)
            if idx != len(items) + 1:
                raise TtpFormatError(f"expected item index {len(items) + 1}, got {parts[0]}", lineno)
            items.append(tuple(_number(p, lineno) for p in parts[1:]) + (lineno,))

    for key in _REQUIRED:
        if key not in header:
            label = next(k for k, v in _HEADER_KEYS.items() if v == key)
            raise TtpFormatError(f"missing header field {label}")
    if coord_line is None:
        raise TtpFormatError("missing NODE_COORD_SECTION")
    if items_line is None:
        raise TtpFormatError("missing ITEMS SECTION")

    def num(key):
        value, lineno = header[key]
        return _number(value.split()[0] if value else value, lineno)

    n, m = num("dimension"), num("items")
    if len(coords) != n:
        lineno = coords[-1][2] if coords else coord_line
        raise TtpFormatError(f"DIMENSION is {n} but {len(coords)} coordinate rows were given",
                             lineno)
    if len(items) != m:
        lineno = items[-1][-1] if items else items_line
        raise TtpFormatError(f"NUMBER OF ITEMS is {m} but {len(items)} item rows were given",
                             lineno)
    for profit, weight, city, lineno in items:
        if not isinstance(city, int) or not 1 <= city <= n:
            raise TtpFormatError(f"item city {city} out of range 1..{n}", lineno)
        if city == 1:
            raise TtpFormatError("items may not be placed at the start city 1", lineno)
        if profit < 0 or weight < 0:
            raise TtpFormatError("profits and weights must be nonnegative", lineno)

    return TtpInstance(
        name=header["name"][0],
        coords=np.array([c[:2] for c in coords], dtype=float).reshape(n, 2),
        profits=np.array([it[0] for it in items]),
        item_weights=np.array([it[1] for it in items]),
        item_cities=np.array([it[2] - 1 for it in items], dtype=np.int64),
        capacity=num("capacity"),
        min_speed=num("min_speed"),
        max_speed=num("max_speed"),
        renting_ratio=num("renting_ratio"),
        edge_weight_type=header["edge_weight_type"][0],
        knapsack_data_type=header.get("knapsack_data_type", ("", 0))[0],
    )


def _fmt(x) -> str:
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return repr(float(x))


def _fmt_coord(x) -> str:
    x = float(x)
    return f"{x:.2f}" if round(x, 2) == x else repr(x)


def write_ttp(ttp: TtpInstance) -> str:
    lines = [
        f"PROBLEM NAME:\t{ttp.name}",
        f"KNAPSACK DATA TYPE:\t{ttp.knapsack_data_type}",
        f"DIMENSION:\t{ttp.n}",
        f"NUMBER OF ITEMS:\t{ttp.m}",
        f"CAPACITY OF KNAPSACK:\t{_fmt(ttp.capacity)}",
        f"MIN SPEED:\t{_fmt(ttp.min_speed)}",
        f"MAX SPEED:\t{_fmt(ttp.max_speed)}",
        f"RENTING RATIO:\t{_fmt(ttp.renting_ratio)}",
        f"EDGE_WEIGHT_TYPE:\t{ttp.edge_weight_type}",
        "NODE_COORD_SECTION\t(INDEX, X, Y):",
    ]
    for i, (x, y) in enumerate(ttp.coords, start=1):
        lines.append(f"{i}\t{_fmt_coord(x)}\t{_fmt_coord(y)}")
    lines.append("ITEMS SECTION\t(INDEX, PROFIT, WEIGHT, ASSIGNED NODE NUMBER):")
    for j in range(ttp.m):
        lines.append(f"{j + 1}\t{_fmt(ttp.profits[j].item())}\t{_fmt(ttp.item_weights[j].item())}"
                     f"\t{int(ttp.item_cities[j]) + 1}")
    return "\n".join(lines) + "\n"


def read_ttp(path) -> TtpInstance:
    with open(path) as fh:
        return parse_ttp(fh.read())


# --------------------------------------------------------------------------
# Projection and packing
# --------------------------------------------------------------------------

def project_to_path(ttp: TtpInstance) -> WTspInstance:
    """Path instance with every ``y`` set to zero (zero weights, unit cost).

    Node ``i`` keeps city index ``i``; distances are exact ``x`` differences.
    """
    return WTspInstance.path(ttp.coords[:, 0].copy(), np.zeros(ttp.n, dtype=np.int64),
                             ConstantCost(1), start=0, name=ttp.name + "-line")


def ceil_2d_distances(coords: np.ndarray) -> np.ndarray:
    diff = coords[:, None, :] - coords[None, :, :]
    return np.ceil(np.sqrt((diff ** 2).sum(-1)) - 1e-9).astype(np.int64).clip(min=0)


@dataclass(frozen=True)
class PackingPlan:
    items: frozenset = field(default_factory=frozenset)

    def weight(self, ttp: TtpInstance):
        return sum(ttp.item_weights[i].item() for i in sorted(self.items))

    def profit(self, ttp: TtpInstance):
        return sum(ttp.profits[i].item() for i in sorted(self.items))

    def to_text(self) -> str:
        """One selected 1-based item index per line."""
        return "".join(f"{i + 1}\n" for i in sorted(self.items))

    @classmethod
    def from_text(cls, text: str) -> "PackingPlan":
        return cls(frozenset(int(tok) - 1 for tok in text.split()))

    def to_json(self) -> str:
        return json.dumps({"items": [i + 1 for i in sorted(self.items)]})

    @classmethod
    def from_json(cls, text: str) -> "PackingPlan":
        return cls(frozenset(i - 1 for i in json.loads(text)["items"]))


def read_plan(path) -> PackingPlan:
    with open(path) as fh:
        text = fh.read()
    if text.lstrip().startswith("{"):
        return PackingPlan.from_json(text)
    return PackingPlan.from_text(text)


def fix_packing(ttp: TtpInstance, plan: PackingPlan, metric: str = "path") -> WTspInstance:
    """Weighted TSP induced by a fixed packing plan, starting at city 0.

    ``metric`` is ``"path"`` (projected line, exact distances) or ``"general"``
    (the benchmark's CEIL_2D rounded Euclidean distances).  An empty plan
    gets the constant rate ``1 / max_speed``.
    """
    bad = [i for i in plan.items if not 0 <= i < ttp.m]
    if bad:
        raise ValueError(f"plan refers to unknown items {sorted(bad)}")
    total = plan.weight(ttp)
    if total > ttp.capacity:
        raise ValueError(f"plan weight {total} exceeds capacity {ttp.capacity}")
    weights = np.zeros(ttp.n, dtype=ttp.item_weights.dtype)
    for i in sorted(plan.items):
        weights[ttp.item_cities[i]] += ttp.item_weights[i]
    f = LinearSpeedCost(ttp.max_speed, ttp.min_speed, total) if total > 0 \
        else ConstantCost(1 / ttp.max_speed)
    meta = {"ttp": ttp.name, "plan_size": len(plan.items)}
    if metric == "path":
        return WTspInstance.path(ttp.coords[:, 0].copy(), weights, f, start=0,
                                 name=ttp.name + "-line", meta=meta)
    if metric == "general":
        return WTspInstance.general(ceil_2d_distances(ttp.coords), weights, f, start=0,
                                    name=ttp.name, meta=meta)
    raise ValueError(f"unknown metric {metric!r}")


def greedy_packing(ttp: TtpInstance, tour, metric: str = "path") -> PackingPlan:
    """Pick items by ``profit / (weight * distance still to travel)``.

    Items are scanned best score first (ties by index) and taken whenever
    they still fit.
    """
    base = fix_packing(ttp, PackingPlan(), metric)
    tour = list(tour)
    legs = base.edge_lengths(np.asarray(tour)).astype(float)
    # distance from each city to the end of the tour
    remaining = np.empty(ttp.n)
    remaining[tour] = legs[::-1].cumsum()[::-1]
    scores = []
    for i in range(ttp.m):
        w = float(ttp.item_weights[i])
        rest = remaining[ttp.item_cities[i]]
        denom = w * rest
        scores.append(INF if denom <= 0 else float(ttp.profits[i]) / denom)
    order = sorted(range(ttp.m), key=lambda i: (-scores[i], i))
    chosen, load = [], 0
    for i in order:
        w = ttp.item_weights[i].item()
        if load + w <= ttp.capacity:
            chosen.append(i)
            load += w
    return PackingPlan(frozenset(chosen))


# --------------------------------------------------------------------------
# Baseline tour
# --------------------------------------------------------------------------

def random_tour(n: int, start: int, rng: np.random.Generator) -> tuple:
    rest = [v for v in range(n) if v != start]
    rng.shuffle(rest)
    return (start,) + tuple(int(v) for v in rest)


def two_opt_baseline(instance: WTspInstance, seed: int = 0, max_moves: int = 1000,
                     initial=None) -> tuple:
    """Best-improvement 2-opt under the weighted tour cost.

    Starts from ``initial`` or a seeded random tour through ``instance.start``.
    Each round reverses the segment whose reversal lowers the cost the most.
    It stops when no reversal helps or after ``max_moves`` moves.
    """
    n = instance.n
    rng = np.random.default_rng(seed)
    tour = np.asarray(initial if initial is not None else random_tour(n, instance.start, rng))
    if n <= 3:
        # every start-respecting order is a reversal of another: enumerate
        cands = [tour]
        if n == 3:
            cands.append(np.array([tour[0], tour[2], tour[1]]))
        costs = [tour_cost(instance, c) for c in cands]
        return tuple(int(v) for v in cands[int(np.argmin(costs))])
    cost = float(batch_tour_costs(instance, tour[None, :])[0])
    for _ in range(max_moves):
        best_gain, best_move = 0.0, None
        for i in range(1, n - 1):
            js = np.arange(i + 1, n)
            cands = np.repeat(tour[None, :], len(js), axis=0)
            for row, j in enumerate(js):
                cands[row, i:j + 1] = tour[i:j + 1][::-1]
            costs = batch_tour_costs(instance, cands)
            k = int(np.argmin(costs))
            gain = cost - costs[k]
            if gain > best_gain + 1e-12 * max(1.0, abs(cost)):
                best_gain, best_move = gain, (i, int(js[k]))
        if best_move is None:
            break
        i, j = best_move
        tour = tour.copy()
        tour[i:j + 1] = tour[i:j + 1][::-1]
        cost = float(batch_tour_costs(instance, tour[None, :])[0])
    return tuple(int(v) for v in tour)


def read_tour(path) -> tuple:
    with open(path) as fh:
        return tuple(int(tok) for tok in fh.read().split())


def write_tour(tour, path) -> None:
    with open(path, "w") as fh:
        fh.write("".join(f"{v}\n" for v in tour))


def improvement(baseline_cost: float, cost: float) -> float:
    """Relative saving in percent; zero when both are zero."""
    if baseline_cost == 0 or math.isinf(baseline_cost) and math.isinf(cost):
        return 0.0
    return (baseline_cost - cost) / baseline_cost * 100


# --------------------------------------------------------------------------
# Synthetic benchmark files
# --------------------------------------------------------------------------

def random_ttp(n: int, items_per_city: int = 1, seed: int = 0, grid: int = 100,
               capacity_ratio: float = 0.5, name: str | None = None) -> TtpInstance:
    """Benchmark-style instance with integer coordinates, profits and weights.

    City 1 carries no items.  The capacity is ``capacity_ratio`` of the total
    item weight, rounded down.
    """
    if n < 2:
        raise ValueError("need at least two cities")
    rng = np.random.default_rng(seed)
    coords = rng.integers(0, grid + 1, size=(n, 2)).astype(float)
    cities = np.repeat(np.arange(1, n), items_per_city)
    weights = rng.integers(1, 101, size=len(cities))
    profits = weights + rng.integers(0, 101, size=len(cities))
    return TtpInstance(
        name=name or f"random{n}-{items_per_city}-{seed}",
        coords=coords,
        profits=profits,
        item_weights=weights,
        item_cities=cities.astype(np.int64),
        capacity=int(weights.sum() * capacity_ratio),
        min_speed=0.1,
        max_speed=1,
        renting_ratio=round(float(rng.uniform(0.5, 10)), 2),
        edge_weight_type="CEIL_2D",
        knapsack_data_type="bounded strongly corr",
    )
