"""Instances, cost functions and exact tour-cost evaluation for the weighted TSP.

A tour ``pi = (pi_0, ..., pi_{n-1})`` is a permutation of the node indices.  The
travel cost is

    T(pi) = sum_k f(c_k) * d(pi_k, pi_{k+1})       (indices mod n)

where ``c_k`` is the weight collected at ``pi_1 .. pi_k``.  The weight of the
first node ``pi_0`` is never carried: it is picked up when the tour closes.
"""

from __future__ import annotations

import json
import math
from bisect import bisect_left
from dataclasses import dataclass, field
from functools import cached_property
from typing import NamedTuple, Sequence

import numpy as np

INF = math.inf

Tour = tuple  # tuple[int, ...]; first entry is the start node


# --------------------------------------------------------------------------
# Cost functions
# --------------------------------------------------------------------------

class CostFunction:
    """Monotone nondecreasing map from carried weight to cost per unit distance.

    Instances are callable on a scalar (returns a Python number, so integer
    rates stay integers) or on a numpy array (returns a float array).
    """

    kind = "abstract"

    def __call__(self, w):
        if isinstance(w, np.ndarray):
            return self.evaluate_array(w)
        return self.evaluate(w)

    def evaluate(self, w):
        raise NotImplementedError

    def evaluate_array(self, w: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def to_dict(self) -> dict:
        raise NotImplementedError

    @staticmethod
    def from_dict(data: dict) -> "CostFunction":
        kind = data["kind"]
        if kind == "constant":
            return ConstantCost(_load_number(data["rate"]))
        if kind == "step":
            return StepCost(
                [_load_number(t) for t in data["thresholds"]],
                [_load_number(r) for r in data["rates"]],
                _load_number(data["final_rate"]),
            )
        if kind == "linear_speed":
            return LinearSpeedCost(
                _load_number(data["nu_max"]),
                _load_number(data["nu_min"]),
                _load_number(data["w_ref"]),
            )
        raise ValueError(f"unknown cost function kind {kind!r}")


@dataclass(frozen=True)
class ConstantCost(CostFunction):
    rate: float = 1

    kind = "constant"

    def __post_init__(self):
        if not self.rate >= 0:
            raise ValueError("rate must be nonnegative")

    def evaluate(self, w):
        return self.rate

    def evaluate_array(self, w):
        return np.full(np.shape(w), float(self.rate))

    def to_dict(self):
        return {"kind": "constant", "rate": _dump_number(self.rate)}


@dataclass(frozen=True)
class StepCost(CostFunction):
    """Piecewise-constant cost.

    ``f(w) = rates[k]`` for the first ``k`` with ``w <= thresholds[k]``, and
    ``final_rate`` beyond the last threshold.  Rates may be ``math.inf``.
    """

    thresholds: tuple = ()
    rates: tuple = ()
    final_rate: float = 1

    kind = "step"

    def __post_init__(self):
        object.__setattr__(self, "thresholds", tuple(self.thresholds))
        object.__setattr__(self, "rates", tuple(self.rates))
        if len(self.thresholds) != len(self.rates):
            raise ValueError("thresholds and rates differ in length")
        if any(b <= a for a, b in zip(self.thresholds, self.thresholds[1:])):
            raise ValueError("thresholds must be strictly increasing")
        seq = self.rates + (self.final_rate,)
        if any(not r >= 0 for r in seq):
            raise ValueError("rates must be nonnegative")
        if any(b < a for a, b in zip(seq, seq[1:])):
            raise ValueError("step cost function must be nondecreasing")

    @classmethod
    def from_integer_values(cls, values: Sequence, final_rate=None) -> "StepCost":
        """Step table with ``f(k) = values[k]`` on the integers ``0..len-1``."""
        values = list(values)
        if final_rate is None:
            final_rate = values[-1]
        return cls(tuple(range(len(values))), tuple(values), final_rate)

    def evaluate(self, w):
        k = bisect_left(self.thresholds, w)
        return self.rates[k] if k < len(self.rates) else self.final_rate

    def evaluate_array(self, w):
        table = np.array(self.rates + (self.final_rate,), dtype=float)
        idx = np.searchsorted(np.asarray(self.thresholds, dtype=float), w, side="left")
        return table[idx]

    def to_dict(self):
        return {
            "kind": "step",
            "thresholds": [_dump_number(t) for t in self.thresholds],
            "rates": [_dump_number(r) for r in self.rates],
            "final_rate": _dump_number(self.final_rate),
        }


# speeds at or below this are treated as a standstill
SPEED_GUARD = 1e-12


@dataclass(frozen=True)
class LinearSpeedCost(CostFunction):
    """Inverse speed ``1 / (nu_max - nu * w)`` with ``nu = (nu_max - nu_min) / w_ref``."""

    nu_max: float
    nu_min: float
    w_ref: float

    kind = "linear_speed"

    def __post_init__(self):
        if not (self.nu_max > 0 and self.nu_max >= self.nu_min >= 0):
            raise ValueError("need nu_max > 0 and nu_max >= nu_min >= 0")
        if not self.w_ref > 0:
            raise ValueError("w_ref must be positive")

    @property
    def nu(self) -> float:
        return (self.nu_max - self.nu_min) / self.w_ref

    def evaluate(self, w):
        speed = self.nu_max - self.nu * w
        return 1.0 / speed if speed > SPEED_GUARD else INF

    def evaluate_array(self, w):
        speed = self.nu_max - self.nu * np.asarray(w, dtype=float)
        out = np.full(speed.shape, INF)
        ok = speed > SPEED_GUARD
        out[ok] = 1.0 / speed[ok]
        return out

    def to_dict(self):
        return {
            "kind": "linear_speed",
            "nu_max": _dump_number(self.nu_max),
            "nu_min": _dump_number(self.nu_min),
            "w_ref": _dump_number(self.w_ref),
        }


def _dump_number(x):
    if isinstance(x, float) and math.isinf(x):
        return "inf" if x > 0 else "-inf"
    if isinstance(x, np.generic):
        return x.item()
    return x


def _load_number(x):
    if isinstance(x, str):
        return float(x)
    return x


def weighted_lengths(rates, lengths):
    """Elementwise ``rate * length`` with the convention ``inf * 0 = 0``."""
    rates = np.asarray(rates, dtype=float)
    lengths = np.asarray(lengths, dtype=float)
    with np.errstate(invalid="ignore"):
        prod = rates * lengths
    return np.where(lengths == 0, 0.0, prod)


# --------------------------------------------------------------------------
# Instances
# --------------------------------------------------------------------------

def _as_numeric_array(values) -> np.ndarray:
    arr = np.asarray(values)
    if arr.dtype.kind in "iub":
        arr = arr.astype(np.int64)
    else:
        arr = arr.astype(float)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class WTspInstance:
    """A weighted TSP instance.

    ``metric`` is one of ``"general"`` (explicit ``distance`` matrix),
    ``"path"`` (node ``positions`` on a line) or ``"star"`` (``center`` node and
    per-node ``radius`` = distance to the center, zero for the center itself).
    Use the :meth:`general`, :meth:`path` and :meth:`star` constructors.
    """

    weights: np.ndarray
    f: CostFunction
    start: int = 0
    metric: str = "general"
    matrix: np.ndarray | None = None
    positions: np.ndarray | None = None
    center: int | None = None
    radius: np.ndarray | None = None
    name: str = ""
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "weights", _as_numeric_array(self.weights))
        n = len(self.weights)
        if n == 0:
            raise ValueError("instance needs at least one node")
        if (self.weights < 0).any():
            raise ValueError("weights must be nonnegative")
        if not 0 <= self.start < n:
            raise ValueError(f"start {self.start} out of range")
        if self.metric == "general":
            m = _as_numeric_array(self.matrix)
            if m.shape != (n, n):
                raise ValueError("distance matrix shape does not match weights")
            object.__setattr__(self, "matrix", m)
        elif self.metric == "path":
            p = _as_numeric_array(self.positions)
            if p.shape != (n,):
                raise ValueError("positions length does not match weights")
            object.__setattr__(self, "positions", p)
        elif self.metric == "star":
            r = _as_numeric_array(self.radius)
            if r.shape != (n,) or self.center is None or not 0 <= self.center < n:
                raise ValueError("star instance needs a center and one radius per node")
            if r[self.center] != 0 or (r < 0).any():
                raise ValueError("star radii must be >= 0 with zero at the center")
            object.__setattr__(self, "radius", r)
        else:
            raise ValueError(f"unknown metric kind {self.metric!r}")

    # -- constructors -----------------------------------------------------

    @classmethod
    def general(cls, distance, weights, f, start=0, **kw) -> "WTspInstance":
        return cls(weights=weights, f=f, start=start, metric="general", matrix=distance, **kw)

    @classmethod
    def path(cls, positions, weights, f, start=0, **kw) -> "WTspInstance":
        return cls(weights=weights, f=f, start=start, metric="path", positions=positions, **kw)

    @classmethod
    def from_gaps(cls, gaps, weights, f, start=0, **kw) -> "WTspInstance":
        """Path instance whose nodes are given left to right by consecutive gaps."""
        gaps = np.asarray(gaps)
        if (gaps < 0).any():
            raise ValueError("gaps must be nonnegative")
        positions = np.concatenate([np.zeros(1, dtype=gaps.dtype), np.cumsum(gaps)])
        return cls.path(positions, weights, f, start, **kw)

    @classmethod
    def star(cls, center, radius, weights, f, start=None, **kw) -> "WTspInstance":
        start = center if start is None else start
        return cls(weights=weights, f=f, start=start, metric="star", center=center,
                   radius=radius, **kw)

    def with_start(self, start: int) -> "WTspInstance":
        return WTspInstance(
            weights=self.weights, f=self.f, start=start, metric=self.metric,
            matrix=self.matrix, positions=self.positions, center=self.center,
            radius=self.radius, name=self.name, meta=dict(self.meta),
        )

    def with_cost(self, f: CostFunction) -> "WTspInstance":
        return WTspInstance(
            weights=self.weights, f=f, start=self.start, metric=self.metric,
            matrix=self.matrix, positions=self.positions, center=self.center,
            radius=self.radius, name=self.name, meta=dict(self.meta),
        )

    # -- geometry ---------------------------------------------------------

    @property
    def n(self) -> int:
        return len(self.weights)

    @property
    def total_weight(self):
        return self.weights.sum().item()

    @cached_property
    def path_order(self) -> np.ndarray:
        """Node indices sorted left to right (stable on equal positions)."""
        if self.metric != "path":
            raise ValueError("path_order is only defined for path instances")
        order = np.argsort(self.positions, kind="stable")
        order.setflags(write=False)
        return order

    @property
    def path_gaps(self) -> np.ndarray:
        return np.diff(self.positions[self.path_order])

    @cached_property
    def distance(self) -> np.ndarray:
        """Dense distance matrix (built on first use for path and star metrics)."""
        if self.metric == "general":
            return self.matrix
        if self.metric == "path":
            p = self.positions
            d = np.abs(p[:, None] - p[None, :])
        else:
            r = self.radius
            d = r[:, None] + r[None, :]
            np.fill_diagonal(d, 0)
        d.setflags(write=False)
        return d

    def dist(self, a: int, b: int):
        if self.metric == "path":
            return abs(self.positions[a] - self.positions[b]).item()
        if self.metric == "star":
            return 0 if a == b else (self.radius[a] + self.radius[b]).item()
        return self.matrix[a, b].item()

    def edge_lengths(self, tours: np.ndarray) -> np.ndarray:
        """Lengths of the closed-tour edges ``tours[..., k] -> tours[..., k+1]``."""
        tours = np.asarray(tours)
        nxt = np.roll(tours, -1, axis=-1)
        if self.metric == "path":
            return np.abs(self.positions[tours] - self.positions[nxt])
        if self.metric == "star":
            return np.where(tours == nxt, 0, self.radius[tours] + self.radius[nxt])
        return self.matrix[tours, nxt]

    # -- serialization ----------------------------------------------------

    def to_dict(self) -> dict:
        d = {
            "name": self.name,
            "nodes": self.n,
            "metric": self.metric,
            "weights": self.weights.tolist(),
            "start": self.start,
            "cost_function": self.f.to_dict(),
        }
        if self.metric == "general":
            d["distances"] = self.matrix.tolist()
        elif self.metric == "path":
            d["path_positions"] = self.positions.tolist()
        else:
            d["star_center"] = self.center
            d["star_leaf_distances"] = self.radius.tolist()
        if self.meta:
            d["meta"] = self.meta
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "WTspInstance":
        f = CostFunction.from_dict(d["cost_function"])
        common = dict(weights=d["weights"], f=f, start=d.get("start", 0),
                      name=d.get("name", ""), meta=d.get("meta", {}))
        if "distances" in d:
            inst = cls.general(d["distances"], **common)
        elif "path_positions" in d:
            inst = cls.path(d["path_positions"], **common)
        elif "path_gaps" in d:
            inst = cls.from_gaps(d["path_gaps"], **common)
        elif "star_leaf_distances" in d:
            inst = cls.star(d["star_center"], d["star_leaf_distances"], **common)
        else:
            raise ValueError("instance has no distances, path_positions, path_gaps "
                             "or star_leaf_distances")
        if "nodes" in d and d["nodes"] != inst.n:
            raise ValueError(f"'nodes' is {d['nodes']} but {inst.n} weights were given")
        return inst

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)

    @classmethod
    def from_json(cls, text: str) -> "WTspInstance":
        return cls.from_dict(json.loads(text))

    def same_as(self, other: "WTspInstance") -> bool:
        """Structural equality (used for round-trip checks)."""
        return self.to_dict() == other.to_dict()


def load_instance(path) -> WTspInstance:
    with open(path) as fh:
        return WTspInstance.from_json(fh.read())


def save_instance(instance: WTspInstance, path) -> None:
    with open(path, "w") as fh:
        fh.write(instance.to_json(indent=1))
        fh.write("\n")


# --------------------------------------------------------------------------
# Tour evaluation
# --------------------------------------------------------------------------

def check_tour(instance: WTspInstance, tour, fixed_start: bool = True) -> tuple:
    tour = tuple(int(v) for v in tour)
    if sorted(tour) != list(range(instance.n)):
        raise ValueError("tour is not a permutation of the instance nodes")
    if fixed_start and tour[0] != instance.start:
        raise ValueError(f"tour starts at {tour[0]}, instance start is {instance.start}")
    return tour


def carried_weights(instance: WTspInstance, tour) -> np.ndarray:
    """Weight carried on each tour edge; the last entry is the closing edge."""
    tour = check_tour(instance, tour, fixed_start=False)
    w = instance.weights[list(tour)].copy()
    w[0] = 0
    return np.cumsum(w)


def tour_cost(instance: WTspInstance, tour, fixed_start: bool = False) -> float:
    """Travel cost of a closed tour; ``math.inf`` if an edge is untraversable.

    The first node of ``tour`` acts as the start.  Pass ``fixed_start=True`` to
    insist that it equals ``instance.start``.
    """
    tour = check_tour(instance, tour, fixed_start=fixed_start)
    if len(tour) == 1:
        return 0.0
    arr = np.asarray(tour)
    rates = instance.f(carried_weights(instance, tour))
    return float(weighted_lengths(rates, instance.edge_lengths(arr)).sum())


def batch_tour_costs(instance: WTspInstance, tours: np.ndarray) -> np.ndarray:
    """Vectorised :func:`tour_cost` over the rows of ``tours`` (no validation)."""
    tours = np.asarray(tours)
    if tours.shape[-1] == 1:
        return np.zeros(tours.shape[:-1])
    w = instance.weights[tours].astype(float)
    w[..., 0] = 0
    rates = instance.f(np.cumsum(w, axis=-1))
    return weighted_lengths(rates, instance.edge_lengths(tours)).sum(axis=-1)


def tour_length(instance: WTspInstance, tour) -> float:
    return float(instance.edge_lengths(np.asarray(tour)).sum())


# --------------------------------------------------------------------------
# Metric validation
# --------------------------------------------------------------------------

class Violation(NamedTuple):
    kind: str     # "diagonal", "symmetry" or "triangle"
    nodes: tuple  # (i,), (i, j) or (i, k, j) with d(i, j) > d(i, k) + d(k, j)
    slack: float  # amount by which the condition fails


def validate_metric(instance: WTspInstance, rtol: float = 1e-9) -> list:
    """All metric-axiom violations of the instance's distances.

    Triangle violations are reported once per unordered pair ``i < j``.
    """
    d = np.asarray(instance.distance, dtype=float)
    n = len(d)
    tol = rtol * max(1.0, float(np.abs(d).max()) if n else 1.0)
    out = []
    for i in np.flatnonzero(np.abs(np.diag(d)) > tol):
        out.append(Violation("diagonal", (int(i),), float(abs(d[i, i]))))
    if (d < -tol).any():
        for i, j in zip(*np.nonzero(d < -tol)):
            out.append(Violation("negative", (int(i), int(j)), float(-d[i, j])))
    asym = np.abs(d - d.T)
    for i, j in zip(*np.nonzero(np.triu(asym > tol, 1))):
        out.append(Violation("symmetry", (int(i), int(j)), float(asym[i, j])))
    for k in range(n):
        via = d[:, k][:, None] + d[k, :][None, :]
        excess = d - via
        bad = np.triu(excess > tol, 1)
        bad[k, :] = False
        bad[:, k] = False
        for i, j in zip(*np.nonzero(bad)):
            out.append(Violation("triangle", (int(i), k, int(j)), float(excess[i, j])))
    out.sort(key=lambda v: (v.kind, v.nodes))
    return out
