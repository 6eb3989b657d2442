"""Item clustering to shrink path instances before running the DP.

Items are grouped with k-means on the coordinates of their nodes.  Each
cluster becomes a single representative item at the member node nearest the
centroid, so the DP runs on about ``k`` nodes.  The reduced tour is then
expanded back to every original node and charged on the original instance.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .core import WTspInstance
from .path_dp import solve_fixed_start

DEFAULT_SEED = 42


# --------------------------------------------------------------------------
# k-means
# --------------------------------------------------------------------------

@dataclass
class KMeansResult:
    labels: np.ndarray
    centroids: np.ndarray
    iterations: int
    converged: bool
    history: list = field(default_factory=list)   # objective after each assignment


def _assign(points: np.ndarray, centroids: np.ndarray) -> np.ndarray:
    if points.shape[1] == 1:
        # 1-D: nearest centroid via the sorted midpoints, ties to the lower index
        c = centroids[:, 0]
        order = np.argsort(c, kind="stable")
        cs = c[order]
        mids = (cs[1:] + cs[:-1]) / 2
        slot = np.searchsorted(mids, points[:, 0], side="left")
        return order[slot]
    d2 = ((points[:, None, :] - centroids[None, :, :]) ** 2).sum(-1)
    return np.argmin(d2, axis=1)


def kmeans(points, k: int, seed: int = DEFAULT_SEED, max_iters: int = 100) -> KMeansResult:
    """Lloyd's algorithm seeded with ``k`` random distinct locations.

    ``points`` is ``(m,)`` or ``(m, dim)``.  A cluster that loses all its points
    keeps its previous centroid.
    """
    pts = np.asarray(points, dtype=float)
    if pts.ndim == 1:
        pts = pts[:, None]
    m = len(pts)
    if k <= 0:
        raise ValueError("k must be positive")
    if k > m:
        raise ValueError("k exceeds the number of points")
    rng = np.random.default_rng(seed)
    # seed from distinct locations first (items often share a node)
    uniq = np.unique(pts, axis=0)
    if k <= len(uniq):
        centroids = uniq[rng.choice(len(uniq), size=k, replace=False)].copy()
    else:
        extra = pts[rng.choice(m, size=k - len(uniq), replace=False)]
        centroids = np.concatenate([uniq, extra])
    history = []
    labels = None
    converged = False
    it = 0
    for it in range(1, max_iters + 1):
        new_labels = _assign(pts, centroids)
        history.append(float(((pts - centroids[new_labels]) ** 2).sum()))
        if labels is not None and np.array_equal(new_labels, labels):
            converged = True
            break
        labels = new_labels
        counts = np.bincount(labels, minlength=k)
        sums = np.zeros_like(centroids)
        np.add.at(sums, labels, pts)
        nonempty = counts > 0
        centroids[nonempty] = sums[nonempty] / counts[nonempty, None]
    return KMeansResult(labels, centroids, it, converged, history)


# --------------------------------------------------------------------------
# Clustered instances
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class Item:
    node: int
    weight: float
    profit: float = 0


@dataclass(frozen=True)
class Cluster:
    representative: int        # item id
    node: int                  # node of the representative item
    members: tuple             # item ids
    weight: float
    profit: float


@dataclass
class ClusterMapping:
    clusters: list
    item_nodes: tuple          # original node of every item

    def cluster_of_node(self) -> dict:
        out = {}
        for c, cl in enumerate(self.clusters):
            for it in cl.members:
                out.setdefault(self.item_nodes[it], c)
        return out

    def to_dict(self) -> dict:
        return {
            "item_nodes": list(self.item_nodes),
            "clusters": [
                {"representative": c.representative, "node": c.node,
                 "members": list(c.members), "weight": c.weight, "profit": c.profit}
                for c in self.clusters
            ],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ClusterMapping":
        clusters = [Cluster(c["representative"], c["node"], tuple(c["members"]),
                            c["weight"], c["profit"]) for c in d["clusters"]]
        return cls(clusters, tuple(d["item_nodes"]))

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)


def items_from_weights(instance: WTspInstance) -> list:
    """One item per node with positive weight."""
    return [Item(v, w) for v, w in enumerate(instance.weights.tolist()) if w > 0]


@dataclass
class ClusteredInstance:
    reduced: WTspInstance
    nodes: tuple               # reduced node index -> original node
    mapping: ClusterMapping


def build_clustered_instance(instance: WTspInstance, items: Sequence[Item] | None = None,
                             k: int | None = None, seed: int = DEFAULT_SEED,
                             split_at_start: bool = True) -> ClusteredInstance:
    """Cluster the items of a path instance into ``k`` groups (default ``ceil(sqrt(n))``).

    The reduced path instance has one node per distinct representative node
    plus the start node, carrying the summed cluster weights.
    """
    if instance.metric != "path":
        raise ValueError("clustering works on path instances")
    items = items_from_weights(instance) if items is None else list(items)
    k = math.ceil(math.sqrt(instance.n)) if k is None else k
    x = instance.positions.astype(float)
    if not items:
        reduced = WTspInstance.path([x[instance.start]], [0], instance.f, 0)
        return ClusteredInstance(reduced, (instance.start,), ClusterMapping([], ()))
    item_nodes = np.array([it.node for it in items])
    coords = x[item_nodes]
    k = min(k, len(items))
    km = kmeans(coords, k, seed=seed)
    # a cluster reaching across the start is split there: every tour passes
    # the start twice, so the two halves are collected on different legs
    groups = []
    xs = x[instance.start]
    for c in range(k):
        members = np.flatnonzero(km.labels == c)
        left = members[coords[members] < xs]
        right = members[coords[members] >= xs]
        if split_at_start and len(left) and len(right):
            groups.extend([left, right])
        elif len(members):
            groups.append(members)
    clusters = []
    for members in groups:
        centroid = coords[members].mean()
        # representative: member whose node is nearest the centroid (lowest id on ties)
        rep = int(members[np.argmin(np.abs(coords[members] - centroid))])
        clusters.append(Cluster(
            representative=rep,
            node=int(item_nodes[rep]),
            members=tuple(int(i) for i in members),
            weight=sum(items[i].weight for i in members),
            profit=sum(items[i].profit for i in members),
        ))
    nodes = sorted({c.node for c in clusters} | {instance.start})
    index = {v: i for i, v in enumerate(nodes)}
    weights = [0] * len(nodes)
    for c in clusters:
        weights[index[c.node]] += c.weight
    reduced = WTspInstance.path(instance.positions[nodes], weights, instance.f,
                                index[instance.start], name=instance.name + "-clustered")
    return ClusteredInstance(reduced, tuple(nodes),
                             ClusterMapping(clusters, tuple(int(v) for v in item_nodes)))


def expand_tour(reduced_tour, clustered: ClusteredInstance, instance: WTspInstance) -> tuple:
    """Full tour of ``instance`` from a tour of the reduced instance.

    When a representative node is reached, every not-yet-visited node holding
    items of its cluster is visited in one sweep, in the direction the tour
    takes when it leaves the representative (towards the next stop).  Nodes without items are inserted where the tour passes over them
    (or as a short detour beyond the outermost stop).
    """
    x = instance.positions.astype(float)
    mapping = clustered.mapping
    nodes_of = {}
    for cl in mapping.clusters:
        nodes_of.setdefault(cl.node, set()).update(mapping.item_nodes[i] for i in cl.members)
    for v in clustered.nodes:
        if v not in range(instance.n):
            raise ValueError("mapping does not match the instance")

    start = instance.start
    seq = [start]
    seen = {start}
    stops = [clustered.nodes[rv] for rv in reduced_tour[1:]]
    for k, v in enumerate(stops):
        group = [u for u in nodes_of.get(v, ()) if u not in seen]
        if v not in seen and v not in group:
            group.append(v)
        # sweep towards the next stop (the start after the last one)
        nxt = stops[k + 1] if k + 1 < len(stops) else start
        right = x[nxt] >= x[v]
        group.sort(key=lambda u: (x[u], u), reverse=not right)
        seq.extend(group)
        seen.update(group)
    # nodes not holding any clustered item
    rest = [u for u in range(instance.n) if u not in seen]
    if rest:
        seq = _insert_free_nodes(seq, rest, x)
    return tuple(seq)


def _insert_free_nodes(seq: list, rest: list, x: np.ndarray) -> list:
    """Insert zero-load nodes where the closed tour passes over them."""
    pending = sorted(rest, key=lambda u: (x[u], u))
    placed = {}
    m = len(seq)
    for e in range(m):
        a, b = seq[e], seq[(e + 1) % m]
        lo, hi = sorted((x[a], x[b]))
        if not pending:
            break
        take = [u for u in pending if lo <= x[u] <= hi]
        if take:
            take.sort(key=lambda u: (x[u], u), reverse=bool(x[b] < x[a]))
            placed[e] = take
            taken = set(take)
            pending = [u for u in pending if u not in taken]
    if pending:
        # beyond the outermost stops: detour from the extreme stop
        left = [u for u in pending if x[u] < min(x[s] for s in seq)]
        right = [u for u in pending if u not in left]
        if left:
            e = min(range(m), key=lambda i: (x[seq[i]], i))
            placed.setdefault(e, [])
            placed[e] = sorted(left, key=lambda u: (x[u], u), reverse=True) + placed[e]
        if right:
            e = max(range(m), key=lambda i: (x[seq[i]], -i))
            placed.setdefault(e, [])
            placed[e] = sorted(right, key=lambda u: (x[u], u)) + placed[e]
    out = []
    for e, v in enumerate(seq):
        out.append(v)
        out.extend(placed.get(e, ()))
    return out


@dataclass
class ClusteredSolution:
    tour: tuple
    cost: float
    reduced_tour: tuple
    reduced_cost: float
    clustered: ClusteredInstance


def solve_clustered(instance: WTspInstance, items: Sequence[Item] | None = None,
                    k: int | None = None, seed: int = DEFAULT_SEED,
                    split_at_start: bool = True) -> ClusteredSolution:
    """Cluster, solve the reduced instance exactly, expand, and price on the original."""
    from .core import tour_cost

    ci = build_clustered_instance(instance, items, k, seed, split_at_start)
    rtour, rcost = solve_fixed_start(ci.reduced)
    tour = expand_tour(rtour, ci, instance)
    return ClusteredSolution(tour, tour_cost(instance, tour), rtour, rcost, ci)


def synthetic_instance(n: int, items_per_node: int = 5, seed: int = DEFAULT_SEED,
                       span: float = 1000.0, nu_min: float = 0.1, nu_max: float = 1.0,
                       depot: str = "random"):
    """A depot (node 0) plus ``n - 1`` uniformly random nodes on ``[0, span]``.

    ``depot="random"`` draws the depot position like any other node and
    ``depot="end"`` puts it at coordinate 0.  Every other node holds
    ``items_per_node`` items with integer weights and profits in ``[1, 100]``.
    The cost is linear speed decrease with ``W_ref`` equal to the total
    weight.  Returns ``(instance, items)``.
    """
    from .core import LinearSpeedCost

    if depot not in ("random", "end"):
        raise ValueError("depot must be 'random' or 'end'")
    rng = np.random.default_rng(seed)
    x = rng.uniform(0, span, size=n)
    if depot == "end":
        x[0] = 0.0
    items = []
    for v in range(1, n):
        for w, p in zip(rng.integers(1, 101, size=items_per_node).tolist(),
                        rng.integers(1, 101, size=items_per_node).tolist()):
            items.append(Item(v, w, p))
    weights = np.zeros(n, dtype=np.int64)
    for it in items:
        weights[it.node] += it.weight
    f = LinearSpeedCost(nu_max, nu_min, max(int(weights.sum()), 1))
    inst = WTspInstance.path(x, weights, f, start=0, name=f"synthetic-{n}-{seed}")
    return inst, items
