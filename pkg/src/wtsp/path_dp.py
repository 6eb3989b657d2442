"""Exact interval dynamic program for the weighted TSP on a path metric.

Some optimal tour always collects the current leftmost or rightmost
uncollected node next.  So the uncollected nodes form an interval
``[i, j]`` of the left-to-right order, and the agent stands at one of its ends.
``g(i, j, side)`` is the cheapest way to collect the interval (starting with
the node at ``side``) and then walk back to the start ``t``.  The weight
outside the interval is already on board, except for ``t``'s own weight,
which is collected when the tour closes.

Fixed start: ``O(n^2)`` states, each with two ``O(1)`` transitions.  Free
start: one fixed-start solve per node, ``O(n^3)``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import WTspInstance

LEFT, RIGHT = 0, 1
ADJACENT, FAR = 0, 1


def _require_path(instance: WTspInstance):
    if instance.metric != "path":
        raise ValueError("path DP needs a path-metric instance")


@dataclass
class DpTable:
    """Full table of ``g(i, j, side)`` values (indices into ``order``).

    ``value[side][i, j]`` and ``move[side][i, j]`` are defined for ``i <= j``;
    entries below the diagonal are ``nan`` / ``-1``.  ``move`` is ``ADJACENT``
    (next node is the neighbour inside the interval) or ``FAR`` (next node is
    the opposite end).
    """

    order: np.ndarray
    x: list
    w: list            # weights along ``order`` with the start's weight zeroed
    start: int
    start_pos: int
    value: tuple       # (left table, right table)
    move: tuple
    cost: float
    first_side: int

    @property
    def n(self):
        return len(self.order)

    def entries(self) -> int:
        return int(sum(np.count_nonzero(~np.isnan(v)) for v in self.value))


def _solve(instance: WTspInstance, t: int, keep_table: bool = False):
    """Run the DP for start ``t``.

    Returns ``(cost, path, table)`` where ``path`` is the collection order as
    positions in ``instance.path_order`` (it contains ``t``'s own position,
    at which nothing is collected).
    """
    order = instance.path_order
    n = len(order)
    x = instance.positions[order].tolist()
    w = instance.weights[order].tolist()
    tp = int(np.flatnonzero(order == t)[0])
    w[tp] = 0
    xt = x[tp]
    f = instance.f

    prefix = [0] * (n + 1)
    for k in range(n):
        prefix[k + 1] = prefix[k] + w[k]
    total = prefix[n]
    prefix_arr = np.asarray(prefix)

    # rows of the interval length currently being filled; index = left end i
    f_total = f(total)
    gl = [0 if x[k] == xt else abs(x[k] - xt) * f_total for k in range(n)]
    gr = list(gl)
    moves_l = [bytes(n)]
    moves_r = [bytes(n)]
    if keep_table:
        tab_l = np.full((n, n), np.nan)
        tab_r = np.full((n, n), np.nan)
        mv_l = np.full((n, n), -1, dtype=np.int8)
        mv_r = np.full((n, n), -1, dtype=np.int8)
        idx = np.arange(n)
        tab_l[idx, idx] = gl
        tab_r[idx, idx] = gr
        mv_l[idx, idx] = ADJACENT
        mv_r[idx, idx] = ADJACENT

    for length in range(1, n):
        cnt = n - length
        i_arr = np.arange(cnt)
        # weight on board right after collecting the left end: everything
        # except the interval [i+1, j]; after the right end: except [i, j-1]
        fl = f(total - (prefix_arr[i_arr + length + 1] - prefix_arr[i_arr + 1])).tolist()
        fr = f(total - (prefix_arr[i_arr + length] - prefix_arr[i_arr])).tolist()
        new_l = [0.0] * cnt
        new_r = [0.0] * cnt
        ml = bytearray(cnt)
        mr = bytearray(cnt)
        for i in range(cnt):
            j = i + length
            span = x[j] - x[i]
            # collect v_i first
            rate = fl[i]
            gap = x[i + 1] - x[i]
            adj = (rate * gap if gap else 0) + gl[i + 1]
            far = (rate * span if span else 0) + gr[i + 1]
            if far < adj:
                new_l[i] = far
                ml[i] = FAR
            else:
                new_l[i] = adj
            # collect v_j first
            rate = fr[i]
            gap = x[j] - x[j - 1]
            adj = (rate * gap if gap else 0) + gr[i]
            far = (rate * span if span else 0) + gl[i]
            if far < adj:
                new_r[i] = far
                mr[i] = FAR
            else:
                new_r[i] = adj
        gl, gr = new_l, new_r
        moves_l.append(bytes(ml))
        moves_r.append(bytes(mr))
        if keep_table:
            tab_l[i_arr, i_arr + length] = gl
            tab_r[i_arr, i_arr + length] = gr
            mv_l[i_arr, i_arr + length] = np.frombuffer(ml, dtype=np.int8)
            mv_r[i_arr, i_arr + length] = np.frombuffer(mr, dtype=np.int8)

    f0 = f(0)
    lead_l = x[tp] - x[0]
    lead_r = x[n - 1] - x[tp]
    cost_l = (f0 * lead_l if lead_l else 0) + gl[0]
    cost_r = (f0 * lead_r if lead_r else 0) + gr[0]
    side = RIGHT if cost_r < cost_l else LEFT
    cost = cost_r if side == RIGHT else cost_l

    # traceback
    path = []
    i, j, s = 0, n - 1, side
    while True:
        length = j - i
        if s == LEFT:
            path.append(i)
            if length == 0:
                break
            mv = moves_l[length][i]
            i += 1
            s = RIGHT if mv == FAR else LEFT
        else:
            path.append(j)
            if length == 0:
                break
            mv = moves_r[length][i]
            j -= 1
            s = LEFT if mv == FAR else RIGHT

    table = None
    if keep_table:
        table = DpTable(order=np.asarray(order), x=x, w=w, start=t, start_pos=tp,
                        value=(tab_l, tab_r), move=(mv_l, mv_r), cost=cost, first_side=side)
    return cost, path, table


def _path_to_tour(instance: WTspInstance, t: int, path: list) -> tuple:
    order = instance.path_order
    return (t,) + tuple(int(order[p]) for p in path if order[p] != t)


def solve_fixed_start(instance: WTspInstance, t: int | None = None):
    """Optimal tour starting (and ending) at ``t``; returns ``(tour, cost)``.

    ``t`` defaults to ``instance.start``.
    """
    _require_path(instance)
    t = instance.start if t is None else int(t)
    if not 0 <= t < instance.n:
        raise ValueError(f"start {t} out of range")
    cost, path, _ = _solve(instance, t)
    return _path_to_tour(instance, t, path), cost


def solve_free_start(instance: WTspInstance):
    """Best tour over all start nodes; returns ``(tour, cost, start)``.

    Ties go to the smallest start index.
    """
    _require_path(instance)
    best = None
    for t in range(instance.n):
        tour, cost = solve_fixed_start(instance, t)
        if best is None or cost < best[1]:
            best = (tour, cost, t)
    return best


def dp_table(instance: WTspInstance, t: int | None = None) -> DpTable:
    """Complete DP table for start ``t`` (for inspection and white-box tests)."""
    _require_path(instance)
    t = instance.start if t is None else int(t)
    return _solve(instance, t, keep_table=True)[2]


def zigzag_violations(instance: WTspInstance, tour) -> list:
    """Steps at which ``tour`` collects a node that is neither the leftmost nor
    the rightmost uncollected one (the start node is not counted).

    Positions are ranks in ``instance.path_order``, so coincident coordinates
    are told apart by index.
    """
    _require_path(instance)
    rank = np.empty(instance.n, dtype=np.int64)
    rank[instance.path_order] = np.arange(instance.n)
    remaining = sorted(int(rank[v]) for v in tour[1:])
    lo, hi = 0, len(remaining) - 1
    bad = []
    for step, v in enumerate(tour[1:], start=1):
        r = int(rank[v])
        if r == remaining[lo]:
            lo += 1
        elif r == remaining[hi]:
            hi -= 1
        else:
            bad.append(step)
            remaining.remove(r)
            hi -= 1
    return bad


def premature_exchange(instance: WTspInstance, tour):
    """One exchange step that removes a premature visit, or ``None``.

    A node ``v_j`` is visited prematurely when it is collected before some node
    to its left and some node to its right.  If the last collected node lies
    left of ``v_j``, ``v_j`` is moved to right after ``v_k``, the last
    collected node to its right (mirror image otherwise).  The result is never
    more expensive.
    """
    _require_path(instance)
    rank = np.empty(instance.n, dtype=np.int64)
    rank[instance.path_order] = np.arange(instance.n)
    seq = list(tour[1:])
    for idx, v in enumerate(seq):
        later = seq[idx + 1:]
        if any(rank[u] < rank[v] for u in later) and any(rank[u] > rank[v] for u in later):
            last = seq[-1]
            if rank[last] < rank[v]:
                k = max(i for i, u in enumerate(seq) if rank[u] > rank[v])
            else:
                k = max(i for i, u in enumerate(seq) if rank[u] < rank[v])
            new = seq[:idx] + seq[idx + 1:k + 1] + [v] + seq[k + 1:]
            return (tour[0],) + tuple(new)
    return None
