"""Restricted shortest paths over two additive metrics (length, time).

The task: minimize path length subject to a budget on path time.  Two
solvers share one Pareto label-setting engine over integer budget units:

* ``rsp_exact`` — quantizes times onto a grid (``TimeGrid``) and is exact for
  that quantized problem.  With integer times and ``delta=1`` it is exact
  outright.  Times are rounded *up*, so answers never cheat the true budget
  by more than a 1e-12 relative sliver (see the nudge note below).
* ``rsp_fptas`` — the scaled dynamic program with geometric range bisection:
  test runs narrow [LB, UB] to a factor 2, a final fine-scaled run yields
  length ≤ (1+eta)·OPT.  Feasibility is always judged on unquantized times,
  so it returns a path whenever the exact solver would.

The engine pops labels ordered by (cost, budget).  Accepted budgets at a node
strictly decrease over time, so a popped label is dominated exactly when its
budget is not below the node's smallest accepted budget — an O(1) test.

Nudge note: ratios like t/delta are computed as ceil(x·(1−1e-12)) and caps as
floor(x·(1+1e-12)).  When x is an exact grid multiple the float division may
land a hair above or below the integer; the nudge makes such boundary cases
deterministic instead of noise-driven, at the price of a 1e-12 relative
loosening that every caller's tolerance dwarfs.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass

from .network import Path

_NUDGE = 1e-12
_SLACK = 1.0 + 4e-12  # shared budget slack so both solvers agree at razor edges


def _ceil_div(x: float) -> int:
    return math.ceil(x * (1.0 - _NUDGE))


def _floor_div(x: float) -> int:
    return math.floor(x * (1.0 + _NUDGE))


@dataclass(frozen=True)
class BiLink:
    """One directed link carrying both metrics; ``key`` is caller-owned."""

    src: str
    dst: str
    length: float
    time: float
    key: object = None


@dataclass(frozen=True)
class BiMetricGraph:
    """Directed multigraph (parallel links allowed) with fixed endpoints."""

    nodes: tuple[str, ...]
    links: tuple[BiLink, ...]
    source: str
    target: str


@dataclass(frozen=True)
class TimeGrid:
    """Quantization step for the exact solver's time dimension."""

    delta: float

    def __post_init__(self) -> None:
        if not (self.delta > 0.0):
            raise ValueError(f"grid step must be positive, got {self.delta}")

    @staticmethod
    def for_budget(budget: float, n_links: int, quanta_per_link: int = 1000) -> "TimeGrid":
        """Default grid: the budget split into n_links * quanta_per_link cells,
        so per-path rounding error stays below budget / quanta_per_link."""
        if budget <= 0.0 or n_links <= 0:
            return TimeGrid(1.0)
        return TimeGrid(budget / (n_links * quanta_per_link))


@dataclass(frozen=True)
class RspSolution:
    path: Path
    links: tuple[BiLink, ...]
    total_length: float
    total_time: float


def _check_graph(g: BiMetricGraph) -> None:
    for l in g.links:
        if l.time < 0.0 or l.length < 0.0:
            raise ValueError(f"negative metric on link {l.src}->{l.dst}")
    if g.source not in g.nodes or g.target not in g.nodes:
        raise ValueError("source/target missing from node list")


def _trivial(g: BiMetricGraph) -> RspSolution:
    return RspSolution(Path((g.source,)), (), 0.0, 0.0)


# Each label is (node, cost, budget_used, parent_label, link_index).
_Label = tuple[str, float, int, int, int]


def _pareto_run(
    g: BiMetricGraph,
    qs: list[int],
    costs: list[float],
    cap: int,
    stop_first: bool = True,
    cost_limit: float | None = None,
) -> tuple[list[int], list[_Label]]:
    """Min-cost labels subject to an integer budget cap.

    Returns (indices of target labels in pop order, all labels).  With
    ``stop_first`` the search ends at the first target pop (the min-cost
    feasible label); otherwise every Pareto-optimal target label pops.
    """
    adj: dict[str, list[int]] = {v: [] for v in g.nodes}
    for i, l in enumerate(g.links):
        if qs[i] <= cap:
            adj[l.src].append(i)
    labels: list[_Label] = [(g.source, 0.0, 0, -1, -1)]
    heap: list[tuple[float, int, int, int]] = [(0.0, 0, 0, 0)]
    seq = 0
    min_budget: dict[str, int] = {}
    hits: list[int] = []
    big = cap + 1
    while heap:
        cost, used, _, idx = heapq.heappop(heap)
        node = labels[idx][0]
        if used >= min_budget.get(node, big):
            continue
        min_budget[node] = used
        if node == g.target:
            hits.append(idx)
            if stop_first:
                break
            continue  # extending past the target never helps: both metrics grow
        for i in adj[node]:
            link = g.links[i]
            used2 = used + qs[i]
            if used2 > cap or used2 >= min_budget.get(link.dst, big):
                continue
            cost2 = cost + costs[i]
            if cost_limit is not None and cost2 > cost_limit:
                continue
            seq += 1
            labels.append((link.dst, cost2, used2, idx, i))
            heapq.heappush(heap, (cost2, used2, seq, len(labels) - 1))
    return hits, labels


def _rebuild(g: BiMetricGraph, labels: list[_Label], idx: int) -> RspSolution:
    picks: list[int] = []
    while idx >= 0:
        _, _, _, parent, li = labels[idx]
        if li >= 0:
            picks.append(li)
        idx = parent
    picks.reverse()
    links = tuple(g.links[i] for i in picks)
    nodes = (g.source,) + tuple(l.dst for l in links)
    return RspSolution(
        Path(nodes),
        links,
        float(sum(l.length for l in links)),
        float(sum(l.time for l in links)),
    )


def rsp_exact(g: BiMetricGraph, budget: float, grid: TimeGrid | None = None) -> RspSolution | None:
    """Minimum-length path whose grid-rounded time fits the budget.

    Semantics are defined on the quantized problem: a path is feasible when
    sum(ceil(t_e/delta)) * delta <= budget.  With integer times and delta=1
    that's plain exactness.  None when no feasible path exists.
    """
    _check_graph(g)
    if budget < 0.0:
        return None
    if g.source == g.target:
        return _trivial(g)
    if grid is None:
        grid = TimeGrid.for_budget(budget, len(g.links))
    delta = grid.delta
    cap = _floor_div(budget / delta)
    qs = [0 if l.time == 0.0 else _ceil_div(l.time / delta) for l in g.links]
    costs = [l.length for l in g.links]
    hits, labels = _pareto_run(g, qs, costs, cap)
    if not hits:
        return None
    return _rebuild(g, labels, hits[0])


def _dijkstra_two_key(
    g: BiMetricGraph, primary: str
) -> tuple[dict[str, tuple[float, float]], dict[str, tuple[int, int]]]:
    """Lexicographic Dijkstra by (primary metric, other metric).

    Returns per-node (time, length) totals — always in that order — plus a
    parent map node -> (parent node label irrelevant, link index).
    """
    def key_of(t: float, l: float) -> tuple[float, float]:
        return (t, l) if primary == "time" else (l, t)

    adj: dict[str, list[int]] = {v: [] for v in g.nodes}
    for i, l in enumerate(g.links):
        adj[l.src].append(i)
    best: dict[str, tuple[float, float]] = {g.source: (0.0, 0.0)}
    parent: dict[str, tuple[int, int]] = {}
    done: set[str] = set()
    heap: list[tuple[tuple[float, float], int, str]] = [(key_of(0.0, 0.0), 0, g.source)]
    seq = 0
    while heap:
        _, _, node = heapq.heappop(heap)
        if node in done:
            continue
        done.add(node)
        t0, l0 = best[node]
        for i in adj[node]:
            link = g.links[i]
            t2, l2 = t0 + link.time, l0 + link.length
            y = link.dst
            if y in done:
                continue
            if y not in best or key_of(t2, l2) < key_of(*best[y]):
                best[y] = (t2, l2)
                parent[y] = (i, 0)
                seq += 1
                heapq.heappush(heap, (key_of(t2, l2), seq, y))
    return {v: best[v] for v in done}, parent


def _path_from_parents(
    g: BiMetricGraph, parent: dict[str, tuple[int, int]], target: str
) -> RspSolution:
    picks: list[int] = []
    node = target
    while node != g.source:
        i, _ = parent[node]
        picks.append(i)
        node = g.links[i].src
    picks.reverse()
    links = tuple(g.links[i] for i in picks)
    nodes = (g.source,) + tuple(l.dst for l in links)
    return RspSolution(
        Path(nodes),
        links,
        float(sum(l.length for l in links)),
        float(sum(l.time for l in links)),
    )


def rsp_fptas(g: BiMetricGraph, budget: float, eta: float) -> RspSolution | None:
    """Budget-feasible path with length at most (1+eta) times the optimum.

    Absent exactly when no path meets the time budget, judged on raw times
    (so never absent where ``rsp_exact`` succeeds).  When every length is an
    integer and the final scale drops below 1 the run is exact instead of
    approximate — rounding at scale 1 is the identity on integers.
    """
    _check_graph(g)
    if eta <= 0.0:
        raise ValueError(f"eta must be positive, got {eta}")
    if budget < 0.0:
        return None
    if g.source == g.target:
        return _trivial(g)
    limit = budget * _SLACK

    best, parent = _dijkstra_two_key(g, "time")
    if g.target not in best or best[g.target][0] > limit:
        return None
    ub_sol = _path_from_parents(g, parent, g.target)

    # All-zero-length reachability: if the target is reachable in time within
    # the zero-length subgraph, OPT is 0 and that path is already optimal.
    zg = BiMetricGraph(g.nodes, tuple(l for l in g.links if l.length == 0.0), g.source, g.target)
    zbest, zparent = _dijkstra_two_key(zg, "time")
    if g.target in zbest and zbest[g.target][0] <= limit:
        return _path_from_parents(zg, zparent, g.target)

    lbest, lparent = _dijkstra_two_key(g, "length")
    if lbest[g.target][0] <= limit:
        # The unconstrained length optimum happens to fit the time budget
        # (tuples are (time, length); ties favored the faster path).
        return _path_from_parents(g, lparent, g.target)
    # The unconstrained minimum is a lower bound; since the zero-length check
    # failed, any feasible path also pays for at least one positive link.
    min_pos = min(l.length for l in g.links if l.length > 0.0)
    lo = max(lbest[g.target][1], min_pos)
    hi = ub_sol.total_length
    n1 = len(g.nodes) + 1
    times = [l.time for l in g.links]

    def test(value: float) -> bool:
        theta = value / n1
        qs = [0 if l.length == 0.0 else math.floor((l.length / theta) * (1.0 - _NUDGE)) for l in g.links]
        hits, _ = _pareto_run(g, qs, times, n1, stop_first=True, cost_limit=limit)
        return bool(hits)

    # Geometric bisection on the midpoint of (lo, hi/2): a passing test at V
    # proves OPT < 2V (floor rounding undershoots by at most one grid step per
    # link), a failing one proves OPT > V, and either branch maps the ratio
    # hi/lo to sqrt(2 * hi/lo), which falls to 2.  The 4e-12 pad on the upper
    # bound absorbs the rounding nudge inside ``test`` without stalling the
    # exit check, which tolerates a full 1e-9.
    while hi > 2.0 * lo * (1.0 + 1e-9):
        mid = math.sqrt(lo * hi / 2.0)
        if test(mid):
            hi = 2.0 * mid * (1.0 + 4e-12)
        else:
            lo = mid

    theta = lo * eta / n1
    if theta < 1.0 and all(float(l.length).is_integer() for l in g.links):
        theta = 1.0  # integer lengths: scale 1 makes the run exact
    qs = [0 if l.length == 0.0 else _ceil_div(l.length / theta) for l in g.links]
    cap = _floor_div(hi / theta) + len(g.nodes) + 1
    hits, labels = _pareto_run(g, qs, times, cap, stop_first=False, cost_limit=limit)
    assert hits, "final scaled run must reach the target (the UB path fits)"
    # Pops arrive time-ordered with strictly decreasing scaled length, so the
    # last hit has the smallest scaled length among budget-feasible labels.
    return _rebuild(g, labels, hits[-1])
