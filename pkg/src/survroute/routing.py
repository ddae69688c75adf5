"""Survivable connection routing with a tunable survivability/weight trade.

The solver reduces each problem to a two-metric shortest path on a
*transformed* network whose links are of two kinds:

* simple links — one original link used by both paths of the connection
  (a shared, and therefore survivability-relevant, hop);
* disjoint links — a minimum-weight pair of link-disjoint segments between
  two nodes, contributing full protection and no survivability loss.

A path in the transformed network alternates these and expands back into an
ordered pair of paths.  Weight is counted either once per common link ("co")
or twice ("ct"); survivability of the result is the product of (1 - p_e)
over the common links.  The "ct" variant restricts the transformed graph to
the nodes of one fixed min-weight path, which keeps it small; its optima are
provably as good as unrestricted ones for the twice-counted objective.

Two solve modes everywhere: exact (grid-quantized time dimension) and an
epsilon-approximate mode built on the scaled engine.  All returned metrics
are recomputed from the expanded connection; the transformed claim is kept
alongside for diagnostics.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

from .network import (
    Network,
    Path,
    SurvivableConnection,
    co_weight,
    ct_weight,
    path_weight,
    s_min_bound,
    surv_ge,
    survivability_level,
)
from .paths import Edsp, dijkstra, edsp, shortest_path
from .rsp import BiLink, BiMetricGraph, RspSolution, TimeGrid, rsp_exact, rsp_fptas

VARIANTS = ("co", "ct")


@dataclass(frozen=True)
class SimpleTag:
    """Transformed link standing for one shared original link."""

    src: str
    dst: str


@dataclass(frozen=True)
class DisjointTag:
    """Transformed link standing for a protected disjoint segment pair."""

    pair: Edsp


@dataclass(frozen=True)
class TransformedNetwork:
    net: Network
    graph: BiMetricGraph
    variant: str
    pi_min: Path | None  # the restricting min-weight path ("ct" only)


@dataclass(frozen=True)
class RoutingAnswer:
    """A solved connection with honestly recomputed metrics.

    ``transformed_length``/``transformed_time`` echo what the reduction
    claimed; they agree with the recomputed numbers whenever the two paths
    don't smuggle one original link into two different segments.
    ``simple_paths`` records whether both expanded paths are node-simple.
    """

    connection: SurvivableConnection
    survivability: float
    co_weight: int
    ct_weight: int
    simple_paths: bool
    transformed_length: float
    transformed_time: float


def link_time(fail_prob: float) -> float:
    """Additive survivability measure of one shared link: -ln(1 - p)."""
    return -math.log1p(-fail_prob)


def build_transformed(
    net: Network, source: str, target: str, variant: str = "co"
) -> TransformedNetwork | None:
    """Build the two-metric graph for the chosen weight variant.

    None when the target is unreachable (no connection exists at all).
    """
    if variant not in VARIANTS:
        raise ValueError(f"variant must be one of {VARIANTS}, got {variant!r}")
    if source not in net.nodes or target not in net.nodes:
        raise KeyError(f"unknown endpoint {source!r} or {target!r}")
    links: list[BiLink] = []
    if variant == "co":
        if target not in dijkstra(net, source):
            return None
        nodes = tuple(sorted(net.nodes))
        for l in net.links:
            links.append(BiLink(l.src, l.dst, float(l.weight), link_time(l.fail_prob),
                                SimpleTag(l.src, l.dst)))
        pi_min = None
    else:
        found = shortest_path(net, source, target)
        if found is None:
            return None
        pi_min = found[0]
        nodes = pi_min.nodes
        for u, v in pi_min.links:
            l = net.link(u, v)
            links.append(BiLink(u, v, 2.0 * l.weight, link_time(l.fail_prob),
                                SimpleTag(u, v)))
    for u in nodes:
        dist_u = dijkstra(net, u)
        for v in nodes:
            if v == u or v not in dist_u:
                continue
            pair = edsp(net, u, v, dist_hint=dist_u)
            if pair is not None:
                links.append(BiLink(u, v, float(pair.total_weight), 0.0, DisjointTag(pair)))
    graph = BiMetricGraph(nodes, tuple(links), source, target)
    return TransformedNetwork(net, graph, variant, pi_min)


def reconstruct(tn: TransformedNetwork, sol: RspSolution, swapped: bool = False) -> RoutingAnswer:
    """Expand a transformed-path solution into a connection and re-derive its
    metrics from the original network.  ``swapped`` marks solutions of the
    budget-variant engine run, whose two metrics trade places."""
    first: list[str] = [tn.graph.source]
    second: list[str] = [tn.graph.source]
    for bl in sol.links:
        tag = bl.key
        if isinstance(tag, SimpleTag):
            first.append(tag.dst)
            second.append(tag.dst)
        elif isinstance(tag, DisjointTag):
            first.extend(tag.pair.path_a.nodes[1:])
            second.extend(tag.pair.path_b.nodes[1:])
        else:  # pragma: no cover
            raise TypeError(f"unexpected transformed-link tag {tag!r}")
    conn = SurvivableConnection(Path(tuple(first)), Path(tuple(second)))
    claimed_length = sol.total_time if swapped else sol.total_length
    claimed_time = sol.total_length if swapped else sol.total_time
    return RoutingAnswer(
        connection=conn,
        survivability=survivability_level(tn.net, conn),
        co_weight=co_weight(tn.net, conn),
        ct_weight=ct_weight(tn.net, conn),
        simple_paths=conn.first.is_simple() and conn.second.is_simple(),
        transformed_length=claimed_length,
        transformed_time=claimed_time,
    )


def _trivial_answer(node: str) -> RoutingAnswer:
    p = Path((node,))
    conn = SurvivableConnection(p, p)
    return RoutingAnswer(conn, 1.0, 0, 0, True, 0.0, 0.0)


def _swap_metrics(g: BiMetricGraph) -> BiMetricGraph:
    swapped = tuple(BiLink(l.src, l.dst, l.time, l.length, l.key) for l in g.links)
    return BiMetricGraph(g.nodes, swapped, g.source, g.target)


def _qamsc_eta(net: Network, epsilon: float) -> float:
    # A (1+eta) overshoot on the summed -ln(1-p) metric costs at most a
    # (1+epsilon) factor of survivability as long as every connection's
    # survivability is at least the global floor (1-p_max)^M.
    floor = s_min_bound(net)
    return math.log1p(epsilon) / -math.log(floor)


def _solve_qamsc(
    tn: TransformedNetwork, bound: float, epsilon: float | None
) -> RoutingAnswer | None:
    g = _swap_metrics(tn.graph)
    if epsilon is None:
        sol = rsp_exact(g, float(bound), TimeGrid(1.0))
    else:
        sol = rsp_fptas(g, float(bound), _qamsc_eta(tn.net, epsilon))
    if sol is None:
        return None
    return reconstruct(tn, sol, swapped=True)


def _solve_tscmq(
    tn: TransformedNetwork, level: float, epsilon: float | None, quanta: int
) -> RoutingAnswer | None:
    budget = abs(-math.log(level))
    if epsilon is None:
        grid = TimeGrid.for_budget(budget, len(tn.graph.links), quanta)
        sol = rsp_exact(tn.graph, budget, grid)
    else:
        sol = rsp_fptas(tn.graph, budget, epsilon)
    if sol is None:
        return None
    return reconstruct(tn, sol)


def _check_level(level: float) -> None:
    if not (0.0 < level <= 1.0):
        raise ValueError(f"survivability level must lie in (0, 1], got {level}")


def qamsc(
    net: Network,
    source: str,
    target: str,
    bound: float,
    variant: str = "co",
    epsilon: float | None = None,
) -> RoutingAnswer | None:
    """Most survivable connection whose weight fits the budget.

    Exact when ``epsilon`` is None (integer weights make the budget dimension
    loss-free); otherwise survivability is within a (1+epsilon) factor of the
    optimum.  None when the target is unreachable or the budget is too small
    for any connection.
    """
    if source == target:
        return _trivial_answer(source)
    if bound < 0:
        return None
    tn = build_transformed(net, source, target, variant)
    if tn is None:
        return None
    return _solve_qamsc(tn, bound, epsilon)


def tscmq(
    net: Network,
    source: str,
    target: str,
    level: float,
    variant: str = "co",
    epsilon: float | None = None,
    quanta: int = 1000,
) -> RoutingAnswer | None:
    """Cheapest connection with survivability at least ``level``.

    The exact mode solves on a conservative time grid (``quanta`` cells per
    link), so the answer always truly meets the level; raising ``quanta``
    tightens the residual optimality gap.  With ``epsilon`` the weight is
    within (1+epsilon) of the optimum instead.  None when no connection can
    reach the level (never happens below 1.0 if any connection exists, since
    a disjoint pair has survivability 1; absent a disjoint pair, levels above
    the best shared-link product are infeasible).
    """
    _check_level(level)
    if source == target:
        return _trivial_answer(source)
    tn = build_transformed(net, source, target, variant)
    if tn is None:
        return None
    return _solve_tscmq(tn, level, epsilon, quanta)


def tscmq_sweep(
    net: Network,
    source: str,
    target: str,
    levels: list[float],
    variant: str = "ct",
    epsilon: float | None = None,
    quanta: int = 1000,
) -> list[RoutingAnswer | None]:
    """Solve the level-constrained problem for many levels at once, building
    the transformed network a single time (the per-level work is just one
    engine run)."""
    for level in levels:
        _check_level(level)
    if source == target:
        return [_trivial_answer(source) for _ in levels]
    tn = build_transformed(net, source, target, variant)
    if tn is None:
        return [None for _ in levels]
    return [_solve_tscmq(tn, level, epsilon, quanta) for level in levels]


def csmmq_2approx(
    net: Network,
    source: str,
    target: str,
    level: float,
    epsilon: float | None = None,
) -> RoutingAnswer | None:
    """Connection meeting ``level`` whose heavier path is at most twice the
    lightest achievable maximum path weight.

    Runs the twice-counted cheapest solve, then orders the pair so the first
    path is the lighter one: since W(first) + W(second) is at most the
    doubled-optimum of the min-max problem, W(second) is at most twice the
    min-max optimum.
    """
    ans = tscmq(net, source, target, level, variant="ct", epsilon=epsilon)
    if ans is None:
        return None
    a, b = ans.connection.first, ans.connection.second
    wa, wb = path_weight(net, a), path_weight(net, b)
    if (wb, b.nodes) < (wa, a.nodes):
        a, b = b, a
    return replace(ans, connection=SurvivableConnection(a, b))


def max_path_weight(net: Network, conn: SurvivableConnection) -> int:
    return max(path_weight(net, conn.first), path_weight(net, conn.second))


def rwsc_decide(net: Network, source: str, target: str, bound: float, level: float) -> bool:
    """Does any connection satisfy weight (twice-counted) <= bound and
    survivability >= level?  Decided through the exact budget solve, whose
    weight dimension carries no quantization at all."""
    _check_level(level)
    ans = qamsc(net, source, target, bound, variant="ct", epsilon=None)
    return ans is not None and surv_ge(ans.survivability, level)
