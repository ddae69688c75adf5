"""Shortest paths and shortest pairs of disjoint paths.

Two deterministic path routines live here:

* ``shortest_path`` — min-weight path, ties broken lexicographically on the
  node sequence, so equal-weight alternatives always resolve the same way.
* ``edsp`` — a minimum-total-weight pair of link-disjoint paths, computed
  Suurballe-style with reduced costs (two Dijkstra passes, cancellation of
  opposite link pairs, then decomposition of the remaining balanced link set
  into two trails).
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass

from .network import Network, Path, path_weight

_INF = float("inf")


@dataclass(frozen=True)
class Edsp:
    """A pair of link-disjoint paths between two nodes (nodes may repeat
    across the pair, and in degenerate instances within one trail)."""

    path_a: Path
    path_b: Path
    total_weight: int


def dijkstra(
    net: Network,
    source: str,
    reverse: bool = False,
    exclude: frozenset[tuple[str, str]] = frozenset(),
) -> dict[str, int]:
    """Distance map from ``source`` (or *to* it, with ``reverse=True``).

    ``exclude`` drops the listed links from the network for this run.
    Unreachable nodes are simply absent from the result.
    """
    dist: dict[str, int] = {source: 0}
    done: set[str] = set()
    heap: list[tuple[int, str]] = [(0, source)]
    while heap:
        d, x = heapq.heappop(heap)
        if x in done:
            continue
        done.add(x)
        for link in net.in_links(x) if reverse else net.out_links(x):
            if link.ends in exclude:
                continue
            y = link.src if reverse else link.dst
            d2 = d + link.weight
            if d2 < dist.get(y, _INF):
                dist[y] = d2
                heapq.heappush(heap, (d2, y))
    return dist


_MAX_STEPS_FACTOR = 4  # greedy walk safety margin over |nodes|


def shortest_path(
    net: Network,
    source: str,
    target: str,
    exclude: frozenset[tuple[str, str]] = frozenset(),
) -> tuple[Path, int] | None:
    """Minimum-weight source→target path; ties resolved to the
    lexicographically smallest node sequence.  None when unreachable."""
    if source not in net.nodes or target not in net.nodes:
        raise KeyError(f"unknown endpoint {source!r} or {target!r}")
    if source == target:
        return Path((source,)), 0
    dist_to_t = dijkstra(net, target, reverse=True, exclude=exclude)
    if source not in dist_to_t:
        return None
    total = dist_to_t[source]
    nodes = [source]
    x = source
    # Walking tight links (weight + remaining distance unchanged) and always
    # taking the smallest next node id yields the lexicographic minimum among
    # all min-weight paths.  The step cap only guards degenerate inputs with
    # zero-weight link cycles, which the instance classes here never contain.
    for _ in range(_MAX_STEPS_FACTOR * len(net.nodes) + 2):
        remaining = dist_to_t[x]
        best: str | None = None
        for link in net.out_links(x):
            if link.ends in exclude or link.dst not in dist_to_t:
                continue
            if link.weight + dist_to_t[link.dst] == remaining:
                if best is None or link.dst < best:
                    best = link.dst
        assert best is not None, "tight successor must exist on a shortest path"
        nodes.append(best)
        x = best
        if x == target:
            return Path(tuple(nodes)), total
    raise RuntimeError("shortest-path walk exceeded its step bound (zero-weight cycle?)")


def _second_pass(
    net: Network,
    dist: dict[str, int],
    on_first: set[tuple[str, str]],
    source: str,
    target: str,
) -> list[tuple[str, str, bool]] | None:
    """Dijkstra over the residual graph of the first path.

    Forward links keep their reduced cost w + dist[u] − dist[v]; links of the
    first path are replaced by zero-cost reversed copies.  Returns the chosen
    residual path as (u, v, reversed?) triples, or None when disconnected.
    """
    radj: dict[str, list[tuple[int, str, bool]]] = {v: [] for v in net.nodes}
    for link in net.links:
        u, v = link.ends
        if (u, v) in on_first:
            radj[v].append((0, u, True))
        elif u in dist and v in dist:
            radj[u].append((link.weight + dist[u] - dist[v], v, False))
    ddist: dict[str, int] = {source: 0}
    parent: dict[str, tuple[str, bool]] = {}
    done: set[str] = set()
    heap: list[tuple[int, str]] = [(0, source)]
    while heap:
        d, x = heapq.heappop(heap)
        if x in done:
            continue
        done.add(x)
        if x == target:
            break
        for cost, y, rev in radj[x]:
            d2 = d + cost
            if d2 < ddist.get(y, _INF):
                ddist[y] = d2
                parent[y] = (x, rev)
                heapq.heappush(heap, (d2, y))
    if target not in done:
        return None
    hops: list[tuple[str, str, bool]] = []
    x = target
    while x != source:
        px, rev = parent[x]
        hops.append((px, x, rev))
        x = px
    hops.reverse()
    return hops


def edsp(
    net: Network,
    source: str,
    target: str,
    dist_hint: dict[str, int] | None = None,
) -> Edsp | None:
    """Minimum-total-weight pair of link-disjoint source→target paths.

    None when no such pair exists.  ``dist_hint`` may carry a precomputed
    Dijkstra distance map from ``source`` (callers solving many pairs from one
    source reuse it).  The returned paths are ordered by (hop count, node
    sequence), which keeps results stable across runs.
    """
    if source == target:
        p = Path((source,))
        return Edsp(p, p, 0)
    dist = dist_hint if dist_hint is not None else dijkstra(net, source)
    if target not in dist:
        return None
    first = shortest_path(net, source, target)
    assert first is not None
    path1, w1 = first
    on_first = set(path1.links)
    hops = _second_pass(net, dist, on_first, source, target)
    if hops is None:
        return None

    # Cancel opposite pairs: a reversed hop (v, u) lifts the first-path link
    # (u, v) out of the solution; what remains is a balanced set of links
    # forming exactly two source→target trails.
    link_set = set(path1.links)
    for u, v, rev in hops:
        if rev:
            link_set.discard((v, u))
        else:
            link_set.add((u, v))

    succ: dict[str, list[str]] = {}
    for u, v in link_set:
        succ.setdefault(u, []).append(v)
    for u in succ:
        succ[u].sort(reverse=True)  # pop() then yields the smallest id

    def walk() -> Path:
        x = source
        seq = [x]
        while succ.get(x):
            x = succ[x].pop()
            seq.append(x)
        assert x == target, "trail decomposition must end at the target"
        return Path(tuple(seq))

    a, b = walk(), walk()
    assert not any(succ.values()), "leftover links after trail decomposition"
    a, b = sorted((a, b), key=lambda p: (len(p.nodes), p.nodes))
    total = path_weight(net, a) + path_weight(net, b)
    return Edsp(a, b, total)
