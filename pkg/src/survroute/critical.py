"""Discovery of links that every optimal routing fundamentally depends on.

A link is a *critical candidate* when it lies on every minimum-weight
source→target path — equivalently, deleting it strictly increases (or
destroys) the shortest-path weight.  Only these links can ever appear as the
shared links of a weight-optimal protected connection, which makes the set
the right upgrade-candidate pool.
"""

from __future__ import annotations

from dataclasses import dataclass

from .network import Network
from .paths import dijkstra, shortest_path


@dataclass(frozen=True)
class CriticalCandidateSet:
    """Critical links in the order they appear along one shortest path, plus
    the unweakened shortest-path weight they were probed against."""

    links: tuple[tuple[str, str], ...]
    base_shortest_weight: int

    def __contains__(self, ends: tuple[str, str]) -> bool:
        return ends in set(self.links)


def iawspl(net: Network, source: str, target: str) -> CriticalCandidateSet:
    """Identify all links shared by every minimum-weight source→target path.

    Probes each link of one (deterministically chosen) shortest path: the
    link is critical exactly when its removal increases the distance.  Links
    off that path are never critical — some shortest path avoids them
    already.  All comparisons are exact integer arithmetic.

    Raises ValueError when the target is unreachable to begin with.
    """
    found = shortest_path(net, source, target)
    if found is None:
        raise ValueError(f"target {target!r} unreachable from {source!r}")
    path, base = found
    critical: list[tuple[str, str]] = []
    for ends in path.links:
        probe = dijkstra(net, source, exclude=frozenset((ends,)))
        if probe.get(target) is None or probe[target] > base:
            critical.append(ends)
    return CriticalCandidateSet(tuple(critical), base)
