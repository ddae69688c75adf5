"""Directed networks with integer link weights and link failure probabilities.

A connection between two endpoints is an ordered pair of paths (possibly the
same path twice).  Its survivability is the probability that at least one of
the two paths stays up when links fail independently: links used by only one
path cannot take the connection down on their own, so only the *common* links
matter and

    survivability = prod(1 - p_e  for e in common_links)

which is 1.0 for a link-disjoint pair and prod(1 - p_e) over a path's own
links when the pair is the same path twice.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Iterable, Mapping

SURV_TOL = 1e-9  # absolute tolerance for every survivability comparison


class NetworkFormatError(ValueError):
    """Raised when raw network data violates the schema or its invariants."""


@dataclass(frozen=True)
class Link:
    src: str
    dst: str
    weight: int
    fail_prob: float

    @property
    def ends(self) -> tuple[str, str]:
        return (self.src, self.dst)


@dataclass(frozen=True)
class Path:
    """A directed walk given by its node sequence; a single node is allowed."""

    nodes: tuple[str, ...]

    def __post_init__(self) -> None:
        if not self.nodes:
            raise ValueError("a path needs at least one node")

    @property
    def links(self) -> tuple[tuple[str, str], ...]:
        return tuple(zip(self.nodes, self.nodes[1:]))

    def is_simple(self) -> bool:
        return len(set(self.nodes)) == len(self.nodes)


@dataclass(frozen=True)
class SurvivableConnection:
    """Ordered pair of paths with the same endpoints (may be identical)."""

    first: Path
    second: Path

    def common_links(self) -> frozenset[tuple[str, str]]:
        return frozenset(self.first.links) & frozenset(self.second.links)

    def all_links(self) -> frozenset[tuple[str, str]]:
        return frozenset(self.first.links) | frozenset(self.second.links)


class Network:
    """Immutable directed network. Parallel links and self-loops are rejected.

    Weights are positive integers unless ``allow_zero_weight`` is set (needed
    by the node-splitting transform and by some synthetic hardness instances,
    which carry structural zero-weight links).
    """

    __slots__ = ("nodes", "links", "p_max", "allow_zero_weight", "_by_ends", "_adj", "_radj")

    def __init__(
        self,
        nodes: Iterable[str],
        links: Iterable[Link],
        p_max: float,
        allow_zero_weight: bool = False,
    ) -> None:
        object.__setattr__(self, "nodes", frozenset(nodes))
        object.__setattr__(self, "links", tuple(links))
        object.__setattr__(self, "p_max", float(p_max))
        object.__setattr__(self, "allow_zero_weight", bool(allow_zero_weight))
        self._validate()
        by_ends: dict[tuple[str, str], Link] = {}
        adj: dict[str, list[Link]] = {v: [] for v in self.nodes}
        radj: dict[str, list[Link]] = {v: [] for v in self.nodes}
        for link in self.links:
            by_ends[link.ends] = link
            adj[link.src].append(link)
            radj[link.dst].append(link)
        object.__setattr__(self, "_by_ends", by_ends)
        object.__setattr__(self, "_adj", adj)
        object.__setattr__(self, "_radj", radj)

    def __setattr__(self, name: str, value) -> None:  # pragma: no cover
        raise AttributeError("Network is immutable")

    def _validate(self) -> None:
        if not (0.0 < self.p_max < 1.0):
            raise NetworkFormatError(f"p_max must lie in (0, 1), got {self.p_max}")
        seen: set[tuple[str, str]] = set()
        min_weight = 0 if self.allow_zero_weight else 1
        for link in self.links:
            if link.src not in self.nodes or link.dst not in self.nodes:
                raise NetworkFormatError(f"link {link.src}->{link.dst} references an unknown node")
            if link.src == link.dst:
                raise NetworkFormatError(f"self-loop on node {link.src}")
            if link.ends in seen:
                raise NetworkFormatError(f"duplicate link {link.src}->{link.dst}")
            seen.add(link.ends)
            if not isinstance(link.weight, int) or link.weight < min_weight:
                raise NetworkFormatError(
                    f"link {link.src}->{link.dst} weight {link.weight!r} "
                    f"must be an integer >= {min_weight}"
                )
            if not (0.0 < link.fail_prob <= self.p_max):
                raise NetworkFormatError(
                    f"link {link.src}->{link.dst} failure probability {link.fail_prob!r} "
                    f"outside (0, {self.p_max}]"
                )

    # -- lookups -----------------------------------------------------------

    def link(self, src: str, dst: str) -> Link:
        try:
            return self._by_ends[(src, dst)]
        except KeyError:
            raise KeyError(f"no link {src}->{dst}") from None

    def has_link(self, src: str, dst: str) -> bool:
        return (src, dst) in self._by_ends

    def out_links(self, node: str) -> list[Link]:
        return self._adj[node]

    def in_links(self, node: str) -> list[Link]:
        return self._radj[node]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Network):
            return NotImplemented
        return (
            self.nodes == other.nodes
            and self.links == other.links
            and self.p_max == other.p_max
            and self.allow_zero_weight == other.allow_zero_weight
        )

    def __hash__(self) -> int:
        return hash((self.nodes, self.links, self.p_max))

    def __repr__(self) -> str:
        return f"Network({len(self.nodes)} nodes, {len(self.links)} links, p_max={self.p_max})"


@dataclass(frozen=True)
class NetworkFile:
    """A network plus the connection endpoints, as stored on disk."""

    network: Network
    source: str
    target: str


def validate_path(net: Network, path: Path) -> None:
    """Raise ValueError unless every hop of ``path`` is a link of ``net``."""
    for src, dst in path.links:
        if not net.has_link(src, dst):
            raise ValueError(f"path uses missing link {src}->{dst}")


def path_weight(net: Network, path: Path) -> int:
    return sum(net.link(u, v).weight for u, v in path.links)


def survivability_level(net: Network, conn: SurvivableConnection) -> float:
    """Probability that the connection survives independent link failures."""
    level = 1.0
    for u, v in conn.common_links():
        level *= 1.0 - net.link(u, v).fail_prob
    return level


def co_weight(net: Network, conn: SurvivableConnection) -> int:
    """Total weight with common links counted once."""
    return sum(net.link(u, v).weight for u, v in conn.all_links())


def ct_weight(net: Network, conn: SurvivableConnection) -> int:
    """Total weight with common links counted twice (both paths pay)."""
    return path_weight(net, conn.first) + path_weight(net, conn.second)


def s_min_bound(net: Network) -> float:
    """Lowest survivability any connection can have: (1 - p_max)^M.

    Even the worst pair shares at most all M links, each failing with
    probability at most p_max.
    """
    return (1.0 - net.p_max) ** len(net.links)


# -- serialization ---------------------------------------------------------


def _parse_obj(data: bytes | str | Mapping) -> Mapping:
    if isinstance(data, (bytes, str)):
        try:
            obj = json.loads(data)
        except json.JSONDecodeError as exc:
            raise NetworkFormatError(f"not valid JSON: {exc}") from exc
    else:
        obj = data
    if not isinstance(obj, Mapping):
        raise NetworkFormatError("top-level JSON value must be an object")
    return obj


def parse_network(data: bytes | str | Mapping, allow_zero_weight: bool = False) -> Network:
    """Parse the JSON network schema, checking every invariant.

    Expected shape::

        {"nodes": ["s", ...],
         "links": [{"from": "s", "to": "a", "weight": 3, "fail_prob": 0.01}, ...],
         "p_max": 0.05, "source": "s", "target": "t"}

    ``source``/``target`` are tolerated and ignored here; ``parse_network_file``
    returns them too.
    """
    obj = _parse_obj(data)
    for key in ("nodes", "links", "p_max"):
        if key not in obj:
            raise NetworkFormatError(f"missing required key {key!r}")
    nodes = obj["nodes"]
    if not isinstance(nodes, list) or not all(isinstance(n, str) for n in nodes):
        raise NetworkFormatError("'nodes' must be a list of strings")
    if len(set(nodes)) != len(nodes):
        raise NetworkFormatError("'nodes' contains duplicates")
    raw_links = obj["links"]
    if not isinstance(raw_links, list):
        raise NetworkFormatError("'links' must be a list")
    links = []
    for raw in raw_links:
        if not isinstance(raw, Mapping):
            raise NetworkFormatError(f"link entry {raw!r} is not an object")
        try:
            src, dst = raw["from"], raw["to"]
            weight, prob = raw["weight"], raw["fail_prob"]
        except KeyError as exc:
            raise NetworkFormatError(f"link entry {dict(raw)!r} missing key {exc}") from exc
        if not isinstance(weight, int) or isinstance(weight, bool):
            raise NetworkFormatError(f"link {src}->{dst} weight {weight!r} is not an integer")
        if not isinstance(prob, (int, float)) or isinstance(prob, bool):
            raise NetworkFormatError(f"link {src}->{dst} fail_prob {prob!r} is not a number")
        links.append(Link(str(src), str(dst), weight, float(prob)))
    p_max = obj["p_max"]
    if not isinstance(p_max, (int, float)) or isinstance(p_max, bool):
        raise NetworkFormatError(f"p_max {p_max!r} is not a number")
    if bool(obj.get("allow_zero_weight", False)):
        allow_zero_weight = True
    return Network(nodes, links, float(p_max), allow_zero_weight=allow_zero_weight)


def parse_network_file(data: bytes | str | Mapping) -> NetworkFile:
    """Parse a network file including its source/target endpoints."""
    obj = _parse_obj(data)
    net = parse_network(obj)
    for key in ("source", "target"):
        if key not in obj or not isinstance(obj[key], str):
            raise NetworkFormatError(f"missing or non-string {key!r}")
    source, target = obj["source"], obj["target"]
    for name, node in (("source", source), ("target", target)):
        if node not in net.nodes:
            raise NetworkFormatError(f"{name} {node!r} is not a node of the network")
    return NetworkFile(net, source, target)


def serialize_network(net: Network, source: str | None = None, target: str | None = None) -> str:
    """Inverse of ``parse_network``; node order is sorted, link order kept."""
    obj: dict = {
        "nodes": sorted(net.nodes),
        "links": [
            {"from": l.src, "to": l.dst, "weight": l.weight, "fail_prob": l.fail_prob}
            for l in net.links
        ],
        "p_max": net.p_max,
    }
    if net.allow_zero_weight:
        obj["allow_zero_weight"] = True
    if source is not None:
        obj["source"] = source
    if target is not None:
        obj["target"] = target
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def node_split_transform(net: Network, node_fail: Mapping[str, float]) -> Network:
    """Reduce node failures to link failures by splitting each failing node.

    Every node v with an entry in ``node_fail`` becomes v.in -> v.out joined
    by a zero-weight internal link carrying v's failure probability; links
    into v are re-targeted at v.in and links out of v re-sourced at v.out.
    Nodes without an entry are left alone.  The result allows zero weights by
    construction.
    """
    for v, p in node_fail.items():
        if v not in net.nodes:
            raise ValueError(f"node_fail references unknown node {v!r}")
        if not (0.0 < p < 1.0):
            raise ValueError(f"node failure probability for {v!r} outside (0, 1): {p}")
    split = set(node_fail)
    nodes: list[str] = []
    for v in sorted(net.nodes):
        if v in split:
            nodes += [f"{v}.in", f"{v}.out"]
        else:
            nodes.append(v)
    taken = set(nodes)
    if len(taken) != len(net.nodes) + len(split):
        raise ValueError("split node names collide with existing node ids")
    links = []
    for l in net.links:
        src = f"{l.src}.out" if l.src in split else l.src
        dst = f"{l.dst}.in" if l.dst in split else l.dst
        links.append(Link(src, dst, l.weight, l.fail_prob))
    for v in sorted(split):
        links.append(Link(f"{v}.in", f"{v}.out", 0, node_fail[v]))
    p_max = max(net.p_max, max(node_fail.values(), default=0.0))
    return Network(nodes, links, p_max, allow_zero_weight=True)


def split_endpoints(source: str, target: str, node_fail: Mapping[str, float]) -> tuple[str, str]:
    """Endpoint names after ``node_split_transform``: leave from the source's
    out-half, arrive at the target's in-half."""
    s = f"{source}.out" if source in node_fail else source
    t = f"{target}.in" if target in node_fail else target
    return s, t


def surv_ge(a: float, b: float) -> bool:
    """a >= b under the global survivability tolerance."""
    return a >= b - SURV_TOL


def surv_eq(a: float, b: float) -> bool:
    return math.isclose(a, b, rel_tol=0.0, abs_tol=SURV_TOL)
