"""Random topology generators and synthetic instance builders.

Three families:

* power-law digraphs — each node draws an out-link budget ("credits")
  proportional to beta * x^(-alpha) with x uniform over the node count, then
  credits are spent on uniformly drawn links;
* Waxman digraphs — nodes live in the unit square (the two connection
  endpoints pinned to opposite corners) and each ordered pair is linked with
  probability alpha * exp(-distance / (beta * sqrt(2))), capped at 1;
* subset-sum chains — adversarial instances whose protected-routing decision
  at (B = T/2, S = e^(-T/2)) answers an equal-partition question, used to
  exercise the solver where the problem is provably hard.

All randomness flows through numpy's PCG64 so a config is a pure recipe:
same seed, same network, on any platform.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .network import Link, Network
from .paths import dijkstra

_DEFAULTS = {"powerlaw": (0.756, 100.0), "waxman": (1.8, 0.05)}

PLACEHOLDER_PROB = 0.01  # structural links before attribute assignment
DEFAULT_P_MAX = 0.05


@dataclass(frozen=True)
class TopologyConfig:
    model: str  # "powerlaw" | "waxman"
    n_nodes: int
    seed: int
    alpha: float | None = None  # None -> model default
    beta: float | None = None

    def __post_init__(self) -> None:
        if self.model not in _DEFAULTS:
            raise ValueError(f"unknown model {self.model!r}")
        if self.n_nodes < 2:
            raise ValueError("need at least 2 nodes")
        a, b = self.resolved()
        if a <= 0 or b <= 0:
            raise ValueError("alpha and beta must be positive")

    def resolved(self) -> tuple[float, float]:
        da, db = _DEFAULTS[self.model]
        return (da if self.alpha is None else self.alpha,
                db if self.beta is None else self.beta)


@dataclass(frozen=True)
class LinkAttrConfig:
    """Recipe for link delays and failure probabilities.

    A link is "fast" with probability omega (delay uniform on the integers
    [fast_low, fast_high]) and "slow" otherwise (fixed large delay).  Failure
    probabilities follow a normal distribution truncated to (0, p_max] by
    resampling, which keeps the shape near the mean intact.
    """

    omega: float
    seed: int
    p_max: float = DEFAULT_P_MAX
    fast_low: int = 1
    fast_high: int = 5
    slow_delay: int = 100
    fail_mean: float = 0.01
    fail_sd: float = 0.003

    def __post_init__(self) -> None:
        if not (0.0 <= self.omega <= 1.0):
            raise ValueError(f"omega must lie in [0, 1], got {self.omega}")


def _node_names(n: int) -> list[str]:
    width = len(str(n - 1))
    return [f"n{i:0{width}d}" for i in range(n)]


def gen_topology(cfg: TopologyConfig) -> Network:
    return gen_power_law(cfg) if cfg.model == "powerlaw" else gen_waxman(cfg)


def gen_power_law(cfg: TopologyConfig) -> Network:
    """Out-degree credits ~ floor(beta * x^(-alpha)), spent on uniform pairs.

    Pair drawing skips self-loops and existing links; a global cap of 50*N^2
    attempts bounds the loop (leftover credits are simply dropped), which
    matters only for adversarial parameter choices.
    """
    alpha, beta = cfg.resolved()
    n = cfg.n_nodes
    rng = np.random.Generator(np.random.PCG64(cfg.seed))
    x = rng.integers(1, n + 1, size=n)
    credits = np.floor(beta * np.power(x.astype(float), -alpha)).astype(int)
    names = _node_names(n)
    have: set[tuple[int, int]] = set()
    order: list[tuple[int, int]] = []
    remaining = credits.copy()
    donors = [i for i in range(n) if remaining[i] > 0]
    attempts_left = 50 * n * n
    while donors and attempts_left > 0:
        attempts_left -= 1
        u = donors[int(rng.integers(len(donors)))]
        v = int(rng.integers(n))
        if u == v or (u, v) in have:
            continue
        have.add((u, v))
        order.append((u, v))
        remaining[u] -= 1
        if remaining[u] == 0:
            donors.remove(u)
    links = [Link(names[u], names[v], 1, PLACEHOLDER_PROB) for u, v in order]
    return Network(names, links, DEFAULT_P_MAX)


def gen_waxman(cfg: TopologyConfig) -> Network:
    """Geometric random digraph on the unit square; endpoints sit at the
    corners (0,0) and (1,1) and are named "s" and "t" outright."""
    alpha, beta = cfg.resolved()
    n = cfg.n_nodes
    rng = np.random.Generator(np.random.PCG64(cfg.seed))
    pos = rng.random((n, 2))
    pos[0] = (0.0, 0.0)
    pos[n - 1] = (1.0, 1.0)
    names = _node_names(n)
    names[0], names[n - 1] = "s", "t"
    diff = pos[:, None, :] - pos[None, :, :]
    dist = np.sqrt((diff ** 2).sum(axis=2))
    prob = np.minimum(1.0, alpha * np.exp(-dist / (beta * math.sqrt(2.0))))
    np.fill_diagonal(prob, 0.0)
    draw = rng.random((n, n)) < prob
    links = [
        Link(names[i], names[j], 1, PLACEHOLDER_PROB)
        for i in range(n)
        for j in range(n)
        if draw[i, j]
    ]
    return Network(names, links, DEFAULT_P_MAX)


def waxman_link_probability(distance: float, alpha: float = 1.8, beta: float = 0.05) -> float:
    """The (capped) link probability at a given point distance."""
    return min(1.0, alpha * math.exp(-distance / (beta * math.sqrt(2.0))))


def assign_attrs(net: Network, cfg: LinkAttrConfig) -> Network:
    """Redraw every link's delay (weight) and failure probability."""
    rng = np.random.Generator(np.random.PCG64(cfg.seed))
    m = len(net.links)
    fast = rng.random(m) < cfg.omega
    fast_delay = rng.integers(cfg.fast_low, cfg.fast_high + 1, size=m)
    delay = np.where(fast, fast_delay, cfg.slow_delay)
    prob = rng.normal(cfg.fail_mean, cfg.fail_sd, size=m)
    bad = (prob <= 0.0) | (prob > cfg.p_max)
    while bad.any():
        prob[bad] = rng.normal(cfg.fail_mean, cfg.fail_sd, size=int(bad.sum()))
        bad = (prob <= 0.0) | (prob > cfg.p_max)
    links = [
        Link(l.src, l.dst, int(delay[i]), float(prob[i]))
        for i, l in enumerate(net.links)
    ]
    return Network(net.nodes, links, cfg.p_max)


def power_law_endpoints(net: Network) -> tuple[str, str]:
    """Deterministic endpoint rule for power-law instances: the biggest
    out-hub sends, the biggest in-hub among nodes it reaches receives (ties
    to the lowest node id; if it reaches nothing, the lowest other id)."""
    by_id = sorted(net.nodes)
    best_deg = max(len(net.out_links(v)) for v in by_id)
    source = next(v for v in by_id if len(net.out_links(v)) == best_deg)
    reach = set(dijkstra(net, source)) - {source}
    if reach:
        best_in = max(len(net.in_links(v)) for v in sorted(reach))
        target = next(v for v in sorted(reach) if len(net.in_links(v)) == best_in)
    else:
        target = next(v for v in by_id if v != source)
    return source, target


def endpoints_for(net: Network, model: str) -> tuple[str, str]:
    if model == "waxman":
        return "s", "t"
    if model == "powerlaw":
        return power_law_endpoints(net)
    raise ValueError(f"unknown model {model!r}")


def partition_instance(sizes: Sequence[int]) -> tuple[Network, float, float]:
    """Chain instance whose protected-routing decision encodes equal
    partition of ``sizes``.

    Element i contributes a zero-weight top link with failure probability
    1 - e^(-s_i) and a protected two-hop bottom detour of weight s_i whose
    links fail with a fixed probability M strictly between the top links'
    cap and 1 — heavy enough that no optimal connection ever shares a bottom
    link.  Thresholds: B = T/2 and S = e^(-T/2) with T = sum(sizes).
    """
    if not sizes:
        raise ValueError("sizes must be nonempty")
    for s in sizes:
        if not isinstance(s, int) or s <= 0:
            raise ValueError(f"sizes must be positive integers, got {s!r}")
    total = sum(sizes)
    m_prob = (1.0 + DEFAULT_P_MAX) / 2.0
    nodes = [f"a{i}" for i in range(len(sizes) + 1)] + [f"m{i}" for i in range(len(sizes))]
    links: list[Link] = []
    for i, s in enumerate(sizes):
        top_p = -math.expm1(-float(s))
        links.append(Link(f"a{i}", f"a{i + 1}", 0, top_p))
        links.append(Link(f"a{i}", f"m{i}", s, m_prob))
        links.append(Link(f"m{i}", f"a{i + 1}", 0, m_prob))
    p_max = max(l.fail_prob for l in links)
    net = Network(nodes, links, p_max, allow_zero_weight=True)
    return net, total / 2.0, math.exp(-total / 2.0)


def partition_endpoints(sizes: Sequence[int]) -> tuple[str, str]:
    return "a0", f"a{len(sizes)}"
