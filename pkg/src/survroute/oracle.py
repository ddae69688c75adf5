"""Brute-force ground truth for small instances.

Everything here works by full enumeration of simple paths and exhaustive
evaluation of path pairs — no transformed graphs, no shared code with the
real solvers, and deliberately no pruning, so it can referee them.

Identical pairs count: a connection may use the same path twice, in which
case every link of that path is a shared link.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .network import Network, Path, SurvivableConnection, SURV_TOL


class OracleCapExceeded(RuntimeError):
    """The instance has more simple paths than the enumeration cap allows."""


def enumerate_simple_paths(net: Network, source: str, target: str, cap: int = 20000) -> list[Path]:
    """All simple source→target paths, lexicographic order, at most ``cap``.

    The trivial path is included when source == target.  Raises
    OracleCapExceeded beyond the cap instead of silently truncating.
    """
    if source not in net.nodes or target not in net.nodes:
        raise KeyError(f"unknown endpoint {source!r} or {target!r}")
    if source == target:
        return [Path((source,))]
    found: list[Path] = []
    trail: list[str] = [source]
    seen: set[str] = {source}
    layers = [iter(sorted(l.dst for l in net.out_links(source)))]
    while layers:
        nxt = next(layers[-1], None)
        if nxt is None:
            layers.pop()
            seen.discard(trail.pop())
            continue
        if nxt in seen:
            continue
        if nxt == target:
            found.append(Path(tuple(trail) + (target,)))
            if len(found) > cap:
                raise OracleCapExceeded(
                    f"more than {cap} simple paths between {source!r} and {target!r}"
                )
            continue
        trail.append(nxt)
        seen.add(nxt)
        layers.append(iter(sorted(l.dst for l in net.out_links(nxt))))
    return found


def count_simple_paths(net: Network, source: str, target: str, cap: int = 10**9) -> int:
    """Independent path count — recursive, walking backwards from the target.

    Shares no traversal code with ``enumerate_simple_paths``; the two must
    agree, which the test suite uses as a self-check of the oracle itself.
    """
    if source not in net.nodes or target not in net.nodes:
        raise KeyError(f"unknown endpoint {source!r} or {target!r}")
    if source == target:
        return 1
    blocked: set[str] = set()

    def back(v: str) -> int:
        if v == source:
            return 1
        blocked.add(v)
        total = 0
        for link in net.in_links(v):
            if link.src not in blocked:
                total += back(link.src)
                if total > cap:
                    raise OracleCapExceeded(f"more than {cap} simple paths")
        blocked.discard(v)
        return total

    return back(target)


@dataclass(frozen=True)
class OracleResult:
    problem: str
    objective: float | int | bool | None
    connections: tuple[SurvivableConnection, ...]
    paths_enumerated: int
    pairs_evaluated: int


PROBLEMS = ("co-qamsc", "ct-qamsc", "co-tscmq", "ct-tscmq", "csmmq", "rwsc")

_BEST_KEPT = 16


@dataclass(frozen=True)
class PairProfile:
    """Every unordered pair's metrics, flattened for repeated queries.

    Pair k covers (paths[i], paths[j]) with i <= j in row-major triangle
    order; identical pairs are the i == j entries.
    """

    paths: tuple[Path, ...]
    survivability: tuple[float, ...]
    co: tuple[int, ...]
    ct: tuple[int, ...]
    max_path: tuple[int, ...]

    def pair_indices(self, k: int) -> tuple[int, int]:
        i = 0
        n = len(self.paths)
        row = n
        while k >= row:
            k -= row
            row -= 1
            i += 1
        return i, i + k


def pair_profile(net: Network, source: str, target: str, cap: int = 20000) -> PairProfile:
    """Enumerate and pre-evaluate every pair once."""
    paths = enumerate_simple_paths(net, source, target, cap)
    index: dict[tuple[str, str], int] = {}
    for p in paths:
        for ends in p.links:
            index.setdefault(ends, len(index))
    ordered = sorted(index, key=index.get)
    survive = [1.0 - net.link(u, v).fail_prob for u, v in ordered]
    link_weight = [net.link(u, v).weight for u, v in ordered]
    masks: list[int] = []
    weights: list[int] = []
    for p in paths:
        mask = 0
        w = 0
        for ends in p.links:
            mask |= 1 << index[ends]
            w += net.link(*ends).weight
        masks.append(mask)
        weights.append(w)

    # Common-link sets repeat heavily across pairs; evaluate each mask once.
    cache: dict[int, tuple[float, int]] = {0: (1.0, 0)}

    def eval_mask(mask: int) -> tuple[float, int]:
        got = cache.get(mask)
        if got is None:
            s, w = 1.0, 0
            m = mask
            while m:
                bit = m & -m
                b = bit.bit_length() - 1
                s *= survive[b]
                w += link_weight[b]
                m ^= bit
            got = (s, w)
            cache[mask] = got
        return got

    surv: list[float] = []
    co: list[int] = []
    ct: list[int] = []
    mx: list[int] = []
    n = len(paths)
    for i in range(n):
        mi, wi = masks[i], weights[i]
        for j in range(i, n):
            s, cw = eval_mask(mi & masks[j])
            surv.append(s)
            co.append(wi + weights[j] - cw)
            ct.append(wi + weights[j])
            mx.append(max(wi, weights[j]))
    return PairProfile(tuple(paths), tuple(surv), tuple(co), tuple(ct), tuple(mx))


def _connection(profile: PairProfile, k: int) -> SurvivableConnection:
    i, j = profile.pair_indices(k)
    a, b = profile.paths[i], profile.paths[j]
    a, b = sorted((a, b), key=lambda p: (len(p.nodes), p.nodes))
    return SurvivableConnection(a, b)


def oracle_solve(
    net: Network,
    source: str,
    target: str,
    problem: str,
    bound: float | None = None,
    level: float | None = None,
    cap: int = 20000,
) -> OracleResult:
    """Exhaustive optimum for one problem.

    ``bound`` is the weight budget (qamsc variants, rwsc); ``level`` the
    survivability requirement (tscmq variants, csmmq, rwsc).  Infeasible
    problems yield objective None (rwsc yields False).
    """
    if problem not in PROBLEMS:
        raise ValueError(f"problem must be one of {PROBLEMS}, got {problem!r}")
    profile = pair_profile(net, source, target, cap)
    n_pairs = len(profile.survivability)
    kept: list[int] = []

    def result(objective) -> OracleResult:
        conns = tuple(_connection(profile, k) for k in kept[:_BEST_KEPT])
        return OracleResult(problem, objective, conns, len(profile.paths), n_pairs)

    if problem in ("co-qamsc", "ct-qamsc"):
        if bound is None:
            raise ValueError("qamsc problems need a weight bound")
        weights = profile.co if problem.startswith("co") else profile.ct
        best = None
        for k in range(n_pairs):
            if weights[k] > bound:
                continue
            s = profile.survivability[k]
            if best is None or s > best + SURV_TOL:
                best, kept = s, [k]
            elif abs(s - best) <= SURV_TOL:
                kept.append(k)
        return result(best)

    if problem in ("co-tscmq", "ct-tscmq", "csmmq"):
        if level is None:
            raise ValueError("level-constrained problems need a level")
        if problem == "csmmq":
            weights = profile.max_path
        else:
            weights = profile.co if problem.startswith("co") else profile.ct
        best = None
        for k in range(n_pairs):
            if profile.survivability[k] < level - SURV_TOL:
                continue
            w = weights[k]
            if best is None or w < best:
                best, kept = w, [k]
            elif w == best:
                kept.append(k)
        return result(best)

    # rwsc: existence under both constraints at once (ct weight convention)
    if bound is None or level is None:
        raise ValueError("rwsc needs both a bound and a level")
    for k in range(n_pairs):
        if profile.ct[k] <= bound and profile.survivability[k] >= level - SURV_TOL:
            kept.append(k)
            return result(True)
    return result(False)
