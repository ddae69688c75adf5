"""Transformed-network construction and the four connection problems."""

from __future__ import annotations

import math

import pytest

from survroute import (
    shortest_path,
    Link,
    Network,
    Path,
    RspSolution,
    build_transformed,
    count_simple_paths,
    csmmq_2approx,
    max_path_weight,
    oracle_solve,
    qamsc,
    reconstruct,
    rwsc_decide,
    tscmq,
    tscmq_sweep,
)
from survroute.network import surv_eq
from survroute.routing import DisjointTag, SimpleTag, link_time

from conftest import random_network


def disjoint_lengths(tn):
    return {(l.src, l.dst): l.length for l in tn.graph.links
            if isinstance(l.key, DisjointTag)}


def simple_lengths(tn):
    return {(l.src, l.dst): l.length for l in tn.graph.links
            if isinstance(l.key, SimpleTag)}


def pick(tn, kind, u, v):
    for l in tn.graph.links:
        if isinstance(l.key, kind) and (l.src, l.dst) == (u, v):
            return l
    raise LookupError((u, v))


class TestBuildTransformed:
    def test_two_node_net_is_one_simple_link(self):
        net = Network({"s", "t"}, (Link("s", "t", 3, 0.01),), 0.05)
        tn = build_transformed(net, "s", "t", "co")
        assert simple_lengths(tn) == {("s", "t"): 3.0}
        assert disjoint_lengths(tn) == {}

    def test_ct_restricts_to_the_min_weight_path(self, svd):
        tn = build_transformed(svd.network, "s", "t", "ct")
        assert tn.pi_min.nodes == ("s", "a", "b", "t")
        assert tn.graph.nodes == ("s", "a", "b", "t")
        assert simple_lengths(tn) == {("s", "a"): 4.0, ("a", "b"): 2.0, ("b", "t"): 2.0}
        assert disjoint_lengths(tn) == {("s", "b"): 6.0, ("a", "t"): 5.0, ("s", "t"): 9.0}

    def test_co_covers_all_node_pairs(self, svd):
        tn = build_transformed(svd.network, "s", "t", "co")
        assert tn.pi_min is None
        assert simple_lengths(tn) == {(l.src, l.dst): float(l.weight)
                                      for l in svd.network.links}
        assert disjoint_lengths(tn) == {("s", "b"): 6.0, ("a", "t"): 5.0,
                                        ("s", "t"): 9.0, ("c", "t"): 12.0}

    def test_link_metrics(self, svd):
        tn = build_transformed(svd.network, "s", "t", "co")
        assert pick(tn, SimpleTag, "s", "a").time == link_time(0.02)
        assert pick(tn, DisjointTag, "s", "t").time == 0.0

    def test_unreachable_target(self, svd):
        assert build_transformed(svd.network, "t", "s", "co") is None
        assert build_transformed(svd.network, "t", "s", "ct") is None

    def test_bad_arguments(self, svd):
        with pytest.raises(ValueError):
            build_transformed(svd.network, "s", "t", "xx")
        with pytest.raises(KeyError):
            build_transformed(svd.network, "s", "nope", "co")


def test_link_time_is_the_log_complement():
    assert link_time(0.01) == -math.log1p(-0.01)
    assert link_time(0.0) == 0.0


class TestQamsc:
    def test_ct_at_the_paper_budget(self, svd):
        ans = qamsc(svd.network, "s", "t", 8, variant="ct")
        assert ans.connection.first.nodes == ("s", "b", "t")
        assert ans.connection.second.nodes == ("s", "a", "b", "t")
        assert surv_eq(ans.survivability, 0.99)
        assert ans.ct_weight == 8 and ans.co_weight == 7
        assert ans.simple_paths

    def test_ct_below_the_cheapest_connection(self, svd):
        assert qamsc(svd.network, "s", "t", 7, variant="ct") is None

    def test_budget_for_a_disjoint_pair_buys_full_protection(self, svd):
        for variant in ("co", "ct"):
            ans = qamsc(svd.network, "s", "t", 9, variant=variant)
            assert ans.survivability == 1.0
            assert ans.co_weight == 9 and ans.ct_weight == 9

    def test_identical_pair_when_nothing_else_fits(self, intro):
        ans = qamsc(intro.network, "s", "t", 6, variant="ct")
        assert ans.connection.first == ans.connection.second
        assert ans.connection.first.nodes == ("s", "a", "b", "t")
        assert surv_eq(ans.survivability, 0.970299)
        assert ans.ct_weight == 6 and ans.co_weight == 3

    def test_negative_budget_and_trivial_endpoints(self, svd):
        assert qamsc(svd.network, "s", "t", -1, variant="co") is None
        triv = qamsc(svd.network, "s", "s", 0, variant="co")
        assert triv.survivability == 1.0 and triv.co_weight == 0

    def test_fptas_tight_epsilon_pins_the_answer(self, svd):
        ans = qamsc(svd.network, "s", "t", 8, variant="ct", epsilon=0.01)
        assert surv_eq(ans.survivability, 0.99)
        assert ans.ct_weight <= 8

    def test_fptas_loose_epsilon_still_feasible_and_close(self, svd):
        exact = qamsc(svd.network, "s", "t", 8, variant="ct")
        loose = qamsc(svd.network, "s", "t", 8, variant="ct", epsilon=0.5)
        assert loose.ct_weight <= 8
        assert loose.survivability >= exact.survivability / 1.5 - 1e-12


class TestTscmq:
    def test_level_one_forces_the_cheapest_disjoint_pair(self, svd):
        for variant in ("co", "ct"):
            ans = tscmq(svd.network, "s", "t", 1.0, variant=variant)
            assert ans.survivability == 1.0
            assert ans.co_weight == 9 and ans.ct_weight == 9
            assert ans.connection.first.nodes == ("s", "a", "t")
            assert ans.connection.second.nodes == ("s", "b", "t")

    def test_co_at_the_paper_level(self, svd):
        ans = tscmq(svd.network, "s", "t", 0.99, variant="co")
        assert ans.connection.first.nodes == ("s", "b", "t")
        assert ans.connection.second.nodes == ("s", "a", "b", "t")
        assert ans.co_weight == 7
        assert ans.survivability >= 0.99 - 1e-9

    @pytest.mark.parametrize("level,weight", [(0.99, 113), (0.98, 23), (0.9702, 3)])
    def test_co_tiers_on_the_chain_net(self, intro, level, weight):
        ans = tscmq(intro.network, "s", "t", level, variant="co")
        assert ans.co_weight == weight
        assert ans.survivability >= level - 1e-9

    @pytest.mark.parametrize("level,weight", [(0.99, 114), (0.98, 25), (0.97, 6)])
    def test_ct_tiers_on_the_chain_net(self, intro, level, weight):
        ans = tscmq(intro.network, "s", "t", level, variant="ct")
        assert ans.ct_weight == weight
        assert ans.survivability >= level - 1e-9

    def test_unreachable_levels_are_infeasible(self, intro):
        # no disjoint pair exists and every connection shares the s->a link
        assert tscmq(intro.network, "s", "t", 1.0, variant="co") is None
        assert tscmq(intro.network, "s", "t", 0.995, variant="co") is None

    def test_level_validation(self, svd):
        for bad in (0.0, -0.5, 1.5):
            with pytest.raises(ValueError):
                tscmq(svd.network, "s", "t", bad)

    def test_sweep_matches_single_solves(self, intro):
        levels = [1.0, 0.99, 0.98, 0.97]
        swept = tscmq_sweep(intro.network, "s", "t", levels, variant="ct")
        singles = [tscmq(intro.network, "s", "t", lv, variant="ct") for lv in levels]
        assert swept == singles

    def test_fptas_is_exact_here_because_weights_are_integers(self, intro, svd):
        for netf, variant, level in [(intro, "co", 0.98), (intro, "ct", 0.99),
                                     (svd, "co", 0.99), (svd, "ct", 1.0)]:
            exact = tscmq(netf.network, "s", "t", level, variant=variant)
            approx = tscmq(netf.network, "s", "t", level, variant=variant, epsilon=0.5)
            assert approx.co_weight == exact.co_weight
            assert approx.ct_weight == exact.ct_weight
            assert approx.survivability >= level - 1e-9


class TestReconstruct:
    def test_mixed_segment_expansion(self, svd):
        tn = build_transformed(svd.network, "s", "t", "ct")
        sa = pick(tn, SimpleTag, "s", "a")
        at = pick(tn, DisjointTag, "a", "t")
        sol = RspSolution(Path(("s", "a", "t")), (sa, at),
                          sa.length + at.length, sa.time + at.time)
        ans = reconstruct(tn, sol)
        assert ans.connection.first.nodes == ("s", "a", "t")
        assert ans.connection.second.nodes == ("s", "a", "b", "t")
        assert surv_eq(ans.survivability, 0.98)
        assert ans.co_weight == 7 and ans.ct_weight == 9
        assert ans.simple_paths
        assert ans.transformed_length == 9.0  # agrees with the ct weight
        assert ans.transformed_time == link_time(0.02)

    def test_revisiting_a_node_clears_the_simple_flag(self):
        net = Network(
            {"s", "x", "y", "a", "t"},
            (Link("s", "x", 1, 0.01), Link("x", "a", 1, 0.01),
             Link("s", "y", 1, 0.01), Link("y", "a", 1, 0.01),
             Link("a", "y", 1, 0.01), Link("y", "t", 1, 0.01)),
            0.05,
        )
        tn = build_transformed(net, "s", "t", "co")
        sa = pick(tn, DisjointTag, "s", "a")
        ay = pick(tn, SimpleTag, "a", "y")
        yt = pick(tn, SimpleTag, "y", "t")
        sol = RspSolution(Path(("s", "a", "y", "t")), (sa, ay, yt),
                          sa.length + 2.0, ay.time + yt.time)
        ans = reconstruct(tn, sol)
        assert ans.connection.first.nodes == ("s", "x", "a", "y", "t")
        assert ans.connection.second.nodes == ("s", "y", "a", "y", "t")
        assert not ans.simple_paths
        assert surv_eq(ans.survivability, 0.99 * 0.99)
        assert ans.co_weight == 6 and ans.ct_weight == 8


class TestCsmmq:
    def test_symmetric_disjoint_pair_is_exact(self):
        net = Network(
            {"s", "a", "b", "t"},
            (Link("s", "a", 2, 0.01), Link("a", "t", 3, 0.01),
             Link("s", "b", 3, 0.01), Link("b", "t", 2, 0.01)),
            0.05,
        )
        ans = csmmq_2approx(net, "s", "t", 1.0)
        assert max_path_weight(net, ans.connection) == 5
        assert ans.survivability == 1.0

    def test_pair_is_ordered_lighter_first(self, svd):
        ans = csmmq_2approx(svd.network, "s", "t", 1.0)
        assert ans.connection.first.nodes == ("s", "b", "t")
        assert ans.connection.second.nodes == ("s", "a", "t")
        assert max_path_weight(svd.network, ans.connection) == 5

    def test_identical_paths_tie(self, intro):
        ans = csmmq_2approx(intro.network, "s", "t", 0.97)
        assert ans.connection.first == ans.connection.second
        assert max_path_weight(intro.network, ans.connection) == 3

    def test_infeasible_level(self, intro):
        assert csmmq_2approx(intro.network, "s", "t", 1.0) is None


class TestRwsc:
    def test_decisions_around_the_frontier(self, svd):
        net = svd.network
        assert rwsc_decide(net, "s", "t", 8, 0.99)
        assert not rwsc_decide(net, "s", "t", 8, 0.995)
        assert not rwsc_decide(net, "s", "t", 7, 0.5)
        assert rwsc_decide(net, "s", "t", 9, 1.0)

    def test_level_validation(self, svd):
        with pytest.raises(ValueError):
            rwsc_decide(svd.network, "s", "t", 8, 0.0)


def small_cases():
    """Deterministic little instances the brute-force referee can afford."""
    picked = []
    for seed in range(40):
        net, s, t = random_network(seed, n_lo=5, n_hi=6, extra_per_node=1.0)
        if count_simple_paths(net, s, t, cap=400) > 400:
            continue
        picked.append((net, s, t))
        if len(picked) == 12:
            break
    assert len(picked) == 12
    return picked


class TestAgainstTheOracle:
    def test_qamsc_matches_on_small_instances(self):
        for net, s, t in small_cases():
            for variant in ("co", "ct"):
                # an identical min-weight pair always fits this budget
                bound = 2 * shortest_path(net, s, t)[1] + 3
                want = oracle_solve(net, s, t, f"{variant}-qamsc", bound=bound)
                got = qamsc(net, s, t, bound, variant=variant)
                assert got is not None and want.objective is not None
                if got.simple_paths:
                    assert surv_eq(got.survivability, want.objective)
                weight = got.co_weight if variant == "co" else got.ct_weight
                assert weight <= bound

    def test_tscmq_matches_on_small_instances(self):
        for net, s, t in small_cases():
            for variant in ("co", "ct"):
                want = oracle_solve(net, s, t, f"{variant}-tscmq", level=0.95)
                got = tscmq(net, s, t, 0.95, variant=variant, quanta=20000)
                if want.objective is None:
                    assert got is None
                    continue
                assert got is not None
                assert got.survivability >= 0.95 - 1e-9
                weight = got.co_weight if variant == "co" else got.ct_weight
                if got.simple_paths:
                    assert weight == want.objective

    def test_csmmq_within_twice_the_optimum(self):
        for net, s, t in small_cases():
            for level in (0.95, 1.0):
                want = oracle_solve(net, s, t, "csmmq", level=level)
                got = csmmq_2approx(net, s, t, level)
                if want.objective is None:
                    assert got is None
                    continue
                assert got is not None
                assert got.survivability >= level - 1e-9
                w1 = max_path_weight(net, got.connection)
                assert w1 <= 2 * want.objective
