"""Network model: invariants, metrics, serialization, node splitting."""

from __future__ import annotations

import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from survroute import (
    Link,
    Network,
    NetworkFormatError,
    Path,
    SurvivableConnection,
    co_weight,
    ct_weight,
    enumerate_simple_paths,
    node_split_transform,
    parse_network,
    parse_network_file,
    path_weight,
    s_min_bound,
    serialize_network,
    split_endpoints,
    survivability_level,
)
from survroute.network import validate_path

from conftest import random_network


def net_of(links, p_max=0.05, allow_zero_weight=False):
    nodes = {l.src for l in links} | {l.dst for l in links}
    return Network(nodes, links, p_max, allow_zero_weight=allow_zero_weight)


class TestParsing:
    def test_minimal_two_node_file(self):
        net = parse_network(
            '{"nodes": ["s", "t"],'
            ' "links": [{"from": "s", "to": "t", "weight": 3, "fail_prob": 0.01}],'
            ' "p_max": 0.05}'
        )
        assert len(net.links) == 1
        assert net.link("s", "t").weight == 3

    def test_zero_probability_rejected(self):
        with pytest.raises(NetworkFormatError, match=r"outside \(0, 0\.05\]"):
            parse_network(
                '{"nodes": ["s", "t"],'
                ' "links": [{"from": "s", "to": "t", "weight": 3, "fail_prob": 0.0}],'
                ' "p_max": 0.05}'
            )

    def test_intro_fixture_shape(self, intro):
        assert len(intro.network.nodes) == 5
        assert len(intro.network.links) == 6
        assert (intro.source, intro.target) == ("s", "t")

    def test_svd_fixture_shape(self, svd):
        assert len(svd.network.nodes) == 5
        assert len(svd.network.links) == 7
        assert svd.network.link("s", "a").fail_prob == pytest.approx(0.02)

    @pytest.mark.parametrize(
        "broken, message",
        [
            ('{"links": [], "p_max": 0.5}', "missing required key 'nodes'"),
            ('{"nodes": ["a", "a"], "links": [], "p_max": 0.5}', "duplicates"),
            ('{"nodes": "a", "links": [], "p_max": 0.5}', "list of strings"),
            ('{"nodes": [], "links": {}, "p_max": 0.5}', "'links' must be a list"),
            ('{"nodes": [], "links": [], "p_max": "x"}', "not a number"),
            ("[]", "must be an object"),
            ("{not json", "not valid JSON"),
        ],
    )
    def test_schema_violations(self, broken, message):
        with pytest.raises(NetworkFormatError, match=message):
            parse_network(broken)

    def test_link_errors_name_the_offender(self):
        base = '{"nodes": ["s", "t"], "links": [%s], "p_max": 0.05}'
        cases = [
            ('{"from": "s", "to": "q", "weight": 1, "fail_prob": 0.01}', "unknown node"),
            ('{"from": "s", "to": "s", "weight": 1, "fail_prob": 0.01}', "self-loop"),
            ('{"from": "s", "to": "t", "weight": 0, "fail_prob": 0.01}', "weight 0"),
            ('{"from": "s", "to": "t", "weight": 1.5, "fail_prob": 0.01}', "not an integer"),
            ('{"from": "s", "to": "t", "weight": 1, "fail_prob": 0.2}', "outside"),
            ('{"from": "s", "to": "t", "weight": 1}', "missing key"),
        ]
        for raw, message in cases:
            with pytest.raises(NetworkFormatError, match=message):
                parse_network(base % raw)

    def test_duplicate_link_rejected(self):
        with pytest.raises(NetworkFormatError, match="duplicate link s->t"):
            net_of([Link("s", "t", 1, 0.01), Link("s", "t", 2, 0.01)])

    def test_bad_p_max(self):
        with pytest.raises(NetworkFormatError, match="p_max"):
            Network({"s"}, [], 1.0)

    def test_zero_weight_needs_flag(self):
        links = [Link("s", "t", 0, 0.01)]
        with pytest.raises(NetworkFormatError):
            net_of(links)
        assert net_of(links, allow_zero_weight=True).link("s", "t").weight == 0

    def test_file_endpoints_checked(self):
        raw = (
            '{"nodes": ["s", "t"],'
            ' "links": [{"from": "s", "to": "t", "weight": 3, "fail_prob": 0.01}],'
            ' "p_max": 0.05, "source": "s", "target": "q"}'
        )
        with pytest.raises(NetworkFormatError, match="target 'q'"):
            parse_network_file(raw)


class TestMetrics:
    def test_disjoint_pair_is_fully_survivable(self):
        net = net_of([Link("s", "a", 1, 0.04), Link("a", "t", 1, 0.04),
                      Link("s", "b", 2, 0.04), Link("b", "t", 2, 0.04)])
        conn = SurvivableConnection(Path(("s", "a", "t")), Path(("s", "b", "t")))
        assert survivability_level(net, conn) == 1.0
        assert co_weight(net, conn) == ct_weight(net, conn) == 6

    def test_single_common_link(self, intro):
        conn = SurvivableConnection(Path(("s", "a", "b", "t")), Path(("s", "a", "c", "t")))
        assert survivability_level(intro.network, conn) == pytest.approx(0.99, abs=1e-12)

    def test_identical_three_link_path(self, intro):
        p = Path(("s", "a", "b", "t"))
        conn = SurvivableConnection(p, p)
        assert survivability_level(intro.network, conn) == pytest.approx(0.970299, abs=1e-12)
        assert co_weight(intro.network, conn) == 3
        assert ct_weight(intro.network, conn) == 6

    def test_partial_overlap_weights(self):
        net = net_of([Link("s", "x", 2, 0.01), Link("x", "t", 5, 0.01),
                      Link("x", "y", 3, 0.01), Link("y", "t", 4, 0.01)])
        conn = SurvivableConnection(Path(("s", "x", "t")), Path(("s", "x", "y", "t")))
        assert path_weight(net, conn.first) == 7
        assert path_weight(net, conn.second) == 9
        assert co_weight(net, conn) == 14
        assert ct_weight(net, conn) == 16

    def test_survivability_monotone_in_failure_probability(self):
        for p in (0.005, 0.01, 0.02, 0.04):
            net = net_of([Link("s", "a", 1, p), Link("a", "t", 1, 0.01)])
            path = Path(("s", "a", "t"))
            conn = SurvivableConnection(path, path)
            assert survivability_level(net, conn) == pytest.approx((1 - p) * 0.99)

    def test_s_min_bound(self, intro):
        assert s_min_bound(intro.network) == pytest.approx((1 - 0.05) ** 6)
        assert 0.0 < s_min_bound(intro.network) < 1.0

    def test_validate_path_flags_missing_link(self, intro):
        with pytest.raises(ValueError, match="missing link t->s"):
            validate_path(intro.network, Path(("t", "s")))

    def test_path_basics(self):
        with pytest.raises(ValueError):
            Path(())
        p = Path(("a", "b", "a"))
        assert not p.is_simple()
        assert p.links == (("a", "b"), ("b", "a"))
        assert Path(("a",)).links == ()


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 10_000), pick=st.integers(0, 10_000))
def test_ct_minus_co_is_the_common_weight(seed, pick):
    """The twice-counted total exceeds the once-counted one by exactly the
    weight of the shared links, for any pair of paths whatsoever."""
    net, s, t = random_network(seed)
    paths = enumerate_simple_paths(net, s, t, cap=5000)
    conn = SurvivableConnection(paths[pick % len(paths)], paths[(pick * 7 + 3) % len(paths)])
    common = sum(net.link(u, v).weight for u, v in conn.common_links())
    assert ct_weight(net, conn) - co_weight(net, conn) == common
    lo = math.prod(1 - l.fail_prob for l in net.links)
    assert lo - 1e-12 <= survivability_level(net, conn) <= 1.0


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 10_000))
def test_serialization_round_trip(seed):
    net, s, t = random_network(seed)
    assert parse_network(serialize_network(net)) == net
    doc = parse_network_file(serialize_network(net, s, t))
    assert (doc.network, doc.source, doc.target) == (net, s, t)


class TestNodeSplit:
    def test_empty_split_is_identity(self, svd):
        out = node_split_transform(svd.network, {})
        assert out.nodes == svd.network.nodes
        assert out.links == svd.network.links
        assert out.p_max == svd.network.p_max

    def test_single_split_adds_one_node_and_link(self, intro):
        out = node_split_transform(intro.network, {"a": 0.05})
        assert len(out.nodes) == len(intro.network.nodes) + 1
        assert len(out.links) == len(intro.network.links) + 1
        internal = out.link("a.in", "a.out")
        assert internal.weight == 0 and internal.fail_prob == pytest.approx(0.05)
        # incoming links retarget the in-half, outgoing leave the out-half
        assert out.has_link("s", "a.in") and out.has_link("a.out", "b")

    def test_split_node_counts_when_critical(self, intro):
        out = node_split_transform(intro.network, {"a": 0.03})
        p = Path(("s", "a.in", "a.out", "b", "t"))
        conn = SurvivableConnection(p, p)
        expected = 0.99 * 0.97 * 0.99 * 0.99
        assert survivability_level(out, conn) == pytest.approx(expected, abs=1e-12)
        assert co_weight(out, conn) == 3  # the internal link is weightless

    def test_split_endpoints(self):
        assert split_endpoints("s", "t", {"s": 0.1, "a": 0.1}) == ("s.out", "t")
        assert split_endpoints("s", "t", {"t": 0.1}) == ("s", "t.in")
        assert split_endpoints("s", "t", {}) == ("s", "t")

    def test_collision_and_bad_probability(self, intro):
        with pytest.raises(ValueError, match="unknown node"):
            node_split_transform(intro.network, {"zz": 0.1})
        with pytest.raises(ValueError, match="outside"):
            node_split_transform(intro.network, {"a": 1.5})
