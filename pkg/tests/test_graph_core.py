from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from threshold_lab import (
    BadParameterError,
    DisconnectedError,
    DuplicateEdgeError,
    NodeOutOfRangeError,
    NotBipartiteError,
    SelfLoopError,
    build_graph,
    format_profile,
    instance_from_dict,
    instance_to_dict,
    is_bipartite,
    is_valid_node,
    parse_profile,
    step,
    step_types,
    two_partition,
    types_to_thresholds,
)
from threshold_lab.instances import random_connected_graph, random_types

import random


class TestBuildGraph:
    def test_triangle(self, triangle):
        assert triangle.n == 3
        assert triangle.edges == ((0, 1), (0, 2), (1, 2))
        assert triangle.degrees == (2, 2, 2)
        assert triangle.neighbor_masks == (0b110, 0b101, 0b011)

    def test_single_edge(self):
        g = build_graph(2, [(0, 1)])
        assert g.degrees == (1, 1)

    def test_disconnected_rejected(self):
        with pytest.raises(DisconnectedError, match="node 2"):
            build_graph(3, [(0, 1)])

    def test_self_loop_rejected(self):
        with pytest.raises(SelfLoopError, match="node 1"):
            build_graph(3, [(0, 1), (1, 1), (1, 2)])

    def test_duplicate_rejected(self):
        with pytest.raises(DuplicateEdgeError, match=r"\(0,1\)"):
            build_graph(2, [(0, 1), (1, 0)])

    def test_node_out_of_range(self):
        with pytest.raises(NodeOutOfRangeError, match=r"\(1,3\)"):
            build_graph(3, [(0, 1), (1, 3)])

    def test_single_node(self):
        g = build_graph(1, [])
        assert g.n == 1 and g.edges == ()


class TestValidity:
    def test_threshold_zero_not_valid(self, triangle):
        assert not is_valid_node(triangle, (0, 1, 1), 0)

    def test_threshold_above_degree_not_valid(self, triangle):
        assert not is_valid_node(triangle, (3, 1, 1), 0)

    def test_threshold_in_range_valid(self, triangle):
        assert is_valid_node(triangle, (1, 1, 1), 0)
        assert is_valid_node(triangle, (2, 1, 1), 0)


class TestTwoPartition:
    def test_four_cycle(self, four_cycle):
        part = two_partition(four_cycle)
        assert part.p_even == (0, 2)
        assert part.p_odd == (1, 3)

    def test_path(self):
        g = build_graph(3, [(0, 1), (1, 2)])
        part = two_partition(g)
        assert part.p_even == (0, 2)
        assert part.p_odd == (1,)

    def test_triangle_witness(self, triangle):
        with pytest.raises(NotBipartiteError) as err:
            two_partition(triangle)
        assert err.value.witness == (0, 1, 2)

    def test_witness_is_an_odd_cycle(self, rng):
        for _ in range(50):
            g = random_connected_graph(rng.randint(3, 8), rng, extra_edge_prob=0.4)
            try:
                part = two_partition(g)
            except NotBipartiteError as err:
                cyc = err.witness
                assert len(cyc) % 2 == 1
                edge_set = set(g.edges)
                for a, b in zip(cyc, cyc[1:] + cyc[:1]):
                    assert (min(a, b), max(a, b)) in edge_set
            else:
                # no intra-part edges
                for side in (part.p_odd, part.p_even):
                    s = set(side)
                    assert not any(i in s and j in s for i, j in g.edges)
                assert sorted(part.p_odd + part.p_even) == list(range(g.n))

    def test_bipartite_flag(self, triangle, four_cycle):
        assert not is_bipartite(triangle)
        assert is_bipartite(four_cycle)


class TestTypesToThresholds:
    def test_half_of_two(self):
        g = build_graph(3, [(0, 1), (1, 2)])  # node 1 has degree 2
        k = types_to_thresholds(g, [(0, 1), (1, 2), (0, 1)])
        assert k[1] == 2

    def test_zero_type(self):
        g = build_graph(6, [(0, i) for i in range(1, 6)])  # star, center degree 5
        k = types_to_thresholds(g, [0, 0, 0, 0, 0, 0])
        assert k[0] == 1

    def test_type_one_never_fires(self, triangle):
        # q_i = 1 with d_i = 2 -> k_i = 3, a non-valid always-W node
        k = types_to_thresholds(triangle, [1, 0, 0])
        assert k[0] == 3
        assert not is_valid_node(triangle, k, 0)

    def test_thresholds_from_types_always_positive(self, rng):
        for _ in range(100):
            g = random_connected_graph(rng.randint(2, 7), rng)
            k = types_to_thresholds(g, random_types(g, rng))
            assert all(ki >= 1 for ki in k)

    def test_rule_equivalence_exhaustive(self, rng):
        # the strict type rule and the converted threshold rule trace
        # identical updates on every profile
        for _ in range(60):
            g = random_connected_graph(rng.randint(2, 6), rng)
            q = random_types(g, rng)
            k = types_to_thresholds(g, q)
            for a in range(1 << g.n):
                assert step_types(g, q, a) == step(g, k, a)

    def test_boundary_tie_breaks_exactly(self):
        # q*d an exact integer: count == q*d must NOT fire (strict rule)
        g = build_graph(5, [(0, i) for i in range(1, 5)])
        q = [Fraction(1, 2), 0, 0, 0, 0]
        k = types_to_thresholds(g, q)
        assert k[0] == 3  # 2 of 4 neighbors is not strictly more than half

    def test_floats_rejected(self, triangle):
        with pytest.raises(BadParameterError):
            types_to_thresholds(triangle, [0.5, 0, 0])


class TestProfiles:
    def test_parse_format(self):
        assert parse_profile("BWB") == 0b101
        assert format_profile(0b101, 3) == "BWB"
        assert parse_profile("WWW") == 0

    def test_parse_rejects_garbage(self):
        with pytest.raises(BadParameterError):
            parse_profile("BXW")

    @given(st.integers(min_value=1, max_value=16), st.data())
    @settings(max_examples=60, deadline=None)
    def test_roundtrip(self, n, data):
        a = data.draw(st.integers(min_value=0, max_value=(1 << n) - 1))
        assert parse_profile(format_profile(a, n), n) == a

    def test_profile_order_is_integer_order(self):
        profiles = ["WWW", "BWW", "WBW", "BBW"]
        values = [parse_profile(p) for p in profiles]
        assert values == sorted(values)


class TestInstanceJson:
    def test_threshold_roundtrip(self, four_cycle):
        d = instance_to_dict(four_cycle, (1, 2, 1, 2))
        g, k = instance_from_dict(d)
        assert g == four_cycle and k == (1, 2, 1, 2)

    def test_types_roundtrip(self, triangle):
        d = instance_to_dict(triangle, q=[(1, 2), (0, 1), (1, 1)])
        g, q = instance_from_dict(d)
        assert q == (Fraction(1, 2), Fraction(0), Fraction(1))

    def test_missing_keys(self):
        with pytest.raises(BadParameterError):
            instance_from_dict({"n": 2, "edges": [[0, 1]]})

    def test_load_instance_from_file(self, tmp_path, four_cycle):
        import json

        from threshold_lab import load_instance

        path = tmp_path / "inst.json"
        path.write_text(json.dumps(instance_to_dict(four_cycle, (1, 2, 1, 2))))
        g, k = load_instance(str(path))
        assert g == four_cycle and k == (1, 2, 1, 2)
