"""Partition construction, point routing, and count invariants."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mapt.partition import Domain, NodeId, ROOT, build_tree, locate, node_interval


class TestNodeId:
    def test_children_and_parent_roundtrip(self):
        node = NodeId(3, 5)
        assert node.left_child() == NodeId(4, 10)
        assert node.right_child() == NodeId(4, 11)
        assert node.left_child().parent() == node
        assert node.right_child().parent() == node
        assert NodeId(4, 10).sibling() == NodeId(4, 11)

    def test_root_has_no_parent(self):
        with pytest.raises(ValueError):
            ROOT.parent()


class TestNodeInterval:
    def test_partitions_domain_exactly(self):
        dom = Domain(0.0, 1.0)
        for k in range(5):
            cells = [node_interval(NodeId(k, m), dom) for m in range(1 << k)]
            assert cells[0][0] == 0.0
            assert cells[-1][1] == 1.0
            for (a, b), (c, d) in zip(cells, cells[1:]):
                assert b == c
                assert np.isclose(b - a, 2.0**-k)

    def test_general_domain(self):
        a, b = node_interval(NodeId(2, 1), Domain(-1.0, 3.0))
        assert (a, b) == (0.0, 1.0)

    def test_invalid_node_rejected(self):
        with pytest.raises(ValueError):
            node_interval(NodeId(2, 4), Domain(0.0, 1.0))
        with pytest.raises(ValueError):
            node_interval(NodeId(-1, 0), Domain(0.0, 1.0))


class TestLocate:
    def test_interior_point(self):
        # 0.26 lies in [0.25, 0.5) at level 2
        assert locate(0.26, 2, Domain(0.0, 1.0)) == NodeId(2, 1)

    def test_boundary_goes_right(self):
        # a point exactly on a split boundary belongs to the right child
        assert locate(0.5, 1, Domain(0.0, 1.0)) == NodeId(1, 1)
        assert locate(0.25, 2, Domain(0.0, 1.0)) == NodeId(2, 1)

    def test_domain_endpoints(self):
        dom = Domain(0.0, 1.0)
        assert locate(0.0, 3, dom) == NodeId(3, 0)
        # the top endpoint belongs to the rightmost (closed) leaf
        assert locate(1.0, 3, dom) == NodeId(3, 7)

    def test_out_of_domain_rejected(self):
        with pytest.raises(ValueError):
            locate(1.5, 2, Domain(0.0, 1.0))
        with pytest.raises(ValueError):
            locate(-0.1, 2, Domain(0.0, 1.0))

    def test_result_interval_contains_point(self):
        dom = Domain(-1.0, 3.0)
        rng = np.random.default_rng(1)
        for x in rng.uniform(-1, 3, 50):
            node = locate(x, 6, dom)
            a, b = node_interval(node, dom)
            # interval membership can disagree with routing only by float
            # round-off of the endpoint formula; the midpoint chain is exact
            assert a <= x <= b or np.isclose(x, a) or np.isclose(x, b)

    @given(
        x=st.floats(0.0, 1.0, allow_nan=False),
        k1=st.integers(0, 6),
        k2=st.integers(0, 6),
    )
    def test_coarse_is_ancestor_of_fine(self, x, k1, k2):
        k1, k2 = sorted((k1, k2))
        dom = Domain(0.0, 1.0)
        coarse = locate(x, k1, dom)
        fine = locate(x, k2, dom)
        assert coarse.is_ancestor_of(fine)


class TestBuildTree:
    def test_known_counts(self):
        # hand-routed: 0.1 -> (2,0); 0.3 -> (2,1); 0.9 -> (2,3)
        tree = build_tree([0.1, 0.3, 0.9], Domain(0.0, 1.0), 2)
        assert tree.count(ROOT) == 3
        assert tree.count(NodeId(1, 0)) == 2
        assert tree.count(NodeId(1, 1)) == 1
        assert tree.count(NodeId(2, 0)) == 1
        assert tree.count(NodeId(2, 1)) == 1
        assert tree.count(NodeId(2, 2)) == 0
        assert tree.count(NodeId(2, 3)) == 1

    def test_boundary_point_routes_right(self):
        tree = build_tree([0.5], Domain(0.0, 1.0), 1)
        assert tree.count(NodeId(1, 0)) == 0
        assert tree.count(NodeId(1, 1)) == 1

    def test_empty_data(self):
        tree = build_tree([], Domain(0.0, 1.0), 3)
        assert tree.n_total == 0
        assert tree.count(ROOT) == 0
        assert tree.count(NodeId(3, 5)) == 0

    def test_out_of_domain_rejected(self):
        with pytest.raises(ValueError, match="outside domain"):
            build_tree([0.5, 1.2], Domain(0.0, 1.0), 2)

    def test_bad_depth_rejected(self):
        with pytest.raises(ValueError):
            build_tree([0.5], Domain(0.0, 1.0), 0)

    def test_bad_domain_rejected(self):
        with pytest.raises(ValueError):
            build_tree([0.5], Domain(1.0, 0.0), 2)

    def test_counts_match_locate(self):
        rng = np.random.default_rng(7)
        dom = Domain(-2.0, 5.0)
        xs = rng.uniform(-2, 5, 200)
        K = 5
        tree = build_tree(xs, dom, K)
        for k in range(K + 1):
            tallied = {}
            for x in xs:
                m = locate(x, k, dom).index
                tallied[m] = tallied.get(m, 0) + 1
            for m, n in tallied.items():
                assert tree.count(NodeId(k, m)) == n

    @given(
        xs=st.lists(st.floats(0.0, 1.0, allow_nan=False), max_size=40),
        depth=st.integers(1, 6),
    )
    @settings(max_examples=60)
    def test_children_sum_to_parent(self, xs, depth):
        tree = build_tree(xs, Domain(0.0, 1.0), depth)
        assert tree.count(ROOT) == len(xs)
        for node, n in tree.counts.items():
            if node.level < depth:
                nl, nr = tree.split_counts(node)
                assert n == nl + nr

    def test_sibling_materialization(self):
        tree = build_tree([0.1], Domain(0.0, 1.0), 2)
        # every stored node's sibling is present in the materialized map
        for node in tree.counts:
            if node.level > 0:
                assert node.sibling() in tree.counts

    def test_level_queries_beyond_depth_rejected(self):
        tree = build_tree([0.1], Domain(0.0, 1.0), 2)
        with pytest.raises(ValueError):
            tree.count(NodeId(3, 0))
