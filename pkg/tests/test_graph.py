"""Tests for attributed graphs and labeled collections."""

import networkx as nx
import pytest

from patternweaver import AttributedGraph, GraphLabel, LabeledCollection
from patternweaver.exceptions import GraphError

from .helpers import brute_isomorphic, make_collection, make_graph


class TestGraphLabel:
    """Tests for GraphLabel."""

    def test_flags(self):
        """Test the 1/0 transaction convention."""
        assert GraphLabel.from_flag(1) is GraphLabel.A
        assert GraphLabel.from_flag(0) is GraphLabel.N
        assert GraphLabel.A.flag == 1
        assert GraphLabel.N.flag == 0

    def test_invalid_flag(self):
        """Test that other flags are rejected."""
        with pytest.raises(ValueError):
            GraphLabel.from_flag(2)


class TestAttributedGraph:
    """Tests for AttributedGraph."""

    def test_edges_are_normalized(self):
        """Test that edges are stored with u < v and sorted."""
        graph = make_graph((0, 1, 2), [(2, 1, 5), (1, 0, 3)])

        assert graph.edges == ((0, 1, 3), (1, 2, 5))
        assert graph.n_vertices == 3
        assert graph.n_edges == 2

    def test_self_loop_rejected(self):
        """Test that self-loops are invalid."""
        with pytest.raises(GraphError):
            make_graph((0, 0), [(1, 1, 0)])

    def test_duplicate_edge_rejected(self):
        """Test that both orientations of one edge count as a duplicate."""
        with pytest.raises(GraphError):
            make_graph((0, 0), [(0, 1, 0), (1, 0, 0)])

    def test_dangling_edge_rejected(self):
        """Test that edges must reference existing vertices."""
        with pytest.raises(GraphError):
            make_graph((0, 0), [(0, 2, 0)])

    def test_malformed_edge_rejected(self):
        """Test that edges must be triples."""
        with pytest.raises(GraphError):
            AttributedGraph((0, 0), ((0, 1),))

    def test_adjacency_and_lookup(self):
        """Test neighbor queries."""
        graph = make_graph((0, 1, 1), [(0, 1, 7), (0, 2, 8)])

        assert graph.edge_label(0, 1) == 7
        assert graph.edge_label(2, 0) == 8
        assert graph.edge_label(1, 2) is None
        assert graph.has_edge(1, 0)
        assert graph.degree(0) == 2
        assert graph.degree(1) == 1

    def test_label_counts(self):
        """Test vertex label and edge signature multisets."""
        graph = make_graph((1, 0, 1), [(0, 1, 4), (1, 2, 4)])

        assert graph.label_counts == {1: 2, 0: 1}
        assert graph.edge_signature_counts == {(0, 4, 1): 2}

    def test_connectivity(self):
        """Test is_connected."""
        assert make_graph((0,)).is_connected()
        assert make_graph((0, 0), [(0, 1, 0)]).is_connected()
        assert not make_graph((0, 0)).is_connected()
        assert not make_graph((0, 0, 0, 0), [(0, 1, 0), (2, 3, 0)]).is_connected()
        assert not make_graph(()).is_connected()

    def test_relabeled_is_isomorphic(self):
        """Test that a vertex permutation keeps the isomorphism class."""
        graph = make_graph((0, 1, 2, 0), [(0, 1, 0), (1, 2, 1), (2, 3, 0)])
        permuted = graph.relabeled([3, 0, 2, 1])

        assert permuted.vertex_labels == (1, 0, 2, 0)
        assert brute_isomorphic(graph, permuted)

    def test_relabeled_requires_bijection(self):
        """Test that non-permutations are rejected."""
        with pytest.raises(GraphError):
            make_graph((0, 0), [(0, 1, 0)]).relabeled([0, 0])

    def test_networkx_round_trip(self):
        """Test conversion to and from networkx."""
        graph = make_graph((3, 4, 5), [(0, 1, 1), (1, 2, 2)])
        nx_graph = graph.to_networkx()

        assert nx_graph.nodes[0]["label"] == 3
        assert nx_graph.edges[1, 2]["label"] == 2
        assert AttributedGraph.from_networkx(nx_graph) == graph

    def test_from_networkx_defaults_missing_labels(self):
        """Test that unlabeled networkx nodes and edges get label 0."""
        graph = AttributedGraph.from_networkx(nx.path_graph(3))

        assert graph.vertex_labels == (0, 0, 0)
        assert graph.edges == ((0, 1, 0), (1, 2, 0))


class TestLabeledCollection:
    """Tests for LabeledCollection."""

    def test_length_mismatch(self):
        """Test that graphs and labels must pair up."""
        with pytest.raises(GraphError):
            LabeledCollection((make_graph((0,)),), ())

    def test_class_queries(self, small_collection):
        """Test class sizes and indices."""
        assert len(small_collection) == 8
        assert small_collection.class_size(GraphLabel.A) == 4
        assert small_collection.anomalous_indices == [0, 1, 2, 7]
        assert small_collection.normal_indices == [3, 4, 5, 6]

    def test_subset_keeps_order_and_objects(self, small_collection):
        """Test that subsets follow the index order and share graphs."""
        sub = small_collection.subset([5, 0])

        assert sub.labels == (GraphLabel.N, GraphLabel.A)
        assert sub.graphs[0] is small_collection.graphs[5]

    def test_summary(self):
        """Test per-class size statistics."""
        collection = make_collection(
            [
                (make_graph((0, 0), [(0, 1, 0)]), "A"),
                (make_graph((0, 0, 0, 0), [(0, 1, 0), (1, 2, 0), (2, 3, 0)]), "A"),
                (make_graph((0,)), "N"),
            ]
        )
        summary = collection.summary()

        assert summary.overall.count == 3
        assert summary.per_class[GraphLabel.A].mean_vertices == pytest.approx(3.0)
        assert summary.per_class[GraphLabel.A].std_vertices == pytest.approx(1.0)
        assert summary.per_class[GraphLabel.A].mean_edges == pytest.approx(2.0)
        assert summary.per_class[GraphLabel.N].mean_edges == pytest.approx(0.0)

    def test_summary_of_empty_class(self):
        """Test that a missing class summarizes to zeros."""
        collection = make_collection([(make_graph((0,)), "A")])

        assert collection.summary().per_class[GraphLabel.N].count == 0
