"""
Attributed graphs and labeled graph collections.

Graphs are undirected and simple, with one categorical (integer) label per
vertex and per edge. Vertex ids are dense, ``0..n-1``.
"""

import logging
from collections import Counter
from collections.abc import Iterable, Iterator, Sequence
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from typing import Optional

import networkx as nx
import numpy as np

from ..exceptions import GraphError

logger = logging.getLogger(__name__)

LABEL_ATTR = "label"


class GraphLabel(Enum):
    """Class of a graph in a labeled collection."""

    A = "A"  # anomalous
    N = "N"  # normal

    @classmethod
    def from_flag(cls, flag: int) -> "GraphLabel":
        """Map the 1/0 class convention of transaction files to a label."""
        if flag == 1:
            return cls.A
        if flag == 0:
            return cls.N
        raise ValueError(f"Graph class flag must be 0 or 1, got {flag}")

    @property
    def flag(self) -> int:
        return 1 if self is GraphLabel.A else 0


def _edge_key(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class AttributedGraph:
    """
    Undirected simple graph with categorical vertex and edge labels.

    Edges are stored normalized: ``u < v`` and sorted by ``(u, v)``.
    """

    vertex_labels: tuple[int, ...]
    edges: tuple[tuple[int, int, int], ...] = ()

    def __post_init__(self) -> None:
        labels = tuple(int(label) for label in self.vertex_labels)
        n = len(labels)
        normalized: dict[tuple[int, int], int] = {}
        for edge in self.edges:
            if len(edge) != 3:
                raise GraphError(f"Edge must be a (u, v, label) triple, got {edge!r}")
            u, v, label = (int(x) for x in edge)
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError(f"Edge ({u}, {v}) references a vertex outside 0..{n - 1}")
            if u == v:
                raise GraphError(f"Self-loop on vertex {u} is not allowed")
            key = _edge_key(u, v)
            if key in normalized:
                raise GraphError(f"Duplicate edge {key}")
            normalized[key] = label
        object.__setattr__(self, "vertex_labels", labels)
        object.__setattr__(
            self,
            "edges",
            tuple((u, v, label) for (u, v), label in sorted(normalized.items())),
        )

    @classmethod
    def from_networkx(cls, graph: nx.Graph, default_label: int = 0) -> "AttributedGraph":
        """Build from a networkx graph, re-indexing nodes in iteration order."""
        index = {node: i for i, node in enumerate(graph.nodes)}
        labels = tuple(
            int(graph.nodes[node].get(LABEL_ATTR, default_label)) for node in graph.nodes
        )
        edges = tuple(
            (index[u], index[v], int(data.get(LABEL_ATTR, default_label)))
            for u, v, data in graph.edges(data=True)
        )
        return cls(labels, edges)

    @property
    def n_vertices(self) -> int:
        return len(self.vertex_labels)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    @cached_property
    def adjacency(self) -> tuple[dict[int, int], ...]:
        """Per vertex, a mapping neighbor -> edge label."""
        adj: list[dict[int, int]] = [{} for _ in range(self.n_vertices)]
        for u, v, label in self.edges:
            adj[u][v] = label
            adj[v][u] = label
        return tuple(adj)

    @cached_property
    def label_counts(self) -> Counter:
        return Counter(self.vertex_labels)

    @cached_property
    def edge_signature_counts(self) -> Counter:
        """Multiset of (low vertex label, edge label, high vertex label) triples."""
        counts: Counter = Counter()
        for u, v, label in self.edges:
            a, b = sorted((self.vertex_labels[u], self.vertex_labels[v]))
            counts[(a, label, b)] += 1
        return counts

    def edge_label(self, u: int, v: int) -> Optional[int]:
        """Label of edge (u, v), or None when the vertices are not adjacent."""
        return self.adjacency[u].get(v)

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.adjacency[u]

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def is_connected(self) -> bool:
        if self.n_vertices == 0:
            return False
        return nx.is_connected(self.nx_graph)

    def relabeled(self, permutation: Sequence[int]) -> "AttributedGraph":
        """Return the isomorphic copy where vertex ``v`` becomes ``permutation[v]``."""
        if sorted(permutation) != list(range(self.n_vertices)):
            raise GraphError("Permutation must be a bijection on the vertex ids")
        labels = [0] * self.n_vertices
        for v, label in enumerate(self.vertex_labels):
            labels[permutation[v]] = label
        edges = tuple((permutation[u], permutation[v], label) for u, v, label in self.edges)
        return AttributedGraph(tuple(labels), edges)

    @cached_property
    def nx_graph(self) -> nx.Graph:
        """networkx view used by the matcher; do not mutate."""
        return self.to_networkx()

    def to_networkx(self) -> nx.Graph:
        graph = nx.Graph()
        for v, label in enumerate(self.vertex_labels):
            graph.add_node(v, **{LABEL_ATTR: label})
        for u, v, label in self.edges:
            graph.add_edge(u, v, **{LABEL_ATTR: label})
        return graph

    def __repr__(self) -> str:
        return f"AttributedGraph(n={self.n_vertices}, m={self.n_edges})"


@dataclass(frozen=True)
class ClassSummary:
    """Size statistics of the graphs of one class."""

    count: int
    mean_vertices: float
    std_vertices: float
    mean_edges: float
    std_edges: float


@dataclass(frozen=True)
class CollectionSummary:
    """Size statistics of a collection, overall and per class."""

    overall: ClassSummary
    per_class: dict[GraphLabel, ClassSummary] = field(default_factory=dict)


def _summarize(graphs: Sequence[AttributedGraph]) -> ClassSummary:
    if not graphs:
        return ClassSummary(0, 0.0, 0.0, 0.0, 0.0)
    vertices = np.array([g.n_vertices for g in graphs], dtype=float)
    edges = np.array([g.n_edges for g in graphs], dtype=float)
    return ClassSummary(
        count=len(graphs),
        mean_vertices=float(vertices.mean()),
        std_vertices=float(vertices.std()),
        mean_edges=float(edges.mean()),
        std_edges=float(edges.std()),
    )


@dataclass(frozen=True)
class LabeledCollection:
    """A list of graphs, each tagged anomalous (A) or normal (N)."""

    graphs: tuple[AttributedGraph, ...]
    labels: tuple[GraphLabel, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "graphs", tuple(self.graphs))
        object.__setattr__(self, "labels", tuple(GraphLabel(label) for label in self.labels))
        if len(self.graphs) != len(self.labels):
            raise GraphError(
                f"Collection has {len(self.graphs)} graphs but {len(self.labels)} labels"
            )

    @classmethod
    def from_pairs(
        cls, pairs: Iterable[tuple[AttributedGraph, GraphLabel]]
    ) -> "LabeledCollection":
        graphs: list[AttributedGraph] = []
        labels: list[GraphLabel] = []
        for graph, label in pairs:
            graphs.append(graph)
            labels.append(label)
        return cls(tuple(graphs), tuple(labels))

    def __len__(self) -> int:
        return len(self.graphs)

    def __iter__(self) -> Iterator[tuple[AttributedGraph, GraphLabel]]:
        return iter(zip(self.graphs, self.labels))

    def indices_of(self, label: GraphLabel) -> list[int]:
        return [i for i, lab in enumerate(self.labels) if lab is label]

    @property
    def anomalous_indices(self) -> list[int]:
        return self.indices_of(GraphLabel.A)

    @property
    def normal_indices(self) -> list[int]:
        return self.indices_of(GraphLabel.N)

    def class_size(self, label: GraphLabel) -> int:
        return sum(1 for lab in self.labels if lab is label)

    def subset(self, indices: Iterable[int]) -> "LabeledCollection":
        """Sub-collection in the given index order; graph objects are shared."""
        idx = list(indices)
        return LabeledCollection(
            tuple(self.graphs[i] for i in idx),
            tuple(self.labels[i] for i in idx),
        )

    def summary(self) -> CollectionSummary:
        return CollectionSummary(
            overall=_summarize(self.graphs),
            per_class={
                label: _summarize([self.graphs[i] for i in self.indices_of(label)])
                for label in GraphLabel
            },
        )

    def __repr__(self) -> str:
        return (
            f"LabeledCollection(size={len(self)}, "
            f"A={self.class_size(GraphLabel.A)}, N={self.class_size(GraphLabel.N)})"
        )
