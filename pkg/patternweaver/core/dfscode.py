"""
DFS codes, canonical forms and patterns.

A DFS code lists the edges of a connected graph in the order a depth-first
traversal discovers them. Each edge is ``(i, j, l_i, l_e, l_j)`` where ``i``
and ``j`` are discovery indices; a forward edge (``i < j``) introduces vertex
``j``, a backward edge (``i > j``) closes a cycle. The lexicographically
smallest code over all traversals is the canonical code: two graphs share it
exactly when they are isomorphic with labels preserved.
"""

import logging
from collections.abc import Sequence
from dataclasses import dataclass
from functools import cached_property
from typing import NamedTuple, Optional

from ..exceptions import GraphError
from .graph import AttributedGraph

logger = logging.getLogger(__name__)

EdgeKey = tuple[int, int]


class DFSEdge(NamedTuple):
    """One edge of a DFS code, with both endpoint labels."""

    i: int
    j: int
    from_label: int
    edge_label: int
    to_label: int

    @property
    def is_forward(self) -> bool:
        return self.i < self.j

    def __str__(self) -> str:
        return ",".join(str(x) for x in self)


def edge_order_key(edge: DFSEdge) -> tuple[int, ...]:
    """
    Order of candidate extensions of one code prefix.

    Backward edges come first (smaller target first), then forward edges from
    the deepest rightmost-path vertex, each broken by labels.
    """
    if edge.is_forward:
        return (1, -edge.i, edge.edge_label, edge.to_label)
    return (0, edge.j, edge.edge_label, 0)


@dataclass(frozen=True)
class DFSCode:
    """
    A DFS code. Codes without edges describe a single vertex whose label is
    ``root_label``; for other codes ``root_label`` equals the first edge's
    ``from_label``.
    """

    edges: tuple[DFSEdge, ...]
    root_label: int

    def __post_init__(self) -> None:
        edges = tuple(DFSEdge(*(int(x) for x in e)) for e in self.edges)
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "root_label", int(self.root_label))
        if not edges:
            return
        if edges[0].i != 0 or edges[0].j != 1:
            raise GraphError("A DFS code must start with edge (0, 1)")
        if edges[0].from_label != self.root_label:
            raise GraphError("root_label must match the first edge's source label")
        labels = {0: edges[0].from_label}
        seen: set[EdgeKey] = set()
        for edge in edges:
            if edge.is_forward:
                if edge.j != len(labels):
                    raise GraphError(f"Forward edge {edge} must introduce vertex {len(labels)}")
                if edge.i not in labels:
                    raise GraphError(f"Forward edge {edge} starts from an unknown vertex")
                labels[edge.j] = edge.to_label
            elif edge.i not in labels or edge.j not in labels or edge.i == edge.j:
                raise GraphError(f"Backward edge {edge} references unknown vertices")
            if labels[edge.i] != edge.from_label or labels[edge.j] != edge.to_label:
                raise GraphError(f"Edge {edge} disagrees with earlier vertex labels")
            key = (min(edge.i, edge.j), max(edge.i, edge.j))
            if key in seen:
                raise GraphError(f"Edge {edge} repeats an earlier edge")
            seen.add(key)

    @classmethod
    def single_vertex(cls, label: int) -> "DFSCode":
        return cls((), label)

    @classmethod
    def parse(cls, text: str) -> "DFSCode":
        """Inverse of ``str(code)``: ``v:<label>`` or ``i,j,a,e,b;i,j,a,e,b;...``."""
        text = text.strip()
        if text.startswith("v:"):
            return cls.single_vertex(int(text[2:]))
        try:
            edges = tuple(
                DFSEdge(*(int(x) for x in chunk.split(","))) for chunk in text.split(";")
            )
        except (TypeError, ValueError) as e:
            raise GraphError(f"Malformed DFS code {text!r}: {e}") from e
        if not edges:
            raise GraphError("Empty DFS code")
        return cls(edges, edges[0].from_label)

    def __str__(self) -> str:
        if not self.edges:
            return f"v:{self.root_label}"
        return ";".join(str(e) for e in self.edges)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    @property
    def n_vertices(self) -> int:
        return 1 + sum(1 for e in self.edges if e.is_forward)

    @property
    def sort_key(self) -> tuple:
        """Total order on codes: edge count, then edge tuples."""
        if not self.edges:
            return (0, ((self.root_label,),))
        return (len(self.edges), self.edges)

    def rightmost_path(self) -> list[int]:
        """Discovery indices on the path from the root to the rightmost vertex."""
        if not self.edges:
            return [0]
        current = self.n_vertices - 1
        path = [current]
        for edge in reversed(self.edges):
            if edge.is_forward and edge.j == current:
                current = edge.i
                path.append(current)
        return path[::-1]

    def extend(self, edge: DFSEdge) -> "DFSCode":
        return DFSCode(self.edges + (edge,), self.root_label)

    def to_graph(self) -> AttributedGraph:
        """Realize the code as a graph whose vertex ids are discovery indices."""
        labels = [self.root_label]
        for edge in self.edges:
            if edge.is_forward:
                labels.append(edge.to_label)
        return AttributedGraph(
            tuple(labels),
            tuple((e.i, e.j, e.edge_label) for e in self.edges),
        )


class Extension(NamedTuple):
    """A one-edge rightmost extension of an embedded code prefix."""

    edge: DFSEdge
    new_vertex: Optional[int]  # graph vertex introduced by a forward edge
    graph_edge: EdgeKey


def rightmost_extensions(
    graph: AttributedGraph,
    mapping: Sequence[int],
    used_edges: frozenset,
    rightmost_path: Sequence[int],
) -> list[Extension]:
    """
    All one-edge extensions of an embedding that keep the code a valid DFS code.

    ``mapping[k]`` is the graph vertex of discovery index ``k``; backward edges
    leave the rightmost vertex towards the rightmost path, forward edges leave
    any rightmost-path vertex towards an unmapped vertex.
    """
    labels = graph.vertex_labels
    adjacency = graph.adjacency
    mapped = set(mapping)
    n = len(mapping)
    rightmost = rightmost_path[-1]
    r_vertex = mapping[rightmost]
    result: list[Extension] = []

    for k in rightmost_path[:-1]:
        target = mapping[k]
        label = adjacency[r_vertex].get(target)
        if label is None:
            continue
        key = (min(r_vertex, target), max(r_vertex, target))
        if key in used_edges:
            continue
        edge = DFSEdge(rightmost, k, labels[r_vertex], label, labels[target])
        result.append(Extension(edge, None, key))

    for k in reversed(rightmost_path):
        source = mapping[k]
        for target, label in adjacency[source].items():
            if target in mapped:
                continue
            edge = DFSEdge(k, n, labels[source], label, labels[target])
            key = (min(source, target), max(source, target))
            result.append(Extension(edge, target, key))
    return result


def canonical_code(graph: AttributedGraph) -> DFSCode:
    """
    Minimal DFS code of a connected graph.

    The minimum is built one edge at a time: every partial traversal that
    realizes the best prefix so far is kept, and the next edge is the smallest
    extension any of them offers.
    """
    if graph.n_vertices == 0:
        raise GraphError("Cannot canonicalize an empty graph")
    if not graph.is_connected():
        raise GraphError("Cannot canonicalize a disconnected graph")
    if graph.n_edges == 0:
        return DFSCode.single_vertex(graph.vertex_labels[0])

    labels = graph.vertex_labels
    first = min(
        (labels[a], label, labels[b])
        for u, v, label in graph.edges
        for a, b in ((u, v), (v, u))
    )
    states: list[tuple[tuple[int, ...], frozenset]] = []
    for u, v, label in graph.edges:
        for a, b in ((u, v), (v, u)):
            if (labels[a], label, labels[b]) == first:
                states.append(((a, b), frozenset({(min(a, b), max(a, b))})))
    code = DFSCode((DFSEdge(0, 1, *first),), first[0])

    while code.n_edges < graph.n_edges:
        rmpath = code.rightmost_path()
        best: Optional[tuple[int, ...]] = None
        best_edge: Optional[DFSEdge] = None
        next_states: list[tuple[tuple[int, ...], frozenset]] = []
        for mapping, used in states:
            for ext in rightmost_extensions(graph, mapping, used, rmpath):
                key = edge_order_key(ext.edge)
                if best is not None and key > best:
                    continue
                if best is None or key < best:
                    best, best_edge = key, ext.edge
                    next_states = []
                new_mapping = mapping if ext.new_vertex is None else mapping + (ext.new_vertex,)
                next_states.append((new_mapping, used | {ext.graph_edge}))
        if best_edge is None:
            raise GraphError("Traversal stalled before covering every edge")
        code = code.extend(best_edge)
        states = _dedupe(next_states)
    return code


def _dedupe(
    states: list[tuple[tuple[int, ...], frozenset]],
) -> list[tuple[tuple[int, ...], frozenset]]:
    seen = set()
    unique = []
    for state in states:
        if state not in seen:
            seen.add(state)
            unique.append(state)
    return unique


@dataclass(frozen=True, eq=False)
class Pattern:
    """A connected attributed graph held in canonical DFS-code form."""

    code: DFSCode

    @classmethod
    def from_graph(cls, graph: AttributedGraph) -> "Pattern":
        """Canonicalize ``graph``; fails when it is empty or disconnected."""
        return cls(canonical_code(graph))

    @classmethod
    def from_code(cls, code: DFSCode, verify: bool = True) -> "Pattern":
        """Wrap a code; with ``verify`` the code must already be canonical."""
        if verify and canonical_code(code.to_graph()) != code:
            raise GraphError(f"DFS code {code} is not canonical")
        return cls(code)

    @cached_property
    def graph(self) -> AttributedGraph:
        return self.code.to_graph()

    @property
    def n_vertices(self) -> int:
        return self.code.n_vertices

    @property
    def n_edges(self) -> int:
        return self.code.n_edges

    @property
    def sort_key(self) -> tuple:
        return self.code.sort_key

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Pattern):
            return NotImplemented
        return self.code == other.code

    def __hash__(self) -> int:
        return hash(self.code)

    def __str__(self) -> str:
        return str(self.code)

    def __repr__(self) -> str:
        return f"Pattern({self.code})"


def is_same_pattern(first: Pattern, second: Pattern) -> bool:
    """True when both patterns are isomorphic (equal canonical codes)."""
    return first.code == second.code
