"""
Occurrence tests and counts of a pattern inside a graph.

General occurrences are label-preserving monomorphisms (pattern edges must
exist in the graph, extra graph edges among the image vertices are allowed).
Induced occurrences additionally forbid such extra edges. Counts are numbers
of distinct injective mappings, so a pattern with ``k`` automorphisms is
counted ``k`` times per image.
"""

import logging
from collections.abc import Iterator
from enum import Enum
from typing import Union

from networkx.algorithms import isomorphism

from .dfscode import Pattern
from .graph import LABEL_ATTR, AttributedGraph

logger = logging.getLogger(__name__)

_node_match = isomorphism.categorical_node_match(LABEL_ATTR, None)
_edge_match = isomorphism.categorical_edge_match(LABEL_ATTR, None)

PatternLike = Union[Pattern, AttributedGraph]


class MatchMode(str, Enum):
    """Kind of occurrence a matcher looks for."""

    GENERAL = "general"
    INDUCED = "induced"


def _pattern_graph(pattern: PatternLike) -> AttributedGraph:
    return pattern.graph if isinstance(pattern, Pattern) else pattern


def _may_occur(p: AttributedGraph, g: AttributedGraph) -> bool:
    """Cheap necessary conditions: sizes and label multisets fit."""
    if p.n_vertices > g.n_vertices or p.n_edges > g.n_edges:
        return False
    g_labels = g.label_counts
    if any(g_labels[label] < count for label, count in p.label_counts.items()):
        return False
    g_edges = g.edge_signature_counts
    return all(g_edges[sig] >= count for sig, count in p.edge_signature_counts.items())


def embeddings(
    pattern: PatternLike,
    graph: AttributedGraph,
    mode: MatchMode = MatchMode.GENERAL,
) -> Iterator[dict[int, int]]:
    """
    Yield every occurrence as a mapping pattern vertex -> graph vertex.

    The VF2 matcher orders candidates itself; with the label and degree
    feasibility checks it prunes the search to label-consistent branches.
    """
    p = _pattern_graph(pattern)
    mode = MatchMode(mode)
    if p.n_vertices == 0 or not _may_occur(p, graph):
        return
    if p.n_vertices == 1:
        label = p.vertex_labels[0]
        for v, g_label in enumerate(graph.vertex_labels):
            if g_label == label:
                yield {0: v}
        return

    matcher = isomorphism.GraphMatcher(
        graph.nx_graph, p.nx_graph, node_match=_node_match, edge_match=_edge_match
    )
    if mode is MatchMode.INDUCED:
        found = matcher.subgraph_isomorphisms_iter()
    else:
        found = matcher.subgraph_monomorphisms_iter()
    for mapping in found:
        yield {p_vertex: g_vertex for g_vertex, p_vertex in mapping.items()}


def exists_general(pattern: PatternLike, graph: AttributedGraph) -> bool:
    """True when some monomorphism maps the pattern into the graph."""
    return next(embeddings(pattern, graph, MatchMode.GENERAL), None) is not None


def exists_induced(pattern: PatternLike, graph: AttributedGraph) -> bool:
    """True when the pattern occurs as a vertex-induced subgraph of the graph."""
    return next(embeddings(pattern, graph, MatchMode.INDUCED), None) is not None


def exists(pattern: PatternLike, graph: AttributedGraph, mode: MatchMode) -> bool:
    if MatchMode(mode) is MatchMode.INDUCED:
        return exists_induced(pattern, graph)
    return exists_general(pattern, graph)


def count_occurrences(
    pattern: PatternLike,
    graph: AttributedGraph,
    mode: MatchMode = MatchMode.GENERAL,
) -> int:
    """Number of distinct injective label-preserving mappings of the given mode."""
    return sum(1 for _ in embeddings(pattern, graph, mode))
