"""
Frequent subgraph mining by DFS-code growth.

The search starts from single-vertex patterns, seeds one branch per frequent
single-edge code and grows each code by rightmost extension. A child is kept
only when it is frequent and its code is the canonical one, so every
connected frequent pattern is reported exactly once.
"""

import logging
import math
from collections import Counter, defaultdict
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from typing import NamedTuple, Optional, Union

from ..exceptions import MiningError
from ..utils.parallel import parallel_map
from .dfscode import DFSCode, DFSEdge, Pattern, canonical_code, edge_order_key, rightmost_extensions
from .graph import AttributedGraph, GraphLabel, LabeledCollection
from .metrics import get_metrics

logger = logging.getLogger(__name__)

PRUNE_INFREQUENT = "infrequent"
PRUNE_NON_MINIMAL = "non_minimal"
PRUNE_LABEL_ORDER = "label_order"
PRUNE_SIZE_CAP = "size_cap"


@dataclass(frozen=True)
class MinSupport:
    """
    Minimum graph frequency, absolute (a graph count) or relative (a
    fraction of the collection).
    """

    value: Union[int, float]
    relative: bool = False

    def __post_init__(self) -> None:
        if self.relative:
            if not 0 < float(self.value) <= 1:
                raise MiningError(f"Relative minsup must be in (0, 1], got {self.value}")
        elif int(self.value) != self.value or self.value < 1:
            raise MiningError(f"Absolute minsup must be an integer >= 1, got {self.value}")

    @classmethod
    def absolute(cls, count: int) -> "MinSupport":
        return cls(count, relative=False)

    @classmethod
    def fraction(cls, share: float) -> "MinSupport":
        return cls(share, relative=True)

    @classmethod
    def parse(cls, text: Union[str, int, float, "MinSupport"]) -> "MinSupport":
        """Accept ``"5"`` (absolute), ``"0.1"`` or ``"10%"`` (relative)."""
        if isinstance(text, MinSupport):
            return text
        if isinstance(text, bool):
            raise MiningError(f"Invalid minsup {text!r}")
        if isinstance(text, int):
            return cls.absolute(text)
        if isinstance(text, float):
            return cls.fraction(text)
        raw = str(text).strip()
        try:
            if raw.endswith("%"):
                return cls.fraction(float(raw[:-1]) / 100.0)
            if "." in raw:
                return cls.fraction(float(raw))
            return cls.absolute(int(raw))
        except ValueError as e:
            if isinstance(e, MiningError):
                raise
            raise MiningError(f"Invalid minsup {text!r}") from e

    def resolve(self, n_graphs: int) -> int:
        """Absolute threshold for a collection of ``n_graphs`` graphs."""
        if self.relative:
            threshold = max(1, math.ceil(float(self.value) * n_graphs - 1e-9))
        else:
            threshold = int(self.value)
        if threshold > n_graphs:
            raise MiningError(
                f"minsup {threshold} exceeds the number of graphs ({n_graphs})"
            )
        return threshold

    def __str__(self) -> str:
        return f"{self.value * 100:g}%" if self.relative else str(self.value)


class Embedding(NamedTuple):
    """One realization of a code in a graph: ``mapping[k]`` hosts vertex ``k``."""

    graph_index: int
    mapping: tuple[int, ...]
    used_edges: frozenset


def _edge_key(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u < v else (v, u)


@dataclass
class EmbeddingIndex:
    """Embeddings of one code, grouped by the graph that hosts them."""

    graphs: Sequence[AttributedGraph]
    by_graph: dict[int, list[Embedding]] = field(default_factory=dict)

    @classmethod
    def from_embeddings(
        cls, graphs: Sequence[AttributedGraph], items: Iterable[Embedding]
    ) -> "EmbeddingIndex":
        by_graph: dict[int, list[Embedding]] = defaultdict(list)
        for emb in items:
            by_graph[emb.graph_index].append(emb)
        return cls(graphs, dict(by_graph))

    @classmethod
    def build(cls, code: DFSCode, graphs: Sequence[AttributedGraph]) -> "EmbeddingIndex":
        """Embed ``code`` from scratch by replaying its edges in every graph."""
        current = [
            Embedding(gi, (v,), frozenset())
            for gi, graph in enumerate(graphs)
            for v, label in enumerate(graph.vertex_labels)
            if label == code.root_label
        ]
        for edge in code.edges:
            current = [nxt for emb in current for nxt in _follow_edge(graphs[emb.graph_index], emb, edge)]
        return cls.from_embeddings(graphs, current)

    @property
    def support(self) -> int:
        return len(self.by_graph)

    @property
    def graph_ids(self) -> tuple[int, ...]:
        return tuple(sorted(self.by_graph))

    def __iter__(self):
        for gi in sorted(self.by_graph):
            yield from self.by_graph[gi]

    def __len__(self) -> int:
        return sum(len(v) for v in self.by_graph.values())


def _follow_edge(graph: AttributedGraph, emb: Embedding, edge: DFSEdge) -> list[Embedding]:
    source = emb.mapping[edge.i]
    if edge.is_forward:
        found = []
        for target, label in graph.adjacency[source].items():
            if (
                label == edge.edge_label
                and graph.vertex_labels[target] == edge.to_label
                and target not in emb.mapping
            ):
                found.append(
                    Embedding(
                        emb.graph_index,
                        emb.mapping + (target,),
                        emb.used_edges | {_edge_key(source, target)},
                    )
                )
        return found
    target = emb.mapping[edge.j]
    key = _edge_key(source, target)
    if graph.adjacency[source].get(target) == edge.edge_label and key not in emb.used_edges:
        return [Embedding(emb.graph_index, emb.mapping, emb.used_edges | {key})]
    return []


def is_minimal(code: DFSCode) -> bool:
    """True when ``code`` is the canonical code of the graph it describes."""
    if not code.edges:
        return True
    return canonical_code(code.to_graph()) == code


def _grouped_extensions(
    code: DFSCode, index: EmbeddingIndex
) -> dict[DFSEdge, dict[int, list[Embedding]]]:
    rmpath = code.rightmost_path()
    grouped: dict[DFSEdge, dict[int, list[Embedding]]] = defaultdict(lambda: defaultdict(list))
    for emb in index:
        graph = index.graphs[emb.graph_index]
        for ext in rightmost_extensions(graph, emb.mapping, emb.used_edges, rmpath):
            mapping = emb.mapping if ext.new_vertex is None else emb.mapping + (ext.new_vertex,)
            grouped[ext.edge][emb.graph_index].append(
                Embedding(emb.graph_index, mapping, emb.used_edges | {ext.graph_edge})
            )
    return grouped


def extensions(pattern: Union[Pattern, DFSCode], index: EmbeddingIndex) -> list[DFSCode]:
    """
    Every one-edge rightmost extension realized by at least one embedding
    in ``index``, in extension order.
    """
    code = pattern.code if isinstance(pattern, Pattern) else pattern
    grouped = _grouped_extensions(code, index)
    return [code.extend(edge) for edge in sorted(grouped, key=edge_order_key)]


@dataclass(frozen=True)
class MinedPattern:
    """A frequent pattern with the graphs that contain it."""

    pattern: Pattern
    graph_ids: tuple[int, ...]
    gf_a: int
    gf_n: int

    @property
    def gf(self) -> int:
        return len(self.graph_ids)

    @property
    def code(self) -> DFSCode:
        return self.pattern.code


@dataclass(frozen=True)
class _Branch:
    seed: DFSEdge
    embeddings: tuple[Embedding, ...]
    graphs: tuple[AttributedGraph, ...]
    minsup: int
    max_vertices: int
    max_edges: int


class _BranchResult(NamedTuple):
    found: list[tuple[DFSCode, tuple[int, ...]]]
    prunes: Counter


def _grow_branch(branch: _Branch) -> _BranchResult:
    """Depth-first growth of one single-edge seed."""
    seed_code = DFSCode((branch.seed,), branch.seed.from_label)
    root_index = EmbeddingIndex.from_embeddings(branch.graphs, branch.embeddings)
    found: list[tuple[DFSCode, tuple[int, ...]]] = [(seed_code, root_index.graph_ids)]
    prunes: Counter = Counter()
    root_label = branch.seed.from_label

    stack = [(seed_code, root_index)] if branch.max_edges > 1 else []
    while stack:
        code, index = stack.pop()
        grouped = _grouped_extensions(code, index)
        children = []
        for edge in sorted(grouped, key=edge_order_key):
            if edge.is_forward:
                if code.n_vertices + 1 > branch.max_vertices:
                    prunes[PRUNE_SIZE_CAP] += 1
                    continue
                if edge.to_label < root_label:
                    prunes[PRUNE_LABEL_ORDER] += 1
                    continue
            by_graph = grouped[edge]
            if len(by_graph) < branch.minsup:
                prunes[PRUNE_INFREQUENT] += 1
                continue
            child = code.extend(edge)
            if not is_minimal(child):
                prunes[PRUNE_NON_MINIMAL] += 1
                continue
            child_index = EmbeddingIndex(branch.graphs, {gi: list(e) for gi, e in by_graph.items()})
            found.append((child, child_index.graph_ids))
            if child.n_edges < branch.max_edges:
                children.append((child, child_index))
        stack.extend(reversed(children))

    return _BranchResult(found, prunes)


def _seed_embeddings(graphs: Sequence[AttributedGraph]) -> dict[DFSEdge, list[Embedding]]:
    """Single-edge codes oriented so the smaller vertex label comes first."""
    seeds: dict[DFSEdge, list[Embedding]] = defaultdict(list)
    for gi, graph in enumerate(graphs):
        labels = graph.vertex_labels
        for u, v, label in graph.edges:
            for a, b in ((u, v), (v, u)):
                if labels[a] <= labels[b]:
                    seed = DFSEdge(0, 1, labels[a], label, labels[b])
                    seeds[seed].append(Embedding(gi, (a, b), frozenset({_edge_key(a, b)})))
    return seeds


def _to_mined(
    code: DFSCode, graph_ids: tuple[int, ...], labels: Sequence[GraphLabel]
) -> MinedPattern:
    gf_a = sum(1 for gi in graph_ids if labels[gi] is GraphLabel.A)
    return MinedPattern(Pattern(code), graph_ids, gf_a, len(graph_ids) - gf_a)


def mine(
    collection: LabeledCollection,
    minsup: Union[MinSupport, int, float, str],
    max_vertices: int = 10,
    max_edges: int = 10,
    jobs: Optional[int] = 1,
) -> list[MinedPattern]:
    """
    All connected patterns with graph frequency at least ``minsup`` and at
    most ``max_vertices`` vertices and ``max_edges`` edges.

    Args:
        collection: Graphs to mine. Labels only feed the per-class counts.
        minsup: Threshold, see ``MinSupport.parse`` for accepted forms.
        max_vertices: Vertex cap, >= 1.
        max_edges: Edge cap, >= 1.
        jobs: Worker processes for the single-edge branches; output does not
            depend on it.

    Returns:
        Mined patterns in canonical-code order.
    """
    if len(collection) == 0:
        raise MiningError("Cannot mine an empty collection")
    if max_vertices < 1 or max_edges < 1:
        raise MiningError(
            f"Size caps must be >= 1, got max_vertices={max_vertices}, max_edges={max_edges}"
        )
    threshold = MinSupport.parse(minsup).resolve(len(collection))
    graphs = tuple(collection.graphs)
    metrics = get_metrics()

    found: dict[DFSCode, tuple[int, ...]] = {}
    prunes: Counter = Counter()

    with metrics.measure_stage("mine"):
        vertex_hosts: dict[int, set[int]] = defaultdict(set)
        for gi, graph in enumerate(graphs):
            for label in graph.vertex_labels:
                vertex_hosts[label].add(gi)
        for label, hosts in vertex_hosts.items():
            if len(hosts) >= threshold:
                found[DFSCode.single_vertex(label)] = tuple(sorted(hosts))
            else:
                prunes[PRUNE_INFREQUENT] += 1

        branches = []
        if max_vertices >= 2:
            for seed, embs in sorted(_seed_embeddings(graphs).items()):
                if len({e.graph_index for e in embs}) < threshold:
                    prunes[PRUNE_INFREQUENT] += 1
                    continue
                branches.append(
                    _Branch(seed, tuple(embs), graphs, threshold, max_vertices, max_edges)
                )
        logger.debug(f"Growing {len(branches)} single-edge branches")

        for result in parallel_map(_grow_branch, branches, jobs):
            prunes.update(result.prunes)
            for code, graph_ids in result.found:
                found.setdefault(code, graph_ids)

    labels = collection.labels
    mined = [_to_mined(code, ids, labels) for code, ids in found.items()]
    mined.sort(key=lambda m: m.code.sort_key)

    metrics.record_patterns_found(len(mined))
    metrics.record_prunes(dict(prunes))
    logger.info(
        f"Mined {len(mined)} patterns from {len(collection)} graphs "
        f"(minsup={threshold}, caps={max_vertices}/{max_edges})"
    )
    return mined
