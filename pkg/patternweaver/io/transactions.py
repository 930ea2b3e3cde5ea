"""
Transaction files, the line-oriented interchange format of gSpan-family tools:

    t # <graph-index> <class>      class 1 = anomalous, 0 = normal
    v <vertex-id> <vertex-label>
    e <u> <v> <edge-label>

Vertex ids may be sparse; they are re-indexed in order of appearance.
A trailing ``t # -1`` terminator is accepted.
"""

import logging
from collections.abc import Iterable
from pathlib import Path
from typing import Optional, TextIO, Union

from ..core.graph import AttributedGraph, GraphLabel, LabeledCollection
from ..exceptions import GraphError, ParseError

logger = logging.getLogger(__name__)


class _GraphBuilder:
    def __init__(self, index: int, label: GraphLabel, line_number: int):
        self.index = index
        self.label = label
        self.line_number = line_number
        self.vertex_ids: dict[int, int] = {}
        self.vertex_labels: list[int] = []
        self.edges: list[tuple[int, int, int]] = []

    def build(self, path: Optional[str]) -> AttributedGraph:
        try:
            return AttributedGraph(tuple(self.vertex_labels), tuple(self.edges))
        except GraphError as e:
            raise ParseError(f"Graph {self.index}: {e}", path, self.line_number) from e


def _ints(parts: list[str], count: int, path: Optional[str], line_number: int) -> list[int]:
    if len(parts) != count:
        raise ParseError(f"Expected {count} fields, got {len(parts)}", path, line_number)
    try:
        return [int(p) for p in parts]
    except ValueError as e:
        raise ParseError(f"Non-integer field in {' '.join(parts)!r}", path, line_number) from e


def parse_transactions(lines: Iterable[str], path: Optional[str] = None) -> LabeledCollection:
    """Parse transaction-format lines into a labeled collection, in file order."""
    builders: list[_GraphBuilder] = []
    current: Optional[_GraphBuilder] = None
    finished = False

    for line_number, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line:
            continue
        parts = line.split()
        kind = parts[0]
        if finished:
            raise ParseError("Content after the 't # -1' terminator", path, line_number)

        if kind == "t":
            if len(parts) >= 3 and parts[1] == "#" and parts[2] == "-1":
                finished = True
                continue
            if len(parts) != 4 or parts[1] != "#":
                raise ParseError(f"Malformed graph header {line!r}", path, line_number)
            index, flag = _ints(parts[2:], 2, path, line_number)
            if index != len(builders):
                raise ParseError(
                    f"Graph index {index} out of sequence, expected {len(builders)}",
                    path,
                    line_number,
                )
            try:
                label = GraphLabel.from_flag(flag)
            except ValueError as e:
                raise ParseError(str(e), path, line_number) from e
            current = _GraphBuilder(index, label, line_number)
            builders.append(current)

        elif kind == "v":
            if current is None:
                raise ParseError("Vertex line before any graph header", path, line_number)
            vertex, label = _ints(parts[1:], 2, path, line_number)
            if vertex in current.vertex_ids:
                raise ParseError(f"Duplicate vertex id {vertex}", path, line_number)
            current.vertex_ids[vertex] = len(current.vertex_labels)
            current.vertex_labels.append(label)

        elif kind == "e":
            if current is None:
                raise ParseError("Edge line before any graph header", path, line_number)
            u, v, label = _ints(parts[1:], 3, path, line_number)
            if u not in current.vertex_ids or v not in current.vertex_ids:
                raise ParseError(f"Edge ({u}, {v}) has a dangling endpoint", path, line_number)
            current.edges.append((current.vertex_ids[u], current.vertex_ids[v], label))

        else:
            raise ParseError(f"Unknown line type {kind!r}", path, line_number)

    return LabeledCollection(
        tuple(b.build(path) for b in builders),
        tuple(b.label for b in builders),
    )


def read_transactions(path: Union[str, Path]) -> LabeledCollection:
    """Read a transaction file."""
    with open(path, encoding="utf-8") as handle:
        collection = parse_transactions(handle, str(path))
    logger.info(f"Read {len(collection)} graphs from {path}")
    return collection


def dump_transactions(collection: LabeledCollection, handle: TextIO) -> None:
    for index, (graph, label) in enumerate(collection):
        handle.write(f"t # {index} {label.flag}\n")
        for v, vertex_label in enumerate(graph.vertex_labels):
            handle.write(f"v {v} {vertex_label}\n")
        for u, v, edge_label in graph.edges:
            handle.write(f"e {u} {v} {edge_label}\n")


def write_transactions(collection: LabeledCollection, path: Union[str, Path]) -> None:
    """Write a collection in normalized form: dense ids, edges sorted with u < v."""
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        dump_transactions(collection, handle)
    logger.info(f"Wrote {len(collection)} graphs to {path}")
