"""
Multi-file benchmark bundles (the layout used by MUTAG, PTC, NCI1, ...).

A bundle directory ``NAME/`` holds:

    NAME_A.txt               "u, v" per line, 1-based global vertex ids
    NAME_graph_indicator.txt graph id (1-based) of vertex i on line i
    NAME_graph_labels.txt    class value of graph i on line i
    NAME_node_labels.txt     optional, vertex label per vertex
    NAME_edge_labels.txt     optional, edge label per line of NAME_A.txt

Absent label files map every vertex or edge to label 0.
"""

import logging
from pathlib import Path
from typing import Optional, Union

import numpy as np
import pandas as pd

from ..core.graph import AttributedGraph, GraphLabel, LabeledCollection
from ..exceptions import GraphError, ParseError

logger = logging.getLogger(__name__)


def _bundle_name(directory: Path) -> str:
    if (directory / f"{directory.name}_A.txt").exists():
        return directory.name
    candidates = sorted(directory.glob("*_A.txt"))
    if len(candidates) != 1:
        raise ParseError(
            f"Expected exactly one *_A.txt file, found {len(candidates)}", directory
        )
    return candidates[0].name[: -len("_A.txt")]


def _read_column(path: Path, columns: int = 1, dtype=int) -> np.ndarray:
    try:
        frame = pd.read_csv(path, header=None, sep=",", skipinitialspace=True, dtype=dtype)
    except pd.errors.EmptyDataError:
        return np.empty((0, columns), dtype=object if dtype is str else int)
    except ValueError as e:
        raise ParseError(f"Unreadable values: {e}", path) from e
    if frame.shape[1] < columns:
        raise ParseError(f"Expected {columns} columns, found {frame.shape[1]}", path)
    return frame.iloc[:, :columns].to_numpy()


def _optional(path: Path, expected: int, what: str) -> Optional[np.ndarray]:
    if not path.exists():
        logger.debug(f"No {what} file, using label 0")
        return None
    values = _read_column(path)[:, 0]
    if len(values) != expected:
        raise ParseError(f"{what} file has {len(values)} lines, expected {expected}", path)
    return values.astype(int)


def read_benchmark(directory: Union[str, Path], positive_label: str = "1") -> LabeledCollection:
    """
    Load a benchmark bundle; graphs whose class value equals ``positive_label``
    become anomalous, the other class normal.
    """
    directory = Path(directory)
    if not directory.is_dir():
        raise ParseError("Benchmark directory not found", directory)
    name = _bundle_name(directory)

    def part(suffix: str) -> Path:
        return directory / f"{name}_{suffix}.txt"

    edges = _read_column(part("A"), columns=2)
    indicator = _read_column(part("graph_indicator"))[:, 0].astype(int)
    class_values = [str(v).strip() for v in _read_column(part("graph_labels"), dtype=str)[:, 0]]
    n_vertices = len(indicator)
    n_graphs = len(class_values)
    vertex_labels = _optional(part("node_labels"), n_vertices, "node_labels")
    edge_labels = _optional(part("edge_labels"), len(edges), "edge_labels")

    if n_vertices and (indicator.min() < 1 or indicator.max() > n_graphs):
        raise ParseError(f"Graph ids must lie in 1..{n_graphs}", part("graph_indicator"))

    distinct = sorted(set(class_values))
    if len(distinct) > 2 or (len(distinct) == 2 and positive_label not in distinct):
        raise ParseError(
            f"Unknown class values {distinct} for positive label {positive_label!r}",
            part("graph_labels"),
        )
    labels = tuple(GraphLabel.A if v == positive_label else GraphLabel.N for v in class_values)

    local = np.zeros(n_vertices, dtype=int)
    per_graph_labels: list[list[int]] = [[] for _ in range(n_graphs)]
    for v in range(n_vertices):
        g = indicator[v] - 1
        local[v] = len(per_graph_labels[g])
        per_graph_labels[g].append(int(vertex_labels[v]) if vertex_labels is not None else 0)

    per_graph_edges: list[dict[tuple[int, int], int]] = [{} for _ in range(n_graphs)]
    self_loops = conflicts = 0
    for row, (u, v) in enumerate(edges):
        u, v = int(u) - 1, int(v) - 1
        if not (0 <= u < n_vertices and 0 <= v < n_vertices):
            raise ParseError(f"Vertex id out of range in edge ({u + 1}, {v + 1})", part("A"), row + 1)
        if indicator[u] != indicator[v]:
            raise ParseError(f"Edge ({u + 1}, {v + 1}) spans two graphs", part("A"), row + 1)
        if u == v:
            self_loops += 1
            continue
        label = int(edge_labels[row]) if edge_labels is not None else 0
        key = tuple(sorted((int(local[u]), int(local[v]))))
        edges_of = per_graph_edges[indicator[u] - 1]
        if key in edges_of:
            if edges_of[key] != label:
                conflicts += 1
            continue
        edges_of[key] = label

    if self_loops:
        logger.warning(f"Dropped {self_loops} self-loops from {name}")
    if conflicts:
        logger.warning(f"Dropped {conflicts} duplicate edges with conflicting labels from {name}")

    graphs = []
    for g in range(n_graphs):
        try:
            graphs.append(
                AttributedGraph(
                    tuple(per_graph_labels[g]),
                    tuple((u, v, label) for (u, v), label in per_graph_edges[g].items()),
                )
            )
        except GraphError as e:
            raise ParseError(f"Graph {g + 1}: {e}", directory) from e

    collection = LabeledCollection(tuple(graphs), labels)
    logger.info(f"Read benchmark {name}: {collection!r}")
    return collection
