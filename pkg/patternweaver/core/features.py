"""
Vector representations of graphs over an ordered pattern set.

Each graph becomes one row: a presence bit (binary mode) or an occurrence
count (integer mode) per selected pattern.
"""

import logging
from collections.abc import Sequence
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Union

import numpy as np

from ..utils.parallel import parallel_map, resolve_jobs
from .dfscode import Pattern
from .graph import AttributedGraph, LabeledCollection
from .matcher import MatchMode, count_occurrences, exists
from .selection import FrequencyKind, PatternFamily, ScoredPattern

logger = logging.getLogger(__name__)


class FeatureMode(str, Enum):
    BINARY = "bin"
    INTEGER = "occ"

    @property
    def frequency_kind(self) -> FrequencyKind:
        """Frequency that ranks patterns for this mode: GF for binary, SF for counts."""
        return FrequencyKind.GF if self is FeatureMode.BINARY else FrequencyKind.SF


class Representation(str, Enum):
    """The six family x mode combinations."""

    GEN_BIN = "gen-bin"
    GEN_OCC = "gen-occ"
    IND_BIN = "ind-bin"
    IND_OCC = "ind-occ"
    CLO_BIN = "clo-bin"
    CLO_OCC = "clo-occ"

    @classmethod
    def of(cls, family: PatternFamily, mode: FeatureMode) -> "Representation":
        return cls(f"{PatternFamily(family).value}-{FeatureMode(mode).value}")

    @property
    def family(self) -> PatternFamily:
        return PatternFamily(self.value.split("-")[0])

    @property
    def mode(self) -> FeatureMode:
        return FeatureMode(self.value.split("-")[1])


def count_mode_for(family: PatternFamily, ind_count_mode: Optional[MatchMode] = None) -> MatchMode:
    """Occurrence kind used when vectorizing a family's patterns."""
    if PatternFamily(family) is PatternFamily.INDUCED:
        return MatchMode(ind_count_mode) if ind_count_mode is not None else MatchMode.INDUCED
    return MatchMode.GENERAL


@dataclass(frozen=True)
class FeatureMatrix:
    """Rows are graphs in collection order, columns follow the pattern order."""

    values: np.ndarray
    pattern_ids: tuple[str, ...]
    mode: FeatureMode
    family: PatternFamily

    def __post_init__(self) -> None:
        values = np.asarray(self.values, dtype=np.int64)
        if values.ndim != 2:
            raise ValueError(f"Feature values must be a 2-D array, got shape {values.shape}")
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "pattern_ids", tuple(self.pattern_ids))
        object.__setattr__(self, "mode", FeatureMode(self.mode))
        object.__setattr__(self, "family", PatternFamily(self.family))
        if values.shape[1] != len(self.pattern_ids):
            raise ValueError(
                f"Matrix has {values.shape[1]} columns but {len(self.pattern_ids)} pattern ids"
            )
        if (values < 0).any():
            raise ValueError("Feature values must be non-negative")
        if self.mode is FeatureMode.BINARY and (values > 1).any():
            raise ValueError("Binary feature matrix holds values other than 0 and 1")

    @property
    def shape(self) -> tuple[int, int]:
        return self.values.shape

    def to_binary(self) -> "FeatureMatrix":
        return FeatureMatrix(
            (self.values >= 1).astype(np.int64), self.pattern_ids, FeatureMode.BINARY, self.family
        )

    def as_model_input(self, log_scale: bool = False) -> np.ndarray:
        """Float view for training; ``log_scale`` applies log1p to integer counts."""
        if log_scale and self.mode is FeatureMode.INTEGER:
            return np.log1p(self.values.astype(float))
        return self.values.astype(float)


PatternList = Sequence[Union[Pattern, ScoredPattern]]


def _patterns(patterns: PatternList) -> list[Pattern]:
    return [p.pattern if isinstance(p, ScoredPattern) else p for p in patterns]


def vectorize(
    graph: AttributedGraph,
    patterns: PatternList,
    mode: FeatureMode = FeatureMode.BINARY,
    family: PatternFamily = PatternFamily.GENERAL,
    ind_count_mode: Optional[MatchMode] = None,
) -> np.ndarray:
    """
    Feature vector of one graph.

    Binary entries mark presence, integer entries count mappings; the family
    picks general or induced occurrences.
    """
    match = count_mode_for(family, ind_count_mode)
    mode = FeatureMode(mode)
    plain = _patterns(patterns)
    if mode is FeatureMode.BINARY:
        row = [1 if exists(p, graph, match) else 0 for p in plain]
    else:
        row = [count_occurrences(p, graph, match) for p in plain]
    return np.asarray(row, dtype=np.int64)


def _vectorize_rows(
    args: tuple[list[AttributedGraph], list[Pattern], FeatureMode, PatternFamily, Optional[MatchMode]],
) -> list[np.ndarray]:
    graphs, patterns, mode, family, ind_count_mode = args
    return [vectorize(g, patterns, mode, family, ind_count_mode) for g in graphs]


def build_matrix(
    collection: Union[LabeledCollection, Sequence[AttributedGraph]],
    patterns: PatternList,
    mode: FeatureMode = FeatureMode.BINARY,
    family: PatternFamily = PatternFamily.GENERAL,
    ind_count_mode: Optional[MatchMode] = None,
    jobs: Optional[int] = 1,
) -> FeatureMatrix:
    """Stack ``vectorize`` over every graph, in collection order."""
    graphs = list(collection.graphs if isinstance(collection, LabeledCollection) else collection)
    plain = _patterns(patterns)
    mode = FeatureMode(mode)
    family = PatternFamily(family)
    pattern_ids = tuple(str(p.code) for p in plain)

    if not graphs:
        values = np.zeros((0, len(plain)), dtype=np.int64)
    else:
        n_parts = max(1, min(len(graphs), resolve_jobs(jobs)))
        parts = [p.tolist() for p in np.array_split(np.arange(len(graphs)), n_parts)]
        tasks = [([graphs[i] for i in part], plain, mode, family, ind_count_mode) for part in parts if part]
        rows = [row for chunk in parallel_map(_vectorize_rows, tasks, jobs) for row in chunk]
        values = np.vstack(rows) if plain else np.zeros((len(graphs), 0), dtype=np.int64)

    logger.debug(f"Built {values.shape[0]}x{values.shape[1]} {family.value}-{mode.value} matrix")
    return FeatureMatrix(values, pattern_ids, mode, family)
