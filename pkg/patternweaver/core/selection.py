"""
Pattern statistics, pattern families and discriminative selection.

Graph frequency (GF) counts the graphs of a class holding at least one
occurrence of a pattern; subgraph frequency (SF) sums the occurrence counts.
The discrimination score of a pattern is ``|F_A - F_N|`` for F in {GF, SF}.
"""

import logging
from collections import defaultdict
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Union

import numpy as np
import pandas as pd

from ..utils.parallel import parallel_map, resolve_jobs
from .dfscode import Pattern
from .graph import AttributedGraph, GraphLabel, LabeledCollection
from .matcher import MatchMode, count_occurrences, exists_general, exists_induced
from .miner import MinedPattern

logger = logging.getLogger(__name__)

PatternInput = Union[Pattern, MinedPattern, "ScoredPattern"]


class PatternFamily(str, Enum):
    """Which mined patterns a representation draws from."""

    GENERAL = "gen"
    INDUCED = "ind"
    CLOSED = "clo"

    @property
    def match_mode(self) -> MatchMode:
        """Occurrence kind used for this family's statistics."""
        return MatchMode.INDUCED if self is PatternFamily.INDUCED else MatchMode.GENERAL


class FrequencyKind(str, Enum):
    GF = "gf"
    SF = "sf"


@dataclass(frozen=True)
class PatternStats:
    """Per-class frequencies of one pattern, with the class sizes they refer to."""

    gf_a: int
    gf_n: int
    sf_a: int
    sf_n: int
    size_a: int
    size_n: int

    def __post_init__(self) -> None:
        if not (0 <= self.gf_a <= self.size_a and 0 <= self.gf_n <= self.size_n):
            raise ValueError(f"Graph frequencies exceed class sizes: {self}")
        if self.sf_a < self.gf_a or self.sf_n < self.gf_n:
            raise ValueError(f"Subgraph frequency below graph frequency: {self}")

    @property
    def gf(self) -> int:
        return self.gf_a + self.gf_n

    @property
    def sf(self) -> int:
        return self.sf_a + self.sf_n

    def frequencies(self, kind: FrequencyKind, normalize: bool = False) -> tuple[float, float]:
        """(F_A, F_N) for the given kind, optionally divided by the class sizes."""
        kind = FrequencyKind(kind)
        f_a, f_n = (self.gf_a, self.gf_n) if kind is FrequencyKind.GF else (self.sf_a, self.sf_n)
        if not normalize:
            return float(f_a), float(f_n)
        return (
            f_a / self.size_a if self.size_a else 0.0,
            f_n / self.size_n if self.size_n else 0.0,
        )


def _unwrap(pattern: PatternInput) -> Pattern:
    if isinstance(pattern, (MinedPattern, ScoredPattern)):
        return pattern.pattern
    return pattern


def _count_chunk(
    args: tuple[list[Pattern], list[Optional[tuple[int, ...]]], tuple[AttributedGraph, ...], tuple[GraphLabel, ...], MatchMode],
) -> list[tuple[int, int, int, int]]:
    patterns, hosts, graphs, labels, mode = args
    rows = []
    for pattern, host_ids in zip(patterns, hosts):
        gf = {GraphLabel.A: 0, GraphLabel.N: 0}
        sf = {GraphLabel.A: 0, GraphLabel.N: 0}
        candidates = range(len(graphs)) if host_ids is None else host_ids
        for gi in candidates:
            count = count_occurrences(pattern, graphs[gi], mode)
            if count:
                gf[labels[gi]] += 1
                sf[labels[gi]] += count
        rows.append((gf[GraphLabel.A], gf[GraphLabel.N], sf[GraphLabel.A], sf[GraphLabel.N]))
    return rows


def _chunks(n_items: int, jobs: Optional[int]) -> list[range]:
    parts = max(1, min(resolve_jobs(jobs), n_items))
    bounds = np.linspace(0, n_items, parts + 1).astype(int)
    return [range(bounds[k], bounds[k + 1]) for k in range(parts) if bounds[k] < bounds[k + 1]]


def compute_stats(
    patterns: Sequence[PatternInput],
    collection: LabeledCollection,
    mode: MatchMode = MatchMode.GENERAL,
    use_hosts: bool = True,
    jobs: Optional[int] = 1,
) -> list[PatternStats]:
    """
    GF and SF of every pattern over each class of ``collection``.

    Mined patterns remember the graphs that hold them; with ``use_hosts``
    only those graphs are scanned, which is only valid when ``collection`` is
    the collection they were mined from.
    """
    if not patterns:
        return []
    mode = MatchMode(mode)
    plain = [_unwrap(p) for p in patterns]
    hosts = [
        p.graph_ids if use_hosts and isinstance(p, MinedPattern) else None for p in patterns
    ]
    graphs = tuple(collection.graphs)
    labels = tuple(collection.labels)
    tasks = [
        ([plain[k] for k in part], [hosts[k] for k in part], graphs, labels, mode)
        for part in _chunks(len(plain), jobs)
    ]
    size_a = collection.class_size(GraphLabel.A)
    size_n = collection.class_size(GraphLabel.N)
    stats = []
    for rows in parallel_map(_count_chunk, tasks, jobs):
        for gf_a, gf_n, sf_a, sf_n in rows:
            stats.append(PatternStats(gf_a, gf_n, sf_a, sf_n, size_a, size_n))
    logger.debug(f"Computed {mode.value} stats for {len(stats)} patterns")
    return stats


def filter_closed(mined: Sequence[MinedPattern]) -> list[MinedPattern]:
    """
    Keep patterns that no one-edge-larger pattern of the set contains with
    the same graph frequency.

    On a complete frequent set this is exactly closedness: a containing
    pattern with equal frequency holds the same graphs, and a chain of
    one-edge steps leads to it through patterns of that same frequency.
    """
    by_edges_and_hosts: dict[tuple[int, tuple[int, ...]], list[MinedPattern]] = defaultdict(list)
    for m in mined:
        by_edges_and_hosts[(m.pattern.n_edges, m.graph_ids)].append(m)

    closed = []
    for m in mined:
        supers = by_edges_and_hosts.get((m.pattern.n_edges + 1, m.graph_ids), [])
        if not any(exists_general(m.pattern, s.pattern.graph) for s in supers):
            closed.append(m)
    logger.info(f"Closed filter kept {len(closed)} of {len(mined)} patterns")
    return closed


def _induced_chunk(
    args: tuple[list[Pattern], list[Optional[tuple[int, ...]]], tuple[AttributedGraph, ...]],
) -> list[bool]:
    patterns, hosts, graphs = args
    flags = []
    for pattern, host_ids in zip(patterns, hosts):
        candidates = range(len(graphs)) if host_ids is None else host_ids
        flags.append(any(exists_induced(pattern, graphs[gi]) for gi in candidates))
    return flags


def induced_flags(
    patterns: Sequence[PatternInput],
    collection: LabeledCollection,
    use_hosts: bool = True,
    jobs: Optional[int] = 1,
) -> list[bool]:
    """Per pattern, whether some graph of the collection holds it as an induced subgraph."""
    if not patterns:
        return []
    plain = [_unwrap(p) for p in patterns]
    hosts = [
        p.graph_ids if use_hosts and isinstance(p, MinedPattern) else None for p in patterns
    ]
    graphs = tuple(collection.graphs)
    tasks = [
        ([plain[k] for k in part], [hosts[k] for k in part], graphs)
        for part in _chunks(len(plain), jobs)
    ]
    return [flag for chunk in parallel_map(_induced_chunk, tasks, jobs) for flag in chunk]


def filter_induced(
    patterns: Sequence[PatternInput],
    collection: LabeledCollection,
    use_hosts: bool = True,
    jobs: Optional[int] = 1,
) -> list[PatternInput]:
    """Keep patterns that occur as an induced subgraph of at least one graph."""
    flags = induced_flags(patterns, collection, use_hosts=use_hosts, jobs=jobs)
    kept = [p for p, flag in zip(patterns, flags) if flag]
    logger.info(f"Induced filter kept {len(kept)} of {len(patterns)} patterns")
    return kept


def discrimination_score(
    stats: PatternStats, kind: FrequencyKind = FrequencyKind.GF, normalize: bool = False
) -> float:
    """``|F_A - F_N|``; with ``normalize`` each frequency is divided by its class size."""
    f_a, f_n = stats.frequencies(kind, normalize)
    return abs(f_a - f_n)


@dataclass(frozen=True)
class ScoredPattern:
    """A pattern with the statistics and score used to rank it."""

    pattern: Pattern
    stats: PatternStats
    score: float

    @property
    def sort_key(self) -> tuple:
        return (-self.score, -self.stats.gf, self.pattern.sort_key)


def score_patterns(
    patterns: Sequence[PatternInput],
    stats: Sequence[PatternStats],
    kind: FrequencyKind,
    normalize: bool = False,
) -> list[ScoredPattern]:
    if len(patterns) != len(stats):
        raise ValueError(f"Got {len(patterns)} patterns but {len(stats)} stats")
    return [
        ScoredPattern(_unwrap(p), st, discrimination_score(st, kind, normalize))
        for p, st in zip(patterns, stats)
    ]


def rank_patterns(scored: Iterable[ScoredPattern]) -> list[ScoredPattern]:
    """Score descending, then GF descending, then canonical code ascending."""
    return sorted(scored, key=lambda sp: sp.sort_key)


def select_top(scored: Iterable[ScoredPattern], s: Optional[int] = None) -> list[ScoredPattern]:
    """The ``s`` best-ranked patterns; all of them when ``s`` is None or too large."""
    if s is not None and s < 1:
        raise ValueError(f"s must be >= 1, got {s}")
    ranked = rank_patterns(scored)
    return ranked if s is None else ranked[:s]


def score_distribution(scores: Sequence[float], bin_width: float = 1.0) -> pd.DataFrame:
    """
    Histogram of discrimination scores over ``[0, max]`` with fixed-width bins.

    Returns:
        DataFrame with columns lower, upper, count, share. Bins are closed on
        the left; the last one also holds the maximum.
    """
    if bin_width <= 0:
        raise ValueError(f"bin_width must be > 0, got {bin_width}")
    values = np.asarray(scores, dtype=float)
    if values.size == 0:
        return pd.DataFrame(columns=["lower", "upper", "count", "share"])
    n_bins = max(1, int(np.floor(values.max() / bin_width)) + 1)
    edges = np.arange(n_bins + 1, dtype=float) * bin_width
    counts, _ = np.histogram(values, bins=edges)
    return pd.DataFrame(
        {
            "lower": edges[:-1],
            "upper": edges[1:],
            "count": counts.astype(int),
            "share": counts / values.size,
        }
    )


def share_within(scores: Sequence[float], low: float, high: float) -> float:
    """Fraction of scores inside ``[low, high]``."""
    values = np.asarray(scores, dtype=float)
    if values.size == 0:
        return 0.0
    return float(np.mean((values >= low) & (values <= high)))


def novel_patterns(
    selected: Iterable[PatternInput], reference: Iterable[PatternInput]
) -> list[Pattern]:
    """Patterns of ``selected`` that do not appear in ``reference``, in input order."""
    known = {_unwrap(p).code for p in reference}
    return [_unwrap(p) for p in selected if _unwrap(p).code not in known]
