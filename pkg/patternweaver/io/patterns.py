"""
Pattern-set files: one tab-separated row per pattern with its canonical
code, per-class statistics, discrimination scores and family flags.
"""

import logging
from collections.abc import Iterable
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Union

import pandas as pd

from ..core.dfscode import DFSCode, Pattern
from ..core.selection import FrequencyKind, PatternFamily, PatternStats, discrimination_score
from ..exceptions import GraphError, ParseError, SchemaError

logger = logging.getLogger(__name__)

STAT_FIELDS = ("gf_a", "gf_n", "sf_a", "sf_n")
INDUCED_FIELDS = tuple(f"ind_{name}" for name in STAT_FIELDS)
COLUMNS = (
    "code",
    "n_vertices",
    "n_edges",
    "size_a",
    "size_n",
    *STAT_FIELDS,
    *INDUCED_FIELDS,
    "disc_gf",
    "disc_sf",
    "score",
    "closed",
    "induced",
)


@dataclass(frozen=True)
class PatternRecord:
    """
    A pattern with general statistics and, for patterns of the induced
    family, the statistics of their induced occurrences.
    """

    pattern: Pattern
    stats: PatternStats
    induced_stats: Optional[PatternStats] = None
    closed: bool = False
    induced: bool = False
    score: float = 0.0

    @property
    def code(self) -> DFSCode:
        return self.pattern.code

    def stats_for(self, family: PatternFamily) -> PatternStats:
        """Statistics matching a family's occurrence kind."""
        if PatternFamily(family) is PatternFamily.INDUCED:
            if self.induced_stats is None:
                raise ValueError(f"Pattern {self.code} has no induced statistics")
            return self.induced_stats
        return self.stats

    def disc(self, kind: FrequencyKind, normalize: bool = False) -> float:
        return discrimination_score(self.stats, kind, normalize)


def _row(record: PatternRecord) -> dict:
    st = record.stats
    row = {
        "code": str(record.code),
        "n_vertices": record.code.n_vertices,
        "n_edges": record.code.n_edges,
        "size_a": st.size_a,
        "size_n": st.size_n,
        "gf_a": st.gf_a,
        "gf_n": st.gf_n,
        "sf_a": st.sf_a,
        "sf_n": st.sf_n,
    }
    ind = record.induced_stats
    for name, column in zip(STAT_FIELDS, INDUCED_FIELDS):
        row[column] = getattr(ind, name) if ind is not None else None
    row["disc_gf"] = record.disc(FrequencyKind.GF)
    row["disc_sf"] = record.disc(FrequencyKind.SF)
    row["score"] = float(record.score)
    row["closed"] = int(record.closed)
    row["induced"] = int(record.induced)
    return row


def file_order(records: Iterable[PatternRecord]) -> list[PatternRecord]:
    """Score descending, then canonical code ascending."""
    return sorted(records, key=lambda r: (-r.score, r.code.sort_key))


def write_patterns(
    records: Iterable[PatternRecord],
    path: Union[str, Path],
    keep_order: bool = False,
) -> int:
    """
    Write a pattern-set file.

    Args:
        records: Patterns to write.
        path: Output file.
        keep_order: Write in the given order (a ranked selection) instead of
            the default score/code order.

    Returns:
        Number of rows written.
    """
    ordered = list(records) if keep_order else file_order(records)
    frame = pd.DataFrame([_row(r) for r in ordered], columns=list(COLUMNS))
    for column in INDUCED_FIELDS:
        frame[column] = pd.array(frame[column].tolist(), dtype="Int64")
    frame.to_csv(path, sep="\t", index=False, na_rep="")
    logger.info(f"Wrote {len(ordered)} patterns to {path}")
    return len(ordered)


def _optional_int(value) -> Optional[int]:
    return None if pd.isna(value) else int(value)


def read_patterns(path: Union[str, Path]) -> list[PatternRecord]:
    """Read a pattern-set file back, in file order."""
    frame = pd.read_csv(path, sep="\t", dtype={"code": str})
    missing = [c for c in COLUMNS if c not in frame.columns]
    if missing:
        raise SchemaError(missing, path)

    records = []
    for offset, row in enumerate(frame.itertuples(index=False)):
        line = offset + 2
        try:
            pattern = Pattern.from_code(DFSCode.parse(row.code))
            stats = PatternStats(
                int(row.gf_a), int(row.gf_n), int(row.sf_a), int(row.sf_n),
                int(row.size_a), int(row.size_n),
            )
            ind_values = [_optional_int(getattr(row, c)) for c in INDUCED_FIELDS]
            induced_stats = None
            if all(v is not None for v in ind_values):
                induced_stats = PatternStats(*ind_values, int(row.size_a), int(row.size_n))
        except (GraphError, ValueError, TypeError) as e:
            raise ParseError(str(e), path, line) from e
        records.append(
            PatternRecord(
                pattern=pattern,
                stats=stats,
                induced_stats=induced_stats,
                closed=bool(int(row.closed)),
                induced=bool(int(row.induced)),
                score=float(row.score),
            )
        )
    logger.debug(f"Read {len(records)} patterns from {path}")
    return records
