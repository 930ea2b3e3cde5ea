"""
Pattern filtering for PatternWeaver.

Filters select pattern records (as read from a pattern file) by family
membership, size or custom criteria before scoring.
"""

import logging
from abc import ABC, abstractmethod
from typing import TYPE_CHECKING, Callable, Optional, Union

from .selection import PatternFamily

if TYPE_CHECKING:
    from ..io.patterns import PatternRecord

logger = logging.getLogger(__name__)


class PatternFilter(ABC):
    """Abstract base class for pattern filters."""

    @abstractmethod
    def should_include(self, record: "PatternRecord") -> bool:
        """
        Determine if a pattern should be kept.

        Args:
            record: The pattern record to check.

        Returns:
            True to keep the pattern, False to drop it.
        """

    def __and__(self, other: "PatternFilter") -> "CompositeFilter":
        return CompositeFilter([self, other], operator="and")

    def __or__(self, other: "PatternFilter") -> "CompositeFilter":
        return CompositeFilter([self, other], operator="or")

    def __invert__(self) -> "NotFilter":
        return NotFilter(self)


class FamilyFilter(PatternFilter):
    """Keep members of a pattern family; the general family keeps everything."""

    def __init__(self, family: Union[PatternFamily, str]):
        self.family = PatternFamily(family)

    def should_include(self, record: "PatternRecord") -> bool:
        if self.family is PatternFamily.CLOSED:
            return record.closed
        if self.family is PatternFamily.INDUCED:
            return record.induced
        return True

    def __repr__(self) -> str:
        return f"FamilyFilter({self.family.value})"


class SizeFilter(PatternFilter):
    """Keep patterns whose vertex and edge counts fall inside inclusive bounds."""

    def __init__(
        self,
        min_vertices: int = 1,
        max_vertices: Optional[int] = None,
        min_edges: int = 0,
        max_edges: Optional[int] = None,
    ):
        self.min_vertices = min_vertices
        self.max_vertices = max_vertices
        self.min_edges = min_edges
        self.max_edges = max_edges

    def should_include(self, record: "PatternRecord") -> bool:
        code = record.code
        if code.n_vertices < self.min_vertices or code.n_edges < self.min_edges:
            return False
        if self.max_vertices is not None and code.n_vertices > self.max_vertices:
            return False
        return self.max_edges is None or code.n_edges <= self.max_edges

    def __repr__(self) -> str:
        return (
            f"SizeFilter(vertices={self.min_vertices}..{self.max_vertices}, "
            f"edges={self.min_edges}..{self.max_edges})"
        )


class SupportFilter(PatternFilter):
    """Keep patterns held by at least ``min_gf`` graphs."""

    def __init__(self, min_gf: int):
        self.min_gf = min_gf

    def should_include(self, record: "PatternRecord") -> bool:
        return record.stats.gf >= self.min_gf

    def __repr__(self) -> str:
        return f"SupportFilter({self.min_gf})"


class CompositeFilter(PatternFilter):
    """Combine multiple filters with AND or OR logic."""

    def __init__(self, filters: list[PatternFilter], operator: str = "and"):
        """
        Args:
            filters: List of filters to combine.
            operator: Either "and" or "or".
        """
        self.filters = filters
        self.operator = operator.lower()
        if self.operator not in ("and", "or"):
            raise ValueError(f"Operator must be 'and' or 'or', got '{operator}'")

    def should_include(self, record: "PatternRecord") -> bool:
        if self.operator == "and":
            return all(f.should_include(record) for f in self.filters)
        return any(f.should_include(record) for f in self.filters)

    def __repr__(self) -> str:
        return f"CompositeFilter({self.filters}, {self.operator})"


class NotFilter(PatternFilter):
    """Invert another filter's result."""

    def __init__(self, filter_to_invert: PatternFilter):
        self.inner_filter = filter_to_invert

    def should_include(self, record: "PatternRecord") -> bool:
        return not self.inner_filter.should_include(record)

    def __repr__(self) -> str:
        return f"NotFilter({self.inner_filter})"


class CallableFilter(PatternFilter):
    """Filter using a custom callable."""

    def __init__(self, predicate: Callable[["PatternRecord"], bool]):
        self.predicate = predicate

    def should_include(self, record: "PatternRecord") -> bool:
        return self.predicate(record)

    def __repr__(self) -> str:
        return f"CallableFilter({getattr(self.predicate, '__name__', 'predicate')})"


CLOSED_FILTER = FamilyFilter(PatternFamily.CLOSED)
INDUCED_FILTER = FamilyFilter(PatternFamily.INDUCED)
NO_SINGLE_VERTEX_FILTER = SizeFilter(min_edges=1)


def apply_filter(
    records: list["PatternRecord"], filter_: Optional[PatternFilter]
) -> list["PatternRecord"]:
    """
    Apply a filter to a list of pattern records.

    Args:
        records: Records to filter, order is preserved.
        filter_: The filter to apply, or None to keep all records.
    """
    if filter_ is None:
        return records
    kept = [r for r in records if filter_.should_include(r)]
    logger.debug(f"{filter_!r} kept {len(kept)} of {len(records)} patterns")
    return kept
