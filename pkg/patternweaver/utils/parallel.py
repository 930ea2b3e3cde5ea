"""
Ordered parallel map over worker processes.
"""

import logging
import os
from collections.abc import Iterable
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Optional, TypeVar

logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")


def resolve_jobs(jobs: Optional[int]) -> int:
    """``None`` or ``0`` means every available CPU; negative values are rejected."""
    if jobs is None or jobs == 0:
        return os.cpu_count() or 1
    if jobs < 0:
        raise ValueError(f"jobs must be >= 0, got {jobs}")
    return jobs


def parallel_map(fn: Callable[[T], R], items: Iterable[T], jobs: Optional[int] = 1) -> list[R]:
    """
    Apply ``fn`` to every item and return the results in input order.

    With one job (or at most one item) everything runs in this process;
    otherwise items are spread over a process pool. ``fn`` and the items must
    be picklable in that case.
    """
    work = list(items)
    workers = min(resolve_jobs(jobs), len(work))
    if workers <= 1:
        return [fn(item) for item in work]

    logger.debug(f"Mapping {len(work)} items over {workers} processes")
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, work))
