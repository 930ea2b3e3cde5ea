"""Shared fixtures."""

import os
from pathlib import Path

import pytest

from patternweaver.core.metrics import init_metrics

from .helpers import TRIANGLE, make_collection, make_graph


@pytest.fixture(autouse=True)
def disabled_metrics():
    """Every test starts from a disabled global metrics instance."""
    yield init_metrics(enabled=False)


@pytest.fixture
def small_collection():
    """Eight small graphs over two vertex labels and two edge labels."""
    return make_collection(
        [
            (make_graph((0, 0, 1), [(0, 1, 0), (1, 2, 0), (0, 2, 0)]), "A"),
            (make_graph((0, 0, 1, 1), [(0, 1, 0), (1, 2, 0), (2, 3, 1), (0, 2, 0)]), "A"),
            (make_graph((0, 1, 0), [(0, 1, 0), (1, 2, 0)]), "A"),
            (make_graph((0, 0, 0), [(0, 1, 0), (1, 2, 0)]), "N"),
            (make_graph((1, 1), [(0, 1, 1)]), "N"),
            (make_graph((0, 1, 1, 0), [(0, 1, 0), (1, 2, 1), (2, 3, 0)]), "N"),
            (make_graph((0, 0), [(0, 1, 0)]), "N"),
            (make_graph((1, 0, 0, 1), [(0, 1, 0), (1, 2, 0), (2, 3, 0), (3, 0, 0)]), "A"),
        ]
    )


@pytest.fixture
def triangles():
    """Two identical all-zero triangles."""
    return make_collection([(TRIANGLE, "A"), (TRIANGLE, "N")])


def _separable_pairs(copies: int):
    pairs = []
    for _ in range(copies):
        pairs.append((make_graph((0, 2, 0), [(0, 1, 0), (1, 2, 0)]), "A"))
        pairs.append((make_graph((0, 1, 0), [(0, 1, 0), (1, 2, 0)]), "N"))
    return pairs


@pytest.fixture
def separable_collection():
    """Ten anomalous graphs holding label 2, ten normal graphs holding label 1."""
    return make_collection(_separable_pairs(10))


@pytest.fixture
def data_dir() -> Path:
    """Root of the real datasets; dataset tests skip without it."""
    root = os.environ.get("PATTERNWEAVER_DATA")
    if not root or not Path(root).is_dir():
        pytest.skip("PATTERNWEAVER_DATA is not set")
    return Path(root)
