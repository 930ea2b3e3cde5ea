"""
Feature matrices as delimiter-separated files: header ``p0,...,p{s-1},label``,
one row per graph in collection order, label written as ``A`` or ``N``.
"""

import logging
from collections.abc import Sequence
from pathlib import Path
from typing import Union

import numpy as np
import pandas as pd

from ..core.features import FeatureMatrix, FeatureMode
from ..core.graph import GraphLabel
from ..core.selection import PatternFamily
from ..exceptions import ParseError, SchemaError

logger = logging.getLogger(__name__)

LABEL_COLUMN = "label"


def write_matrix(
    matrix: FeatureMatrix,
    labels: Sequence[GraphLabel],
    path: Union[str, Path],
    sep: str = ",",
) -> None:
    """Write the matrix with the class of each row in the last column."""
    if len(labels) != matrix.shape[0]:
        raise ValueError(f"Matrix has {matrix.shape[0]} rows but {len(labels)} labels")
    columns = [f"p{j}" for j in range(matrix.shape[1])]
    frame = pd.DataFrame(matrix.values, columns=columns)
    frame[LABEL_COLUMN] = [GraphLabel(label).value for label in labels]
    frame.to_csv(path, sep=sep, index=False)
    logger.info(f"Wrote {matrix.shape[0]}x{matrix.shape[1]} matrix to {path}")


def read_matrix(
    path: Union[str, Path],
    mode: FeatureMode = FeatureMode.BINARY,
    family: PatternFamily = PatternFamily.GENERAL,
    sep: str = ",",
) -> tuple[FeatureMatrix, list[GraphLabel]]:
    """
    Read a matrix file back. Pattern ids are the column names, since the
    file does not carry canonical codes.
    """
    frame = pd.read_csv(path, sep=sep, dtype={LABEL_COLUMN: str})
    if LABEL_COLUMN not in frame.columns:
        raise SchemaError([LABEL_COLUMN], path)
    feature_columns = [c for c in frame.columns if c != LABEL_COLUMN]
    try:
        labels = [GraphLabel(v) for v in frame[LABEL_COLUMN]]
        values = frame[feature_columns].to_numpy(dtype=np.int64)
        values = values.reshape(len(frame), len(feature_columns))
        matrix = FeatureMatrix(values, tuple(feature_columns), mode, family)
    except ValueError as e:
        raise ParseError(str(e), path) from e
    return matrix, labels
