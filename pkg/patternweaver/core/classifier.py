"""
Linear soft-margin SVM over pattern vectors, and per-class scoring.
"""

import logging
import warnings
from collections.abc import Sequence
from dataclasses import dataclass
from typing import Union

import numpy as np
from sklearn.exceptions import ConvergenceWarning
from sklearn.metrics import confusion_matrix, precision_recall_fscore_support
from sklearn.svm import LinearSVC

from ..exceptions import TrainingError
from .graph import GraphLabel

logger = logging.getLogger(__name__)

LabelLike = Union[GraphLabel, str]
_CLASS_ORDER = [GraphLabel.A.value, GraphLabel.N.value]


def _values(labels: Sequence[LabelLike]) -> np.ndarray:
    return np.array([GraphLabel(label).value for label in labels], dtype=object)


@dataclass(frozen=True)
class LinearModel:
    """Decision function ``w . x + b``; positive margins mean anomalous."""

    weights: np.ndarray
    bias: float
    C: float
    seed: int

    @property
    def n_features(self) -> int:
        return int(self.weights.shape[0])

    def decision(self, X: np.ndarray) -> np.ndarray:
        X = np.asarray(X, dtype=float)
        if X.ndim == 1:
            X = X.reshape(1, -1)
        if X.shape[1] != self.n_features:
            raise TrainingError(
                f"Model expects {self.n_features} features, got vectors of length {X.shape[1]}"
            )
        return X @ self.weights + self.bias


def train(
    X: np.ndarray,
    labels: Sequence[LabelLike],
    C: float = 1.0,
    seed: int = 42,
    max_iter: int = 100_000,
) -> LinearModel:
    """
    Fit a hinge-loss linear SVM by dual coordinate descent.

    Raises:
        TrainingError: when the fold holds a single class or shapes disagree.
    """
    X = np.asarray(X, dtype=float)
    y = _values(labels)
    if X.ndim != 2 or X.shape[0] != len(y):
        raise TrainingError(f"Got {X.shape} features for {len(y)} labels")
    if X.shape[1] == 0:
        raise TrainingError("Cannot train on zero features")
    present = set(y.tolist())
    if len(present) < 2:
        raise TrainingError(
            f"Training data holds only class {present or '{}'}; "
            "use stratified folds so every fold sees both classes"
        )
    if C <= 0:
        raise TrainingError(f"C must be > 0, got {C}")

    target = np.where(y == GraphLabel.A.value, 1, -1)
    svm = LinearSVC(C=C, loss="hinge", dual=True, random_state=seed, max_iter=max_iter)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", ConvergenceWarning)
        svm.fit(X, target)
    if any(issubclass(w.category, ConvergenceWarning) for w in caught):
        logger.warning(f"SVM did not converge within {max_iter} iterations")

    return LinearModel(
        weights=svm.coef_.ravel().astype(float).copy(),
        bias=float(svm.intercept_[0]),
        C=C,
        seed=seed,
    )


def predict(model: LinearModel, vector: Sequence[float]) -> GraphLabel:
    """A when the margin is strictly positive, N otherwise (ties go to N)."""
    vector = np.asarray(vector, dtype=float)
    if vector.ndim != 1:
        raise TrainingError(f"Expected one vector, got shape {vector.shape}")
    margin = model.decision(vector)[0]
    return GraphLabel.A if margin > 0 else GraphLabel.N


def predict_many(model: LinearModel, X: np.ndarray) -> list[GraphLabel]:
    X = np.asarray(X, dtype=float)
    if X.shape[0] == 0:
        return []
    margins = model.decision(X)
    return [GraphLabel.A if m > 0 else GraphLabel.N for m in margins]


def hinge_loss(model: LinearModel, X: np.ndarray, labels: Sequence[LabelLike]) -> float:
    """Mean hinge loss of ``model`` on labeled vectors."""
    target = np.where(_values(labels) == GraphLabel.A.value, 1.0, -1.0)
    return float(np.mean(np.maximum(0.0, 1.0 - target * model.decision(X))))


@dataclass(frozen=True)
class ClassMetrics:
    precision: float
    recall: float
    f_score: float
    support: int


def class_metrics(
    predictions: Sequence[LabelLike], golds: Sequence[LabelLike], positive: LabelLike
) -> ClassMetrics:
    """Precision, recall and F-score with ``positive`` as the positive class."""
    if len(predictions) != len(golds):
        raise ValueError(f"Got {len(predictions)} predictions for {len(golds)} gold labels")
    positive = GraphLabel(positive).value
    if len(golds) == 0:
        return ClassMetrics(0.0, 0.0, 0.0, 0)
    precision, recall, f_score, support = precision_recall_fscore_support(
        _values(golds),
        _values(predictions),
        labels=[positive],
        average=None,
        zero_division=0,
    )
    return ClassMetrics(
        float(precision[0]), float(recall[0]), float(f_score[0]), int(support[0])
    )


def f_score(
    predictions: Sequence[LabelLike], golds: Sequence[LabelLike], positive: LabelLike = GraphLabel.A
) -> float:
    """Harmonic mean of precision and recall for ``positive``; 0 when both are 0."""
    return class_metrics(predictions, golds, positive).f_score


def confusion(predictions: Sequence[LabelLike], golds: Sequence[LabelLike]) -> dict[str, int]:
    """Counts with A as the positive class: tp, fp, fn, tn."""
    if len(golds) == 0:
        return {"tp": 0, "fp": 0, "fn": 0, "tn": 0}
    matrix = confusion_matrix(_values(golds), _values(predictions), labels=_CLASS_ORDER)
    return {
        "tp": int(matrix[0, 0]),
        "fn": int(matrix[0, 1]),
        "fp": int(matrix[1, 0]),
        "tn": int(matrix[1, 1]),
    }
