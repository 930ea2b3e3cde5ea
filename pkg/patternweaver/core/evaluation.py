"""
k-fold cross-validation of the pattern pipeline.

Each fold mines, scores and selects patterns on its training graphs only
(unless ``mine_once`` / ``rank_on_full`` ask otherwise), vectorizes both
splits, trains the SVM and scores the held-out graphs per class.
"""

import logging
from collections.abc import Sequence
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from sklearn.model_selection import KFold, StratifiedKFold

from ..exceptions import EvaluationError
from .classifier import ClassMetrics, class_metrics, confusion, predict_many, train
from .features import build_matrix
from .graph import GraphLabel, LabeledCollection
from .metrics import get_metrics
from .miner import mine
from .pipeline import PipelineConfig, discover_patterns, family_members

logger = logging.getLogger(__name__)

FoldHook = Callable[[int, LabeledCollection], None]


@dataclass(frozen=True)
class FoldResult:
    """Scores of one held-out fold."""

    fold: int
    train_size: int
    test_size: int
    n_patterns: int
    metrics: dict[GraphLabel, ClassMetrics]
    confusion: dict[str, int]
    worst_score: Optional[float] = None


@dataclass(frozen=True)
class ClassScores:
    mean_f_score: float
    std_f_score: float
    mean_precision: float
    mean_recall: float


@dataclass(frozen=True)
class EvalReport:
    """Per-fold results and their per-class aggregates (population std)."""

    config: PipelineConfig
    folds: list[FoldResult]
    stratified: bool = True
    summary: dict[GraphLabel, ClassScores] = field(default_factory=dict)

    @classmethod
    def from_folds(
        cls, config: PipelineConfig, folds: Sequence[FoldResult], stratified: bool = True
    ) -> "EvalReport":
        summary = {}
        for label in GraphLabel:
            f = np.array([fr.metrics[label].f_score for fr in folds], dtype=float)
            p = np.array([fr.metrics[label].precision for fr in folds], dtype=float)
            r = np.array([fr.metrics[label].recall for fr in folds], dtype=float)
            summary[label] = ClassScores(
                mean_f_score=float(f.mean()) if f.size else 0.0,
                std_f_score=float(f.std()) if f.size else 0.0,
                mean_precision=float(p.mean()) if p.size else 0.0,
                mean_recall=float(r.mean()) if r.size else 0.0,
            )
        return cls(config, list(folds), stratified, summary)

    def mean_f(self, label: GraphLabel = GraphLabel.A) -> float:
        return self.summary[GraphLabel(label)].mean_f_score

    def std_f(self, label: GraphLabel = GraphLabel.A) -> float:
        return self.summary[GraphLabel(label)].std_f_score


def make_folds(
    collection: LabeledCollection, k: int, seed: int
) -> tuple[list[tuple[np.ndarray, np.ndarray]], bool]:
    """
    Stratified (train, test) index pairs; falls back to plain shuffled folds
    when a class has fewer than ``k`` members.

    Returns:
        The folds and whether they are stratified.
    """
    n = len(collection)
    if k < 2:
        raise EvaluationError(f"k must be >= 2, got {k}")
    if n < k:
        raise EvaluationError(f"Collection has {n} graphs, fewer than k={k} folds")
    y = np.array([label.value for label in collection.labels])
    smallest = min(collection.class_size(label) for label in GraphLabel)
    placeholder = np.zeros(n)
    if smallest >= k:
        splitter = StratifiedKFold(n_splits=k, shuffle=True, random_state=seed)
        return list(splitter.split(placeholder, y)), True
    logger.warning(
        f"A class has {smallest} graphs, fewer than k={k}; using non-stratified folds"
    )
    splitter = KFold(n_splits=k, shuffle=True, random_state=seed)
    return list(splitter.split(placeholder)), False


def cross_validate(
    collection: LabeledCollection,
    config: PipelineConfig,
    fold_hook: Optional[FoldHook] = None,
) -> EvalReport:
    """
    Run the configured representation under k-fold cross-validation.

    Args:
        collection: Labeled graphs.
        config: Pipeline settings, including k and the seed.
        fold_hook: Called per fold with the collection patterns are mined
            from, before mining.

    Raises:
        EvaluationError: too few graphs, or a fold selects no pattern.
        TrainingError: a training fold holds one class only.
    """
    metrics = get_metrics()
    folds, stratified = make_folds(collection, config.k, config.seed)

    shared_mined = shared_members = None
    if config.mine_once:
        if fold_hook is not None:
            fold_hook(-1, collection)
        shared_mined = mine(
            collection, config.minsup, config.max_vertices, config.max_edges, jobs=config.jobs
        )
        shared_members = family_members(shared_mined, collection, config.family, jobs=config.jobs)

    results = []
    for fold, (train_idx, test_idx) in enumerate(folds):
        with metrics.measure_stage("fold"):
            train_set = collection.subset(train_idx.tolist())
            test_set = collection.subset(test_idx.tolist())
            if config.mine_once:
                source = collection
            else:
                source = train_set
                if fold_hook is not None:
                    fold_hook(fold, train_set)
            ranking = collection if config.rank_on_full else train_set

            discovery = discover_patterns(
                source, config, ranking=ranking, mined=shared_mined, members=shared_members
            )
            if not discovery.selected:
                raise EvaluationError(
                    f"Fold {fold} selected no pattern; lower minsup or widen the caps"
                )

            patterns = discovery.selected
            X_train = build_matrix(
                train_set, patterns, config.mode, config.family, config.ind_count_mode, config.jobs
            )
            X_test = build_matrix(
                test_set, patterns, config.mode, config.family, config.ind_count_mode, config.jobs
            )
            model = train(
                X_train.as_model_input(config.log_scale), train_set.labels, config.C, config.seed
            )
            predictions = predict_many(model, X_test.as_model_input(config.log_scale))
            golds = test_set.labels

            result = FoldResult(
                fold=fold,
                train_size=len(train_set),
                test_size=len(test_set),
                n_patterns=len(patterns),
                metrics={label: class_metrics(predictions, golds, label) for label in GraphLabel},
                confusion=confusion(predictions, golds),
                worst_score=discovery.worst_selected_score,
            )
        results.append(result)
        metrics.record_fold_completed()
        logger.info(
            f"Fold {fold + 1}/{len(folds)}: F(A)={result.metrics[GraphLabel.A].f_score:.3f} "
            f"F(N)={result.metrics[GraphLabel.N].f_score:.3f} with {len(patterns)} patterns"
        )

    report = EvalReport.from_folds(config, results, stratified)
    logger.info(
        f"{config.representation.value}: F(A)={report.mean_f(GraphLabel.A):.3f} "
        f"({report.std_f(GraphLabel.A):.3f}), F(N)={report.mean_f(GraphLabel.N):.3f} "
        f"({report.std_f(GraphLabel.N):.3f})"
    )
    return report
