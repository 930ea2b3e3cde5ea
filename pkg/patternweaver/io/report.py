"""
Evaluation reports: a readable text summary, a per-fold delimiter-separated
table with aggregate rows, and JSON.
"""

import logging
from pathlib import Path
from typing import TYPE_CHECKING, Union

import numpy as np
import pandas as pd

from ..core.graph import GraphLabel
from ..utils.serialization import to_jsonable, write_json

if TYPE_CHECKING:
    from ..core.evaluation import EvalReport

logger = logging.getLogger(__name__)

METRIC_COLUMNS = [
    f"{metric}_{label.value}"
    for label in GraphLabel
    for metric in ("precision", "recall", "f")
]
COUNT_COLUMNS = ["tp", "fp", "fn", "tn"]


def report_frame(report: "EvalReport") -> pd.DataFrame:
    """One row per fold, then ``mean`` and ``std`` rows over the folds."""
    rows = []
    for fold in report.folds:
        row: dict = {
            "fold": str(fold.fold),
            "n_patterns": fold.n_patterns,
            "train_size": fold.train_size,
            "test_size": fold.test_size,
        }
        for label in GraphLabel:
            m = fold.metrics[label]
            row[f"precision_{label.value}"] = m.precision
            row[f"recall_{label.value}"] = m.recall
            row[f"f_{label.value}"] = m.f_score
        row.update(fold.confusion)
        rows.append(row)

    columns = ["fold", "n_patterns", "train_size", "test_size"] + METRIC_COLUMNS + COUNT_COLUMNS
    frame = pd.DataFrame(rows, columns=columns)
    numeric = frame[METRIC_COLUMNS].astype(float)
    aggregates = pd.DataFrame(
        [
            {"fold": "mean", **numeric.mean(axis=0).to_dict()},
            {"fold": "std", **numeric.std(axis=0, ddof=0).to_dict()},
        ]
    )
    combined = pd.concat([frame, aggregates], ignore_index=True)
    for column in ["n_patterns", "train_size", "test_size"] + COUNT_COLUMNS:
        combined[column] = combined[column].astype("Int64")
    return combined


def write_report_csv(report: "EvalReport", path: Union[str, Path], sep: str = ",") -> None:
    report_frame(report).to_csv(path, sep=sep, index=False, float_format="%.6f")
    logger.info(f"Wrote evaluation table to {path}")


def report_dict(report: "EvalReport") -> dict:
    return {
        "config": to_jsonable(report.config),
        "stratified": report.stratified,
        "summary": {label.value: to_jsonable(report.summary[label]) for label in GraphLabel},
        "folds": [to_jsonable(fold) for fold in report.folds],
    }


def write_report_json(report: "EvalReport", path: Union[str, Path]) -> None:
    write_json(report_dict(report), path)
    logger.info(f"Wrote evaluation report to {path}")


def format_text(report: "EvalReport") -> str:
    """Human-readable summary in the "mean (std)" style."""
    cfg = report.config
    lines = [
        f"Representation: {cfg.representation.value}",
        f"Patterns (s): {cfg.s if cfg.s is not None else 'all'}",
        f"minsup={cfg.minsup} caps={cfg.max_vertices}/{cfg.max_edges} C={cfg.C} "
        f"k={cfg.k} seed={cfg.seed}",
        f"Folds: {len(report.folds)} ({'stratified' if report.stratified else 'non-stratified'})",
        "",
        f"{'fold':>6} {'#pat':>6} {'F(A)':>7} {'F(N)':>7}",
    ]
    for fold in report.folds:
        lines.append(
            f"{fold.fold:>6} {fold.n_patterns:>6} "
            f"{fold.metrics[GraphLabel.A].f_score:>7.3f} {fold.metrics[GraphLabel.N].f_score:>7.3f}"
        )
    lines.append("")
    for label in GraphLabel:
        summary = report.summary[label]
        lines.append(
            f"Class {label.value}: F-score {summary.mean_f_score:.2f} ({summary.std_f_score:.2f}), "
            f"precision {summary.mean_precision:.2f}, recall {summary.mean_recall:.2f}"
        )
    if report.folds:
        patterns = np.array([fold.n_patterns for fold in report.folds])
        lines.append(f"Patterns per fold: {patterns.mean():.1f} (min {patterns.min()})")
    return "\n".join(lines) + "\n"
