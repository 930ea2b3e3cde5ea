"""
Core components for PatternWeaver.
"""

from .graph import AttributedGraph, GraphLabel, LabeledCollection
from .dfscode import DFSCode, DFSEdge, Pattern, canonical_code
from .matcher import MatchMode, count_occurrences, embeddings, exists, exists_general, exists_induced
from .metrics import PatternWeaverMetrics, get_metrics, init_metrics
from .miner import EmbeddingIndex, MinedPattern, MinSupport, extensions, is_minimal, mine
from .selection import (
    FrequencyKind,
    PatternFamily,
    PatternStats,
    ScoredPattern,
    compute_stats,
    discrimination_score,
    filter_closed,
    filter_induced,
    novel_patterns,
    rank_patterns,
    score_distribution,
    score_patterns,
    select_top,
)
from .filters import (
    CLOSED_FILTER,
    INDUCED_FILTER,
    NO_SINGLE_VERTEX_FILTER,
    CallableFilter,
    CompositeFilter,
    FamilyFilter,
    NotFilter,
    PatternFilter,
    SizeFilter,
    SupportFilter,
    apply_filter,
)
from .features import FeatureMatrix, FeatureMode, Representation, build_matrix, vectorize
from .pipeline import Discovery, PipelineConfig, annotate_patterns, discover_patterns
from .classifier import ClassMetrics, LinearModel, f_score, predict, predict_many, train
from .evaluation import EvalReport, FoldResult, cross_validate, make_folds

__all__ = [
    # Graphs
    "AttributedGraph",
    "GraphLabel",
    "LabeledCollection",
    # Codes
    "DFSCode",
    "DFSEdge",
    "Pattern",
    "canonical_code",
    # Matching
    "MatchMode",
    "embeddings",
    "exists",
    "exists_general",
    "exists_induced",
    "count_occurrences",
    # Metrics
    "PatternWeaverMetrics",
    "get_metrics",
    "init_metrics",
    # Mining
    "MinSupport",
    "MinedPattern",
    "EmbeddingIndex",
    "extensions",
    "is_minimal",
    "mine",
    # Selection
    "PatternFamily",
    "FrequencyKind",
    "PatternStats",
    "ScoredPattern",
    "compute_stats",
    "filter_closed",
    "filter_induced",
    "discrimination_score",
    "score_patterns",
    "rank_patterns",
    "select_top",
    "score_distribution",
    "novel_patterns",
    # Filters
    "PatternFilter",
    "FamilyFilter",
    "SizeFilter",
    "SupportFilter",
    "CompositeFilter",
    "NotFilter",
    "CallableFilter",
    "apply_filter",
    "CLOSED_FILTER",
    "INDUCED_FILTER",
    "NO_SINGLE_VERTEX_FILTER",
    # Features
    "FeatureMode",
    "Representation",
    "FeatureMatrix",
    "vectorize",
    "build_matrix",
    # Pipeline
    "PipelineConfig",
    "Discovery",
    "discover_patterns",
    "annotate_patterns",
    # Classifier
    "LinearModel",
    "ClassMetrics",
    "train",
    "predict",
    "predict_many",
    "f_score",
    # Evaluation
    "FoldResult",
    "EvalReport",
    "make_folds",
    "cross_validate",
]
