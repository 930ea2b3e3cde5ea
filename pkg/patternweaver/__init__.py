"""PatternWeaver - discriminative subgraph patterns for anomalous graph classification"""

__version__ = "0.1.0"

from .core.classifier import LinearModel, predict, train
from .core.dfscode import DFSCode, Pattern
from .core.evaluation import EvalReport, cross_validate
from .core.features import FeatureMatrix, FeatureMode, Representation, build_matrix
from .core.graph import AttributedGraph, GraphLabel, LabeledCollection
from .core.matcher import MatchMode, count_occurrences, exists
from .core.metrics import PatternWeaverMetrics, get_metrics, init_metrics
from .core.miner import MinedPattern, MinSupport, mine
from .core.pipeline import PipelineConfig, discover_patterns
from .core.selection import FrequencyKind, PatternFamily, select_top
from .exceptions import PatternWeaverError
from .io.benchmark import read_benchmark
from .io.transactions import read_transactions, write_transactions

__all__ = [
    # Version
    "__version__",
    # Graphs
    "AttributedGraph",
    "GraphLabel",
    "LabeledCollection",
    "read_transactions",
    "write_transactions",
    "read_benchmark",
    # Mining
    "DFSCode",
    "Pattern",
    "MinSupport",
    "MinedPattern",
    "mine",
    "MatchMode",
    "exists",
    "count_occurrences",
    # Selection
    "PatternFamily",
    "FrequencyKind",
    "select_top",
    # Classification
    "FeatureMode",
    "Representation",
    "FeatureMatrix",
    "build_matrix",
    "LinearModel",
    "train",
    "predict",
    "PipelineConfig",
    "discover_patterns",
    "EvalReport",
    "cross_validate",
    # Metrics
    "PatternWeaverMetrics",
    "get_metrics",
    "init_metrics",
    # Errors
    "PatternWeaverError",
]
