"""
Observability and metrics for PatternWeaver.

Prometheus-compatible counters and histograms for mining, evaluation and
extraction runs. Metrics are only active if prometheus_client is installed.
"""

import logging
import time
from contextlib import contextmanager
from pathlib import Path
from typing import Any, Optional, Union

logger = logging.getLogger(__name__)

try:
    from prometheus_client import REGISTRY, CollectorRegistry, Counter, Histogram, write_to_textfile

    PROMETHEUS_AVAILABLE = True
except ImportError:
    PROMETHEUS_AVAILABLE = False
    logger.debug("prometheus_client not installed - metrics disabled")


class NoOpMetric:
    """Stand-in accepting every metric call while prometheus_client is absent."""

    def inc(self, *args: Any, **kwargs: Any) -> None:
        pass

    def observe(self, *args: Any, **kwargs: Any) -> None:
        pass

    def labels(self, *args: Any, **kwargs: Any) -> "NoOpMetric":
        return self


class PatternWeaverMetrics:
    """
    Prometheus metrics for PatternWeaver.

    Tracks:
    - patterns reported by the miner and search branches it pruned
    - cross-validation folds completed
    - graphs extracted from procurement records
    - wall time per pipeline stage
    """

    def __init__(
        self,
        enabled: bool = True,
        prefix: str = "patternweaver",
        registry: Optional[Any] = None,
    ):
        """
        Create the run metrics.

        Args:
            enabled: Record values when prometheus_client is importable.
            prefix: Name prefix shared by every metric.
            registry: Registry to register into; the default registry when omitted.
        """
        self.enabled = enabled and PROMETHEUS_AVAILABLE
        self.prefix = prefix
        self._registry = registry

        if self.enabled:
            self._init_prometheus_metrics()
        else:
            self._init_noop_metrics()

    @property
    def registry(self) -> Optional[Any]:
        if not self.enabled:
            return None
        return self._registry or REGISTRY

    def _init_prometheus_metrics(self) -> None:
        reg = self._registry or REGISTRY

        self.patterns_found = Counter(
            f"{self.prefix}_patterns_found_total",
            "Frequent patterns reported by the miner",
            registry=reg,
        )

        self.branches_pruned = Counter(
            f"{self.prefix}_branches_pruned_total",
            "Search branches pruned by the miner",
            ["reason"],
            registry=reg,
        )

        self.folds_completed = Counter(
            f"{self.prefix}_folds_completed_total",
            "Cross-validation folds completed",
            registry=reg,
        )

        self.graphs_extracted = Counter(
            f"{self.prefix}_graphs_extracted_total",
            "Graphs extracted from procurement contracts",
            ["label"],
            registry=reg,
        )

        self.stage_duration = Histogram(
            f"{self.prefix}_stage_duration_seconds",
            "Wall time of a pipeline stage",
            ["stage"],
            buckets=(0.01, 0.1, 0.5, 1.0, 5.0, 30.0, 120.0, 600.0, 3600.0),
            registry=reg,
        )

        logger.info("Prometheus metrics initialized")

    def _init_noop_metrics(self) -> None:
        noop = NoOpMetric()
        self.patterns_found = noop  # type: ignore[assignment]
        self.branches_pruned = noop  # type: ignore[assignment]
        self.folds_completed = noop  # type: ignore[assignment]
        self.graphs_extracted = noop  # type: ignore[assignment]
        self.stage_duration = noop  # type: ignore[assignment]

    @contextmanager
    def measure_stage(self, stage: str):
        """Context manager timing one pipeline stage."""
        if not self.enabled:
            yield
            return

        start = time.perf_counter()
        try:
            yield
        finally:
            self.stage_duration.labels(stage=stage).observe(time.perf_counter() - start)

    def record_patterns_found(self, count: int) -> None:
        if self.enabled and count > 0:
            self.patterns_found.inc(count)

    def record_prunes(self, prunes: dict[str, int]) -> None:
        """Record miner prunes, keyed by reason."""
        if self.enabled:
            for reason, count in prunes.items():
                if count > 0:
                    self.branches_pruned.labels(reason=reason).inc(count)

    def record_fold_completed(self) -> None:
        if self.enabled:
            self.folds_completed.inc()

    def record_graph_extracted(self, label: str) -> None:
        if self.enabled:
            self.graphs_extracted.labels(label=label).inc()

    def write(self, path: Union[str, Path]) -> bool:
        """
        Write the registry in the Prometheus text format.

        Returns:
            False when metrics are disabled and nothing was written.
        """
        if not self.enabled:
            logger.warning(f"Metrics disabled, not writing {path}")
            return False
        write_to_textfile(str(path), self.registry)
        return True


_global_metrics: Optional[PatternWeaverMetrics] = None


def get_metrics() -> PatternWeaverMetrics:
    """Get the global metrics instance."""
    global _global_metrics
    if _global_metrics is None:
        _global_metrics = PatternWeaverMetrics(enabled=False)
    return _global_metrics


def init_metrics(
    enabled: bool = True,
    prefix: str = "patternweaver",
    registry: Optional[Any] = None,
) -> PatternWeaverMetrics:
    """
    Initialize the global metrics instance.

    Args:
        enabled: Whether to enable metrics collection.
        prefix: Prefix for metric names.
        registry: Optional custom Prometheus registry. The CLI passes a
            fresh ``CollectorRegistry`` so one run's file holds only its own
            series.

    Returns:
        The initialized metrics instance.
    """
    global _global_metrics
    _global_metrics = PatternWeaverMetrics(enabled=enabled, prefix=prefix, registry=registry)
    return _global_metrics


def new_registry() -> Optional[Any]:
    """A private registry, or None without prometheus_client."""
    return CollectorRegistry() if PROMETHEUS_AVAILABLE else None
