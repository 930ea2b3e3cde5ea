"""
Pattern discovery pipeline: mine, restrict to a family, score, select.

Shared by the command line and by cross-validation, which runs it once per
training fold.
"""

import logging
from collections.abc import Sequence
from dataclasses import dataclass
from typing import Optional, Union

from pydantic import BaseModel, Field, field_validator

from ..io.patterns import PatternRecord
from .features import FeatureMode, Representation
from .graph import LabeledCollection
from .matcher import MatchMode
from .metrics import get_metrics
from .miner import MinedPattern, MinSupport, mine
from .selection import (
    FrequencyKind,
    PatternFamily,
    ScoredPattern,
    compute_stats,
    discrimination_score,
    filter_closed,
    filter_induced,
    induced_flags,
    score_patterns,
    select_top,
)

logger = logging.getLogger(__name__)


class PipelineConfig(BaseModel):
    """Configuration of one mine -> select -> vectorize -> classify run."""

    # Representation
    representation: Representation = Field(
        default=Representation.GEN_BIN, description="Pattern family and feature mode"
    )
    s: Optional[int] = Field(default=None, ge=1, description="Patterns to keep, None for all")
    normalize_classes: bool = Field(
        default=False, description="Divide class frequencies by class sizes when scoring"
    )
    ind_count_mode: MatchMode = Field(
        default=MatchMode.INDUCED, description="Occurrence kind counted for induced patterns"
    )
    log_scale: bool = Field(default=False, description="log1p-scale integer features")

    # Mining
    minsup: Union[int, float, str] = Field(
        default="10%", description="Minimum graph frequency: count, fraction or percentage"
    )
    max_vertices: int = Field(default=10, ge=1, description="Vertex cap for mined patterns")
    max_edges: int = Field(default=10, ge=1, description="Edge cap for mined patterns")

    # Evaluation
    C: float = Field(default=1.0, gt=0, description="SVM regularization constant")
    k: int = Field(default=10, ge=2, description="Cross-validation folds")
    seed: int = Field(default=42, description="Seed for folds and the classifier")
    mine_once: bool = Field(
        default=False, description="Mine the full collection once instead of per fold"
    )
    rank_on_full: bool = Field(
        default=False, description="Score patterns on the full collection instead of the fold"
    )

    # Execution
    jobs: Optional[int] = Field(default=1, ge=0, description="Worker processes, 0/None for all")

    @field_validator("minsup")
    @classmethod
    def _check_minsup(cls, value: Union[int, float, str]) -> Union[int, float, str]:
        MinSupport.parse(value)
        return value

    @property
    def family(self) -> PatternFamily:
        return self.representation.family

    @property
    def mode(self) -> FeatureMode:
        return self.representation.mode

    @property
    def frequency_kind(self) -> FrequencyKind:
        return self.mode.frequency_kind


@dataclass(frozen=True)
class Discovery:
    """Outcome of one discovery run."""

    mined: list[MinedPattern]
    members: list[MinedPattern]
    ranked: list[ScoredPattern]
    selected: list[ScoredPattern]

    @property
    def worst_selected_score(self) -> Optional[float]:
        return min((sp.score for sp in self.selected), default=None)


def family_members(
    mined: Sequence[MinedPattern],
    source: LabeledCollection,
    family: PatternFamily,
    jobs: Optional[int] = 1,
) -> list[MinedPattern]:
    """Mined patterns belonging to ``family``; ``source`` is the mined collection."""
    family = PatternFamily(family)
    if family is PatternFamily.CLOSED:
        return filter_closed(mined)
    if family is PatternFamily.INDUCED:
        return list(filter_induced(mined, source, jobs=jobs))
    return list(mined)


def discover_patterns(
    source: LabeledCollection,
    config: PipelineConfig,
    ranking: Optional[LabeledCollection] = None,
    mined: Optional[Sequence[MinedPattern]] = None,
    members: Optional[Sequence[MinedPattern]] = None,
) -> Discovery:
    """
    Mine ``source`` (unless ``mined`` is given), keep the configured family,
    score the members on ``ranking`` (default ``source``) and select the top s.
    """
    metrics = get_metrics()
    ranking = source if ranking is None else ranking
    if mined is None:
        mined = mine(source, config.minsup, config.max_vertices, config.max_edges, jobs=config.jobs)
    if members is None:
        members = family_members(mined, source, config.family, jobs=config.jobs)

    with metrics.measure_stage("select"):
        stats = compute_stats(
            members,
            ranking,
            mode=config.family.match_mode,
            use_hosts=ranking is source,
            jobs=config.jobs,
        )
        scored = score_patterns(members, stats, config.frequency_kind, config.normalize_classes)
        ranked = select_top(scored)
        selected = ranked if config.s is None else ranked[: config.s]

    discovery = Discovery(list(mined), list(members), ranked, selected)
    logger.info(
        f"{config.representation.value}: {len(members)} of {len(mined)} patterns in family, "
        f"selected {len(selected)} (worst score {discovery.worst_selected_score})"
    )
    return discovery


def annotate_patterns(
    mined: Sequence[MinedPattern],
    collection: LabeledCollection,
    jobs: Optional[int] = 1,
) -> list[PatternRecord]:
    """
    Full pattern-file records: general statistics, closed and induced flags,
    and induced statistics for induced patterns. The score is the raw GF score.
    """
    general = compute_stats(mined, collection, MatchMode.GENERAL, jobs=jobs)
    closed_codes = {m.code for m in filter_closed(mined)}
    flags = induced_flags(mined, collection, jobs=jobs)
    induced_members = [m for m, flag in zip(mined, flags) if flag]
    induced_stats = dict(
        zip(
            (m.code for m in induced_members),
            compute_stats(induced_members, collection, MatchMode.INDUCED, jobs=jobs),
        )
    )
    return [
        PatternRecord(
            pattern=m.pattern,
            stats=st,
            induced_stats=induced_stats.get(m.code),
            closed=m.code in closed_codes,
            induced=flag,
            score=discrimination_score(st, FrequencyKind.GF),
        )
        for m, st, flag in zip(mined, general, flags)
    ]
