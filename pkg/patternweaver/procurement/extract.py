"""
Agent graphs from procurement contracts.

Contracts are filtered by buyer category, sector, calendar year, supplier
region and subset size. For every focal municipality a subset gathers its
own contracts, the contracts of its winners and the contracts of the other
municipalities those winners work for. Each subset becomes a bipartite graph
of buyers and winners; an edge carries the lot bucket of the lots awarded
between the pair, and is anomalous when one of its contracts received a
single offer. A graph is anomalous when enough of its edges are.
"""

import logging
from collections import defaultdict
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from enum import IntEnum
from pathlib import Path
from typing import NamedTuple, Optional, Union

import pandas as pd
from pydantic import BaseModel, Field, model_validator

from ..core.graph import AttributedGraph, GraphLabel, LabeledCollection
from ..core.metrics import get_metrics
from ..exceptions import ExtractionError
from ..utils.parallel import parallel_map
from .records import ContractRecord

logger = logging.getLogger(__name__)


class AgentRole(IntEnum):
    """Vertex labels."""

    BUYER = 0
    WINNER = 1


class LotBucket(IntEnum):
    """Edge labels: one lot, 2 to 5 lots, 6 lots or more."""

    L1 = 1
    L2 = 2
    L3 = 3


class ExtractionConfig(BaseModel):
    """Filters and labeling rule of the extraction."""

    sector: Optional[str] = Field(default="works", description="Activity sector kept, None for all")
    year: Optional[int] = Field(default=None, description="Calendar year kept, None for every year")
    region: Optional[str] = Field(
        default=None, description="Supplier region kept, None for every region"
    )
    focal_category: str = Field(
        default="municipality", description="Buyer category whose members anchor subsets"
    )
    anomalous_edge_threshold: int = Field(
        default=2, ge=1, description="Anomalous edges needed to label a graph anomalous"
    )
    min_contracts: int = Field(default=3, ge=1, description="Smallest subset kept")
    max_contracts: Optional[int] = Field(default=200, ge=1, description="Largest subset kept")

    @model_validator(mode="after")
    def _check_bounds(self) -> "ExtractionConfig":
        if self.max_contracts is not None and self.max_contracts < self.min_contracts:
            raise ValueError(
                f"max_contracts ({self.max_contracts}) < min_contracts ({self.min_contracts})"
            )
        return self


@dataclass
class RedFlagTally:
    """Contracts seen by ``red_flag``, split by outcome."""

    flagged: int = 0
    clean: int = 0
    missing: int = 0

    @property
    def total(self) -> int:
        return self.flagged + self.clean + self.missing

    @property
    def missing_share(self) -> float:
        return self.missing / self.total if self.total else 0.0


def red_flag(record: ContractRecord, tally: Optional[RedFlagTally] = None) -> bool:
    """Single-offer rule. Undocumented offer counts are never flagged."""
    if record.offers_received is None:
        if tally is not None:
            tally.missing += 1
        return False
    flagged = record.offers_received == 1
    if tally is not None:
        if flagged:
            tally.flagged += 1
        else:
            tally.clean += 1
    return flagged


def lot_bucket(total_lots: int) -> LotBucket:
    if total_lots < 1:
        raise ExtractionError(f"Lot count must be >= 1, got {total_lots}")
    if total_lots == 1:
        return LotBucket.L1
    if total_lots <= 5:
        return LotBucket.L2
    return LotBucket.L3


def filter_records(
    records: Iterable[ContractRecord], config: ExtractionConfig
) -> list[ContractRecord]:
    """Keep focal-category buyers, the configured sector, year and supplier region."""
    kept = [
        r
        for r in records
        if r.agent_category == config.focal_category
        and (config.sector is None or r.activity_sector == config.sector)
        and (config.year is None or r.year == config.year)
        and (config.region is None or r.region_code == config.region)
    ]
    logger.info(f"Filtering kept {len(kept)} contracts")
    return kept


class SubsetKey(NamedTuple):
    municipality: str
    year: int
    region: str


@dataclass(frozen=True)
class ContractSubset:
    key: SubsetKey
    contracts: tuple[ContractRecord, ...]

    def __len__(self) -> int:
        return len(self.contracts)


def build_subsets(
    records: Sequence[ContractRecord], config: ExtractionConfig
) -> list[ContractSubset]:
    """
    One subset per focal municipality and (year, region) window: its
    contracts, those of its winners, and those of the municipalities these
    winners also work for. Subsets overlap. Records must already be filtered.
    """
    windows: dict[tuple[int, str], list[int]] = defaultdict(list)
    for idx, record in enumerate(records):
        windows[(record.year, record.region_code)].append(idx)

    subsets = []
    for (year, region), indices in sorted(windows.items()):
        by_buyer: dict[str, set[int]] = defaultdict(set)
        by_winner: dict[str, set[int]] = defaultdict(set)
        for idx in indices:
            by_buyer[records[idx].buyer_id].add(idx)
            by_winner[records[idx].winner_id].add(idx)

        for municipality in sorted(by_buyer):
            own = by_buyer[municipality]
            via_winners = set().union(*(by_winner[records[i].winner_id] for i in own))
            partners = {records[i].buyer_id for i in via_winners} - {municipality}
            members = own | via_winners
            for partner in partners:
                members |= by_buyer[partner]
            ordered = sorted(members, key=lambda i: (records[i].contract_id, i))
            subsets.append(
                ContractSubset(
                    SubsetKey(municipality, year, region),
                    tuple(records[i] for i in ordered),
                )
            )
    logger.debug(f"Built {len(subsets)} contract subsets")
    return subsets


@dataclass(frozen=True)
class AgentGraph:
    """A buyer/winner graph with its label and provenance."""

    graph: AttributedGraph
    label: GraphLabel
    focal_agent: str
    year: int
    region: str
    n_contracts: int
    anomalous_edges: int
    buyers: tuple[str, ...]
    winners: tuple[str, ...]
    tally: RedFlagTally = field(default_factory=RedFlagTally)


def extract_graph(subset: ContractSubset, config: ExtractionConfig) -> AgentGraph:
    """
    Build the graph of one subset.

    Raises:
        ExtractionError: the subset is empty or yields no buyer/winner edge.
    """
    if not subset.contracts:
        raise ExtractionError(f"Empty contract subset for {subset.key.municipality}")

    tally = RedFlagTally()
    lots: dict[tuple[str, str], int] = defaultdict(int)
    flagged: dict[tuple[str, str], bool] = defaultdict(bool)
    for contract in subset.contracts:
        pair = (contract.buyer_id, contract.winner_id)
        lots[pair] += contract.lot_count
        flagged[pair] = red_flag(contract, tally) or flagged[pair]

    buyers = tuple(sorted({b for b, _ in lots}))
    winners = tuple(sorted({w for _, w in lots}))
    if not buyers or not winners:
        raise ExtractionError(f"Subset of {subset.key.municipality} has no buyer/winner edge")

    index = {(AgentRole.BUYER, b): i for i, b in enumerate(buyers)}
    index.update({(AgentRole.WINNER, w): len(buyers) + i for i, w in enumerate(winners)})
    labels = (int(AgentRole.BUYER),) * len(buyers) + (int(AgentRole.WINNER),) * len(winners)
    edges = tuple(
        (index[(AgentRole.BUYER, b)], index[(AgentRole.WINNER, w)], int(lot_bucket(total)))
        for (b, w), total in sorted(lots.items())
    )
    anomalous = sum(1 for pair in lots if flagged[pair])
    label = GraphLabel.A if anomalous >= config.anomalous_edge_threshold else GraphLabel.N

    return AgentGraph(
        graph=AttributedGraph(labels, edges),
        label=label,
        focal_agent=subset.key.municipality,
        year=subset.key.year,
        region=subset.key.region,
        n_contracts=len(subset.contracts),
        anomalous_edges=anomalous,
        buyers=buyers,
        winners=winners,
        tally=tally,
    )


def _extract_one(args: tuple[ContractSubset, ExtractionConfig]) -> AgentGraph:
    subset, config = args
    return extract_graph(subset, config)


@dataclass
class ExtractionResult:
    graphs: list[AgentGraph]
    tally: RedFlagTally
    n_filtered: int
    dropped_small: int = 0
    dropped_large: int = 0

    @property
    def collection(self) -> LabeledCollection:
        return LabeledCollection.from_pairs((g.graph, g.label) for g in self.graphs)


def extract_collection(
    records: Iterable[ContractRecord],
    config: ExtractionConfig,
    jobs: Optional[int] = 1,
) -> ExtractionResult:
    """Filter, build subsets, apply the size bounds and extract every graph."""
    metrics = get_metrics()
    with metrics.measure_stage("extract"):
        filtered = filter_records(records, config)
        tally = RedFlagTally()
        for record in filtered:
            red_flag(record, tally)

        kept, small, large = [], 0, 0
        for subset in build_subsets(filtered, config):
            if len(subset) < config.min_contracts:
                small += 1
            elif config.max_contracts is not None and len(subset) > config.max_contracts:
                large += 1
            else:
                kept.append(subset)
        if small or large:
            logger.info(f"Size bounds dropped {small} small and {large} large subsets")

        graphs = parallel_map(_extract_one, [(s, config) for s in kept], jobs)

    for graph in graphs:
        metrics.record_graph_extracted(graph.label.value)
    if tally.missing:
        logger.warning(
            f"{tally.missing} of {tally.total} contracts lack an offer count "
            f"({tally.missing_share:.1%}); they are not red-flagged"
        )
    if not graphs:
        logger.warning("Extraction produced no graph")
    else:
        n_anomalous = sum(1 for g in graphs if g.label is GraphLabel.A)
        logger.info(
            f"Extracted {len(graphs)} graphs: {n_anomalous} anomalous, "
            f"{len(graphs) - n_anomalous} normal"
        )
    return ExtractionResult(graphs, tally, len(filtered), small, large)


def provenance_frame(graphs: Sequence[AgentGraph]) -> pd.DataFrame:
    return pd.DataFrame(
        [
            {
                "graph_index": i,
                "municipality": g.focal_agent,
                "year": g.year,
                "region": g.region,
                "contracts": g.n_contracts,
                "anomalous_edges": g.anomalous_edges,
                "missing_offers": g.tally.missing,
                "label": g.label.value,
            }
            for i, g in enumerate(graphs)
        ],
        columns=[
            "graph_index",
            "municipality",
            "year",
            "region",
            "contracts",
            "anomalous_edges",
            "missing_offers",
            "label",
        ],
    )


def write_provenance(graphs: Sequence[AgentGraph], path: Union[str, Path]) -> None:
    """Sidecar mapping graph index to focal municipality, year and region."""
    provenance_frame(graphs).to_csv(path, index=False)


def export_contract_features(
    records: Iterable[ContractRecord], path: Union[str, Path]
) -> int:
    """Flat per-contract table (lots, offers, red flag, context) for tabular baselines."""
    rows = [
        {
            "contract_id": r.contract_id,
            "buyer_id": r.buyer_id,
            "winner_id": r.winner_id,
            "lot_count": r.lot_count,
            "lot_bucket": int(lot_bucket(r.lot_count)),
            "offers_received": r.offers_received,
            "offers_missing": int(r.offers_received is None),
            "red_flag": int(red_flag(r)),
            "activity_sector": r.activity_sector,
            "region_code": r.region_code,
            "year": r.year,
        }
        for r in records
    ]
    frame = pd.DataFrame(rows)
    if "offers_received" in frame:
        frame["offers_received"] = pd.array(frame["offers_received"].tolist(), dtype="Int64")
    frame.to_csv(path, index=False)
    logger.info(f"Wrote features of {len(rows)} contracts to {path}")
    return len(rows)
