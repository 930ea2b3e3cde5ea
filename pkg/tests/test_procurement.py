"""Tests for contract records and agent graph extraction."""

import logging

import pandas as pd
import pytest
from pydantic import ValidationError

from patternweaver.core.graph import GraphLabel
from patternweaver.exceptions import ExtractionError, ParseError, SchemaError
from patternweaver.procurement.extract import (
    ContractSubset,
    ExtractionConfig,
    LotBucket,
    RedFlagTally,
    SubsetKey,
    build_subsets,
    export_contract_features,
    extract_collection,
    extract_graph,
    filter_records,
    lot_bucket,
    provenance_frame,
    red_flag,
)
from patternweaver.procurement.records import ColumnMapping, ContractRecord, read_contracts

from .helpers import CONTRACT_HEADER as HEADER
from .helpers import CONTRACTS


def create_contract(contract_id="c", buyer="M1", winner="C1", lots=1, offers=2, **overrides):
    """Helper to create a contract record."""
    values = {
        "contract_id": contract_id,
        "buyer_id": buyer,
        "winner_id": winner,
        "lot_count": lots,
        "offers_received": offers,
        "year": 2020,
        "region_code": "R1",
        "activity_sector": "works",
        "agent_category": "municipality",
    }
    values.update(overrides)
    return ContractRecord(**values)


@pytest.fixture
def contracts_file(tmp_path):
    path = tmp_path / "contracts.csv"
    path.write_text(CONTRACTS)
    return path


@pytest.fixture
def records(contracts_file):
    return read_contracts(contracts_file)


@pytest.fixture
def config():
    return ExtractionConfig(sector="works", year=2020, region="R1")


class TestContractRecord:
    """Tests for ContractRecord."""

    def test_valid_record(self):
        """Test a plain record."""
        record = create_contract(offers=None)

        assert record.offers_received is None
        assert record.lot_count == 1

    def test_buyer_must_differ_from_winner(self):
        """Test that an agent cannot contract with itself."""
        with pytest.raises(ValidationError):
            create_contract(buyer="X", winner="X")

    def test_lots_must_be_positive(self):
        """Test the lot count bound."""
        with pytest.raises(ValidationError):
            create_contract(lots=0)


class TestReadContracts:
    """Tests for read_contracts and ColumnMapping."""

    def test_read(self, records):
        """Test that every row is read."""
        assert len(records) == 12
        assert records[4].offers_received is None
        assert records[0].lot_count == 1 and records[2].lot_count == 6

    def test_invalid_rows_skipped(self, tmp_path, caplog):
        """Test that rows breaking record rules are skipped with a warning."""
        path = tmp_path / "contracts.csv"
        path.write_text(
            f"{HEADER}\n"
            "a,M1,C1,1,1,2020,R1,works,municipality\n"
            "b,M1,C1,0,1,2020,R1,works,municipality\n"
            "c,M1,M1,1,1,2020,R1,works,municipality\n"
            "d,M1,C1,x,1,2020,R1,works,municipality\n"
        )

        with caplog.at_level(logging.WARNING):
            records = read_contracts(path)

        assert [r.contract_id for r in records] == ["a"]
        assert "Skipped 3 invalid contract rows" in caplog.text

    def test_award_dates(self, tmp_path):
        """Test that full award dates reduce to their year."""
        path = tmp_path / "contracts.csv"
        path.write_text(f"{HEADER}\na,M1,C1,1,1,2020-03-15,R1,works,municipality\n")

        (record,) = read_contracts(path)

        assert record.year == 2020

    def test_missing_columns(self, tmp_path):
        """Test that a header without mapped columns is rejected."""
        path = tmp_path / "contracts.csv"
        path.write_text("contract_id,buyer_id\na,M1\n")

        with pytest.raises(SchemaError) as info:
            read_contracts(path)

        assert "winner_id" in info.value.missing_columns

    def test_mapping_file(self, tmp_path):
        """Test reading another schema through a mapping file."""
        mapping_path = tmp_path / "mapping.txt"
        mapping_path.write_text("# renamed columns\nbuyer_id = acheteur\n\nwinner_id = titulaire\n")
        path = tmp_path / "contracts.tsv"
        path.write_text(
            "contract_id\tacheteur\ttitulaire\tlot_count\toffers_received\tyear\t"
            "region_code\tactivity_sector\tagent_category\n"
            "a\tM1\tC1\t2\t1\t2020\tR1\tworks\tmunicipality\n"
        )

        (record,) = read_contracts(path, ColumnMapping.from_file(mapping_path))

        assert (record.buyer_id, record.winner_id, record.lot_count) == ("M1", "C1", 2)

    def test_mapping_unknown_field(self, tmp_path):
        """Test that mapping files only name known fields."""
        mapping_path = tmp_path / "mapping.txt"
        mapping_path.write_text("buyer = acheteur\n")

        with pytest.raises(ParseError) as info:
            ColumnMapping.from_file(mapping_path)

        assert info.value.line_number == 1


class TestRedFlag:
    """Tests for red_flag and lot_bucket."""

    def test_single_offer(self):
        """Test the single-offer rule."""
        tally = RedFlagTally()

        assert red_flag(create_contract(offers=1), tally) is True
        assert red_flag(create_contract(offers=2), tally) is False
        assert red_flag(create_contract(offers=0), tally) is False
        assert (tally.flagged, tally.clean, tally.missing) == (1, 2, 0)

    def test_missing_offers(self):
        """Test that undocumented offer counts are tallied, not flagged."""
        tally = RedFlagTally()

        assert red_flag(create_contract(offers=None), tally) is False
        assert tally.missing == 1
        assert tally.missing_share == 1.0

    @pytest.mark.parametrize(
        "lots, bucket",
        [(1, LotBucket.L1), (2, LotBucket.L2), (5, LotBucket.L2), (6, LotBucket.L3), (40, LotBucket.L3)],
    )
    def test_lot_buckets(self, lots, bucket):
        """Test bucket boundaries."""
        assert lot_bucket(lots) is bucket

    def test_lot_bucket_rejects_zero(self):
        """Test that a pair always covers a lot."""
        with pytest.raises(ExtractionError):
            lot_bucket(0)


class TestSubsets:
    """Tests for filter_records and build_subsets."""

    def test_filter(self, records, config):
        """Test category, sector, year and region filters."""
        kept = filter_records(records, config)

        assert [r.contract_id for r in kept] == [f"c0{i}" for i in range(1, 9)]

    def test_subsets_follow_shared_winners(self, records, config):
        """Test that a subset reaches partner municipalities through winners."""
        subsets = build_subsets(filter_records(records, config), config)
        by_focal = {s.key.municipality: [c.contract_id for c in s.contracts] for s in subsets}

        assert by_focal == {
            "M1": ["c01", "c02", "c03", "c04", "c05"],
            "M2": ["c01", "c02", "c03", "c04", "c05"],
            "M3": ["c06", "c07", "c08"],
        }
        assert all(s.key.year == 2020 and s.key.region == "R1" for s in subsets)

    def test_windows_are_separate(self, records):
        """Test that other regions form their own subsets."""
        config = ExtractionConfig(sector="works", year=2020)
        subsets = build_subsets(filter_records(records, config), config)
        keys = {(s.key.municipality, s.key.region): len(s) for s in subsets}

        assert keys[("M1", "R1")] == 5
        assert keys[("M1", "R2")] == 1


class TestExtractGraph:
    """Tests for extract_graph."""

    def test_shared_winner_graph(self, records, config):
        """Test vertices, lot buckets and the anomalous edge count."""
        subsets = build_subsets(filter_records(records, config), config)
        agent_graph = extract_graph(subsets[0], config)

        assert agent_graph.buyers == ("M1", "M2")
        assert agent_graph.winners == ("C1", "C2", "C3")
        assert agent_graph.graph.vertex_labels == (0, 0, 1, 1, 1)
        assert agent_graph.graph.edges == ((0, 2, 2), (0, 3, 3), (1, 3, 1), (1, 4, 2))
        assert agent_graph.anomalous_edges == 2
        assert agent_graph.label is GraphLabel.A
        assert (agent_graph.tally.flagged, agent_graph.tally.clean, agent_graph.tally.missing) == (
            2,
            2,
            1,
        )

    def test_threshold(self, records):
        """Test that one anomalous edge is enough at threshold 1 only."""
        strict = ExtractionConfig(sector="works", year=2020, region="R1")
        lenient = ExtractionConfig(sector="works", year=2020, region="R1", anomalous_edge_threshold=1)
        subset = build_subsets(filter_records(records, strict), strict)[2]

        assert extract_graph(subset, strict).label is GraphLabel.N
        assert extract_graph(subset, lenient).label is GraphLabel.A
        assert extract_graph(subset, strict).graph.edges == ((0, 1, 2),)

    def test_empty_subset(self, config):
        """Test that an empty subset cannot be extracted."""
        with pytest.raises(ExtractionError):
            extract_graph(ContractSubset(SubsetKey("M9", 2020, "R1"), ()), config)


class TestExtractCollection:
    """Tests for extract_collection."""

    def test_golden_collection(self, records, config):
        """Test labels, tally and counts of the full extraction."""
        result = extract_collection(records, config)

        assert [g.focal_agent for g in result.graphs] == ["M1", "M2", "M3"]
        assert result.collection.labels == (GraphLabel.A, GraphLabel.A, GraphLabel.N)
        assert result.n_filtered == 8
        assert (result.tally.flagged, result.tally.clean, result.tally.missing) == (3, 4, 1)
        assert (result.dropped_small, result.dropped_large) == (0, 0)

    def test_size_bounds(self, records):
        """Test that subsets outside the contract bounds are dropped."""
        small = extract_collection(
            records, ExtractionConfig(sector="works", year=2020, region="R1", min_contracts=4)
        )
        large = extract_collection(
            records, ExtractionConfig(sector="works", year=2020, region="R1", max_contracts=4)
        )

        assert [g.focal_agent for g in small.graphs] == ["M1", "M2"]
        assert small.dropped_small == 1
        assert [g.focal_agent for g in large.graphs] == ["M3"]
        assert large.dropped_large == 2

    def test_parallel_identical(self, records, config):
        """Test that workers keep the subset order."""
        serial = extract_collection(records, config, jobs=1)
        parallel = extract_collection(records, config, jobs=2)

        assert serial.collection == parallel.collection

    def test_invalid_bounds(self):
        """Test that max_contracts cannot be below min_contracts."""
        with pytest.raises(ValidationError):
            ExtractionConfig(min_contracts=5, max_contracts=4)

    def test_provenance(self, records, config):
        """Test the provenance table."""
        frame = provenance_frame(extract_collection(records, config).graphs)

        assert frame["municipality"].tolist() == ["M1", "M2", "M3"]
        assert frame["label"].tolist() == ["A", "A", "N"]
        assert frame["missing_offers"].tolist() == [1, 1, 0]


def test_export_contract_features(records, tmp_path):
    """The flat export carries buckets, red flags and missing offers."""
    path = tmp_path / "features.csv"

    assert export_contract_features(records[:5], path) == 5

    frame = pd.read_csv(path)
    assert frame["lot_bucket"].tolist() == [1, 2, 3, 1, 2]
    assert frame["red_flag"].tolist() == [1, 0, 1, 0, 0]
    assert frame["offers_missing"].tolist() == [0, 0, 0, 0, 1]
