"""Tests for the discovery pipeline and cross-validation."""

import json
import logging
import os

import numpy as np
import pytest
from pydantic import ValidationError

from patternweaver.core.evaluation import cross_validate, make_folds
from patternweaver.core.features import Representation
from patternweaver.core.graph import GraphLabel
from patternweaver.core.miner import mine
from patternweaver.core.pipeline import PipelineConfig, annotate_patterns, discover_patterns
from patternweaver.core.selection import PatternFamily
from patternweaver.exceptions import EvaluationError
from patternweaver.io.report import format_text, report_frame, write_report_csv, write_report_json

from .helpers import make_collection, make_graph


def config(**overrides) -> PipelineConfig:
    """Helper to create a small pipeline configuration."""
    values = {"k": 5, "minsup": 2, "max_vertices": 4, "max_edges": 4, "jobs": 1}
    values.update(overrides)
    return PipelineConfig(**values)


class TestPipelineConfig:
    """Tests for PipelineConfig."""

    def test_defaults(self):
        """Test default values."""
        cfg = PipelineConfig()

        assert cfg.representation is Representation.GEN_BIN
        assert cfg.s is None
        assert cfg.k == 10
        assert cfg.C == 1.0
        assert cfg.minsup == "10%"

    def test_derived_properties(self):
        """Test family, mode and frequency kind of a representation."""
        cfg = PipelineConfig(representation="ind-occ")

        assert cfg.family is PatternFamily.INDUCED
        assert cfg.frequency_kind.value == "sf"

    @pytest.mark.parametrize(
        "field, value",
        [("s", 0), ("k", 1), ("C", 0.0), ("max_edges", 0), ("minsup", "abc"), ("jobs", -1)],
    )
    def test_invalid_values(self, field, value):
        """Test that invalid settings are rejected."""
        with pytest.raises(ValidationError):
            PipelineConfig(**{field: value})


class TestDiscoverPatterns:
    """Tests for discover_patterns."""

    def test_selection_size(self, small_collection):
        """Test that s bounds the selection and ranking is complete."""
        discovery = discover_patterns(small_collection, config(s=3, minsup=1))

        assert len(discovery.selected) == 3
        assert len(discovery.ranked) == len(discovery.members) == len(discovery.mined)
        assert discovery.selected == discovery.ranked[:3]
        assert discovery.worst_selected_score == discovery.selected[-1].score

    def test_closed_members_subset(self, small_collection):
        """Test that the closed family is part of the mined set."""
        discovery = discover_patterns(
            small_collection, config(representation="clo-bin", minsup=1)
        )
        mined = {m.code for m in discovery.mined}

        assert {m.code for m in discovery.members} <= mined
        assert len(discovery.members) < len(discovery.mined)

    def test_reuses_given_mining(self, small_collection):
        """Test that a precomputed mined list is used as is."""
        mined = mine(small_collection, 2)
        discovery = discover_patterns(small_collection, config(), mined=mined)

        assert [m.code for m in discovery.mined] == [m.code for m in mined]

    def test_ranking_collection(self, separable_collection):
        """Test that statistics come from the ranking collection when one is given."""
        half = separable_collection.subset(list(range(10)))

        own = discover_patterns(half, config())
        full = discover_patterns(half, config(), ranking=separable_collection)

        assert [m.code for m in own.members] == [m.code for m in full.members]
        assert all((r.stats.size_a, r.stats.size_n) == (5, 5) for r in own.ranked)
        assert all((r.stats.size_a, r.stats.size_n) == (10, 10) for r in full.ranked)
        assert max(r.stats.gf for r in full.ranked) == 20

    def test_annotate_patterns(self, triangles):
        """Test the full annotation of mined patterns."""
        records = annotate_patterns(mine(triangles, 1), triangles)
        by_code = {str(r.code): r for r in records}

        path = by_code["0,1,0,0,0;1,2,0,0,0"]
        triangle = by_code["0,1,0,0,0;1,2,0,0,0;2,0,0,0,0"]

        assert path.induced is False and path.induced_stats is None
        assert triangle.induced is True and triangle.closed is True
        assert triangle.induced_stats.sf == 12
        assert path.stats.sf == 12
        assert path.score == 0.0


class TestMakeFolds:
    """Tests for make_folds."""

    def test_stratified(self, separable_collection):
        """Test that every test fold holds both classes."""
        folds, stratified = make_folds(separable_collection, 5, seed=1)

        assert stratified is True
        assert len(folds) == 5
        seen = []
        for train_idx, test_idx in folds:
            labels = {separable_collection.labels[i] for i in test_idx}
            assert labels == {GraphLabel.A, GraphLabel.N}
            assert not set(train_idx) & set(test_idx)
            seen.extend(test_idx.tolist())
        assert sorted(seen) == list(range(len(separable_collection)))

    def test_deterministic(self, separable_collection):
        """Test that a seed fixes the folds."""
        first, _ = make_folds(separable_collection, 5, seed=9)
        second, _ = make_folds(separable_collection, 5, seed=9)

        for (a_train, a_test), (b_train, b_test) in zip(first, second):
            assert np.array_equal(a_test, b_test)

    def test_small_class_falls_back(self, caplog):
        """Test the non-stratified fallback with a warning."""
        collection = make_collection(
            [(make_graph((0,)), "A")] + [(make_graph((1,)), "N") for _ in range(5)]
        )

        with caplog.at_level(logging.WARNING):
            folds, stratified = make_folds(collection, 3, seed=0)

        assert stratified is False
        assert len(folds) == 3
        assert "non-stratified" in caplog.text

    def test_too_few_graphs(self, triangles):
        """Test that k cannot exceed the collection size."""
        with pytest.raises(EvaluationError):
            make_folds(triangles, 3, seed=0)


class TestCrossValidate:
    """Tests for cross_validate."""

    def test_separable_collection(self, separable_collection):
        """Test perfect scores on a separable collection."""
        report = cross_validate(separable_collection, config())

        assert len(report.folds) == 5
        assert report.stratified is True
        assert report.mean_f(GraphLabel.A) == 1.0
        assert report.mean_f(GraphLabel.N) == 1.0
        assert report.std_f(GraphLabel.A) == 0.0

    def test_every_representation(self, separable_collection):
        """Test that the six representations run and separate."""
        for representation in Representation:
            report = cross_validate(
                separable_collection, config(representation=representation, s=3)
            )
            assert report.mean_f(GraphLabel.A) == 1.0
            assert all(fold.n_patterns == 3 for fold in report.folds)

    def test_same_seed_same_report(self, small_collection):
        """Test determinism across runs."""
        cfg = config(k=2, minsup=1, seed=5)

        first = cross_validate(small_collection, cfg)
        second = cross_validate(small_collection, cfg)

        for label in GraphLabel:
            assert [f.metrics[label] for f in first.folds] == [
                f.metrics[label] for f in second.folds
            ]

    def test_mining_sees_training_folds_only(self, separable_collection):
        """Test that held-out graphs never reach the miner."""
        cfg = config()
        folds, _ = make_folds(separable_collection, cfg.k, cfg.seed)
        seen = {}

        def hook(fold, discovery_collection):
            seen[fold] = {id(g) for g in discovery_collection.graphs}

        cross_validate(separable_collection, cfg, fold_hook=hook)

        assert sorted(seen) == list(range(cfg.k))
        for fold, (train_idx, test_idx) in enumerate(folds):
            train_ids = {id(separable_collection.graphs[i]) for i in train_idx}
            test_ids = {id(separable_collection.graphs[i]) for i in test_idx}
            assert seen[fold] == train_ids
            assert not seen[fold] & test_ids

    def test_mine_once_uses_full_collection(self, separable_collection):
        """Test that the mine-once variant mines the whole collection a single time."""
        calls = []

        cross_validate(
            separable_collection,
            config(mine_once=True),
            fold_hook=lambda fold, coll: calls.append((fold, len(coll))),
        )

        assert calls == [(-1, len(separable_collection))]

    def test_rank_on_full(self, separable_collection):
        """Test that ranking on the full collection still mines per fold."""
        cfg = config(rank_on_full=True, s=2)
        seen = []

        report = cross_validate(
            separable_collection, cfg, fold_hook=lambda fold, coll: seen.append(len(coll))
        )

        assert seen == [16] * 5
        assert report.mean_f(GraphLabel.A) == 1.0
        assert all(fold.n_patterns == 2 for fold in report.folds)

    def test_no_pattern_selected(self):
        """Test that a fold without patterns fails."""
        collection = make_collection(
            [(make_graph((2,)), "A") for _ in range(4)] + [(make_graph((1,)), "N") for _ in range(4)]
        )

        with pytest.raises(EvaluationError):
            cross_validate(collection, config(k=2, minsup="100%"))

    def test_too_few_graphs(self, triangles):
        """Test that k larger than the collection fails."""
        with pytest.raises(EvaluationError):
            cross_validate(triangles, config(k=5))


class TestReports:
    """Tests for evaluation report output."""

    def test_report_outputs(self, separable_collection, tmp_path):
        """Test the table, JSON and text forms."""
        report = cross_validate(separable_collection, config(s=2))

        frame = report_frame(report)
        assert frame["fold"].tolist() == ["0", "1", "2", "3", "4", "mean", "std"]
        assert frame.loc[frame["fold"] == "mean", "f_A"].iloc[0] == 1.0

        write_report_csv(report, tmp_path / "report.csv")
        write_report_json(report, tmp_path / "report.json")
        payload = json.loads((tmp_path / "report.json").read_text())
        assert payload["summary"]["A"]["mean_f_score"] == 1.0
        assert payload["config"]["s"] == 2
        assert len(payload["folds"]) == 5

        text = format_text(report)
        assert "Representation: gen-bin" in text
        assert "Class A: F-score 1.00 (0.00)" in text


@pytest.mark.dataset
def test_mutag_gen_bin_reference_score(data_dir):
    """gen-bin on MUTAG lands near the reference anomalous-class F-score."""
    from patternweaver.io.benchmark import read_benchmark

    bundle = data_dir / "MUTAG"
    if not bundle.is_dir():
        pytest.skip("MUTAG bundle not present")
    jobs = int(os.environ.get("PATTERNWEAVER_JOBS", "1"))
    report = cross_validate(
        read_benchmark(bundle), PipelineConfig(minsup="10%", max_vertices=5, max_edges=5, jobs=jobs)
    )

    assert report.stratified is True
    assert abs(report.mean_f(GraphLabel.A) - 0.85) <= 0.10
