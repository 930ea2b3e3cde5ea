"""
Command-line entry point ``patternweaver``.

Each stage is its own subcommand so experiments compose as shell loops;
``repro`` runs the representation x pattern-budget grid in one go.
Exit codes: 0 success, 1 runtime failure, 2 usage error.
"""

import argparse
import logging
import sys
import time
from collections.abc import Sequence
from pathlib import Path
from typing import Optional

import pandas as pd
from pydantic import ValidationError

from . import __version__
from .core.evaluation import cross_validate
from .core.features import FeatureMode, Representation, build_matrix
from .core.filters import FamilyFilter, SizeFilter, apply_filter
from .core.graph import GraphLabel, LabeledCollection
from .core.matcher import MatchMode
from .core.metrics import get_metrics, init_metrics, new_registry
from .core.miner import mine
from .core.pipeline import PipelineConfig, annotate_patterns, discover_patterns
from .core.selection import (
    FrequencyKind,
    PatternFamily,
    ScoredPattern,
    discrimination_score,
    novel_patterns,
    score_distribution,
    select_top,
    share_within,
)
from .exceptions import PatternWeaverError
from .io.benchmark import read_benchmark
from .io.matrix import write_matrix
from .io.patterns import PatternRecord, read_patterns, write_patterns
from .io.report import format_text, write_report_csv, write_report_json
from .io.transactions import read_transactions, write_transactions
from .procurement.extract import (
    ExtractionConfig,
    export_contract_features,
    extract_collection,
    filter_records,
    write_provenance,
)
from .procurement.records import ColumnMapping, read_contracts

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2


class UsageError(Exception):
    """Bad command-line usage detected after parsing."""


def _jobs(text: str) -> int:
    """Non-negative worker count; 0 means every CPU."""
    try:
        value = int(text)
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from e
    if value < 0:
        raise argparse.ArgumentTypeError(f"jobs must be >= 0, got {value}")
    return value


def _budget(text: str) -> Optional[int]:
    """``all`` or a positive integer."""
    if text.strip().lower() == "all":
        return None
    try:
        value = int(text)
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"expected a positive integer or 'all', got {text!r}") from e
    if value < 1:
        raise argparse.ArgumentTypeError(f"s must be >= 1, got {value}")
    return value


def _budgets(text: str) -> list[Optional[int]]:
    return [_budget(part) for part in text.split(",") if part.strip()]


def _existing(path: str) -> Path:
    resolved = Path(path)
    if not resolved.exists():
        raise UsageError(f"Input path does not exist: {path}")
    return resolved


def load_collection(path: str, positive_label: str = "1") -> LabeledCollection:
    """A benchmark bundle directory or a transaction file."""
    source = _existing(path)
    if source.is_dir():
        return read_benchmark(source, positive_label=positive_label)
    return read_transactions(source)


def _add_input(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("input", help="Transaction file or benchmark bundle directory")
    parser.add_argument(
        "--positive-label",
        default="1",
        help="Benchmark class value mapped to the anomalous class (default: 1)",
    )


def _add_mining(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--minsup", default="10%", help="Minimum graph frequency: count, fraction or N%% (default: 10%%)"
    )
    parser.add_argument("--max-vertices", type=int, default=10, help="Vertex cap (default: 10)")
    parser.add_argument("--max-edges", type=int, default=10, help="Edge cap (default: 10)")


def _add_pipeline(parser: argparse.ArgumentParser) -> None:
    _add_mining(parser)
    parser.add_argument(
        "--normalize-classes",
        action="store_true",
        help="Divide class frequencies by class sizes when scoring",
    )
    parser.add_argument(
        "--ind-count-mode",
        choices=[m.value for m in MatchMode],
        default=MatchMode.INDUCED.value,
        help="Occurrences counted for induced patterns (default: induced)",
    )
    parser.add_argument("--log-scale", action="store_true", help="log1p-scale integer features")
    parser.add_argument("--C", type=float, default=1.0, help="SVM regularization (default: 1.0)")
    parser.add_argument("--k", type=int, default=10, help="Cross-validation folds (default: 10)")
    parser.add_argument("--seed", type=int, default=42, help="Seed for folds and SVM (default: 42)")
    parser.add_argument(
        "--mine-once", action="store_true", help="Mine the full collection once, not per fold"
    )
    parser.add_argument(
        "--rank-on-full",
        action="store_true",
        help="Score patterns on the full collection instead of the training fold",
    )


def _pipeline_config(args: argparse.Namespace, representation: Representation, s) -> PipelineConfig:
    return PipelineConfig(
        representation=representation,
        s=s,
        minsup=args.minsup,
        max_vertices=args.max_vertices,
        max_edges=args.max_edges,
        C=args.C,
        k=args.k,
        seed=args.seed,
        normalize_classes=args.normalize_classes,
        ind_count_mode=MatchMode(args.ind_count_mode),
        log_scale=args.log_scale,
        mine_once=args.mine_once,
        rank_on_full=args.rank_on_full,
        jobs=args.jobs,
    )


def cmd_mine(args: argparse.Namespace) -> int:
    collection = load_collection(args.input, args.positive_label)
    start = time.perf_counter()
    mined = mine(collection, args.minsup, args.max_vertices, args.max_edges, jobs=args.jobs)
    records = annotate_patterns(mined, collection, jobs=args.jobs)
    count = write_patterns(records, args.out)
    elapsed = time.perf_counter() - start
    print(f"{count} patterns written to {args.out} in {elapsed:.2f}s")
    return EXIT_OK


def _score_records(
    records: Sequence[PatternRecord],
    family: PatternFamily,
    kind: FrequencyKind,
    normalize: bool,
) -> list[tuple[PatternRecord, ScoredPattern]]:
    scored = []
    for record in records:
        stats = record.stats_for(family)
        scored.append(
            (record, ScoredPattern(record.pattern, stats, discrimination_score(stats, kind, normalize)))
        )
    return scored


def cmd_select(args: argparse.Namespace) -> int:
    records = read_patterns(_existing(args.patterns))
    family = PatternFamily(args.family)
    kind = FrequencyKind(args.freq)
    filter_ = FamilyFilter(family)
    if args.min_edges is not None or args.max_edges is not None:
        filter_ = filter_ & SizeFilter(min_edges=args.min_edges or 0, max_edges=args.max_edges)
    members = apply_filter(records, filter_)

    scored = _score_records(members, family, kind, args.normalize_classes)
    by_code = {sp.pattern.code: record for record, sp in scored}
    selected = select_top([sp for _, sp in scored], args.s)
    out_records = [
        PatternRecord(
            pattern=sp.pattern,
            stats=by_code[sp.pattern.code].stats,
            induced_stats=by_code[sp.pattern.code].induced_stats,
            closed=by_code[sp.pattern.code].closed,
            induced=by_code[sp.pattern.code].induced,
            score=sp.score,
        )
        for sp in selected
    ]
    write_patterns(out_records, args.out, keep_order=True)
    worst = min((sp.score for sp in selected), default=None)
    logger.info(f"Worst selected score: {worst}")
    print(f"{len(selected)} of {len(members)} {family.value} patterns written to {args.out}")
    return EXIT_OK


def cmd_vectorize(args: argparse.Namespace) -> int:
    collection = load_collection(args.input, args.positive_label)
    records = read_patterns(_existing(args.patterns))
    matrix = build_matrix(
        collection,
        [r.pattern for r in records],
        FeatureMode(args.mode),
        PatternFamily(args.family),
        MatchMode(args.ind_count_mode),
        jobs=args.jobs,
    )
    write_matrix(matrix, collection.labels, args.out)
    print(f"{matrix.shape[0]}x{matrix.shape[1]} matrix written to {args.out}")
    return EXIT_OK


def cmd_evaluate(args: argparse.Namespace) -> int:
    collection = load_collection(args.input, args.positive_label)
    config = _pipeline_config(args, Representation(args.representation), args.s)
    report = cross_validate(collection, config)
    text = format_text(report)
    if args.out:
        prefix = Path(args.out)
        prefix.with_suffix(".txt").write_text(text, encoding="utf-8")
        write_report_csv(report, prefix.with_suffix(".csv"))
        write_report_json(report, prefix.with_suffix(".json"))
    print(text, end="")
    return EXIT_OK


def cmd_extract(args: argparse.Namespace) -> int:
    mapping = ColumnMapping.from_file(_existing(args.mapping)) if args.mapping else None
    records = read_contracts(_existing(args.contracts), mapping)
    config = ExtractionConfig(
        sector=None if args.sector == "all" else args.sector,
        year=args.year,
        region=args.region,
        focal_category=args.focal_category,
        anomalous_edge_threshold=args.threshold,
        min_contracts=args.min_contracts,
        max_contracts=args.max_contracts,
    )
    result = extract_collection(records, config, jobs=args.jobs)
    write_transactions(result.collection, args.out)
    provenance = args.provenance or f"{args.out}.provenance.csv"
    write_provenance(result.graphs, provenance)
    if args.features:
        export_contract_features(filter_records(records, config), args.features)
    summary = result.collection.summary()
    print(
        f"{len(result.graphs)} graphs written to {args.out} "
        f"(A={summary.per_class[GraphLabel.A].count}, N={summary.per_class[GraphLabel.N].count}, "
        f"missing offers={result.tally.missing}/{result.tally.total})"
    )
    return EXIT_OK


def cmd_convert(args: argparse.Namespace) -> int:
    collection = read_benchmark(_existing(args.bundle), positive_label=args.positive_label)
    write_transactions(collection, args.out)
    print(f"{len(collection)} graphs written to {args.out}")
    return EXIT_OK


def summary_frame(collection: LabeledCollection) -> pd.DataFrame:
    summary = collection.summary()
    rows = [("all", summary.overall)] + [
        (label.value, summary.per_class[label]) for label in GraphLabel
    ]
    return pd.DataFrame(
        [
            {
                "class": name,
                "graphs": s.count,
                "mean_vertices": round(s.mean_vertices, 2),
                "std_vertices": round(s.std_vertices, 2),
                "mean_edges": round(s.mean_edges, 2),
                "std_edges": round(s.std_edges, 2),
            }
            for name, s in rows
        ]
    )


def cmd_stats(args: argparse.Namespace) -> int:
    frame = summary_frame(load_collection(args.input, args.positive_label))
    if args.out:
        frame.to_csv(args.out, index=False)
    print(frame.to_string(index=False))
    return EXIT_OK


def cmd_scores(args: argparse.Namespace) -> int:
    records = read_patterns(_existing(args.patterns))
    kind = FrequencyKind(args.freq)
    scores = [r.disc(kind, args.normalize_classes) for r in records]
    histogram = score_distribution(scores, args.bin_width)
    if args.out:
        histogram.to_csv(args.out, index=False)
    low, high = args.band
    print(histogram.to_string(index=False))
    print(f"{share_within(scores, low, high):.1%} of {len(scores)} scores in [{low:g}, {high:g}]")
    return EXIT_OK


def cmd_repro(args: argparse.Namespace) -> int:
    collection = load_collection(args.input, args.positive_label)
    representations = [Representation(r) for r in args.representations.split(",")]
    rows = []
    reference_cache: dict = {}
    for representation in representations:
        for s in args.s_values:
            config = _pipeline_config(args, representation, s)
            report = cross_validate(collection, config)
            row = {
                "representation": representation.value,
                "s": "all" if s is None else s,
                "f_A": round(report.mean_f(GraphLabel.A), 4),
                "std_A": round(report.std_f(GraphLabel.A), 4),
                "f_N": round(report.mean_f(GraphLabel.N), 4),
                "std_N": round(report.std_f(GraphLabel.N), 4),
            }
            # selections on the full collection, compared with the general family
            full = discover_patterns(collection, config)
            general_key = (representation.mode, s)
            if general_key not in reference_cache:
                general_config = config.model_copy(
                    update={"representation": Representation.of(PatternFamily.GENERAL, representation.mode)}
                )
                reference_cache[general_key] = discover_patterns(
                    collection, general_config, mined=full.mined
                ).selected
            row["worst_score"] = full.worst_selected_score
            row["novel_vs_gen"] = len(novel_patterns(full.selected, reference_cache[general_key]))
            rows.append(row)
            logger.info(f"repro {representation.value} s={row['s']}: F(A)={row['f_A']}")
    frame = pd.DataFrame(rows)
    frame.to_csv(args.out, index=False)
    print(frame.to_string(index=False))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="patternweaver",
        description="Discriminative subgraph patterns for anomalous graph classification",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument(
        "--log-level",
        default="INFO",
        choices=["DEBUG", "INFO", "WARNING", "ERROR"],
        help="Logging level (default: INFO)",
    )
    parser.add_argument(
        "--jobs",
        type=_jobs,
        default=None,
        help="Worker processes for mining, matching and extraction (default and 0: all CPUs)",
    )
    parser.add_argument(
        "--metrics-file", default=None, help="Write Prometheus metrics of the run to this file"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("mine", help="Mine frequent patterns and write a pattern file")
    _add_input(p)
    _add_mining(p)
    p.add_argument("--out", required=True, help="Pattern file to write")
    p.set_defaults(func=cmd_mine)

    p = sub.add_parser("select", help="Select the most discriminative patterns of a family")
    p.add_argument("patterns", help="Pattern file written by 'mine'")
    p.add_argument("--family", choices=[f.value for f in PatternFamily], default="gen")
    p.add_argument("--freq", choices=[k.value for k in FrequencyKind], default="gf")
    p.add_argument("--s", type=_budget, default=None, help="Patterns to keep or 'all' (default)")
    p.add_argument("--normalize-classes", action="store_true")
    p.add_argument("--min-edges", type=int, default=None, help="Drop patterns with fewer edges")
    p.add_argument("--max-edges", type=int, default=None, help="Drop patterns with more edges")
    p.add_argument("--out", required=True, help="Ranked pattern file to write")
    p.set_defaults(func=cmd_select)

    p = sub.add_parser("vectorize", help="Write the feature matrix over a pattern file")
    _add_input(p)
    p.add_argument("--patterns", required=True, help="Pattern file, columns in file order")
    p.add_argument("--mode", choices=[m.value for m in FeatureMode], default="bin")
    p.add_argument("--family", choices=[f.value for f in PatternFamily], default="gen")
    p.add_argument(
        "--ind-count-mode", choices=[m.value for m in MatchMode], default=MatchMode.INDUCED.value
    )
    p.add_argument("--out", required=True, help="Matrix file to write")
    p.set_defaults(func=cmd_vectorize)

    p = sub.add_parser("evaluate", help="Cross-validate one representation")
    _add_input(p)
    _add_pipeline(p)
    p.add_argument(
        "--representation",
        choices=[r.value for r in Representation],
        default=Representation.GEN_BIN.value,
    )
    p.add_argument("--s", type=_budget, default=None, help="Patterns to keep or 'all' (default)")
    p.add_argument("--out", default=None, help="Report prefix; writes .txt, .csv and .json")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("extract", help="Build labeled agent graphs from contract records")
    p.add_argument("contracts", help="Delimiter-separated contract file")
    p.add_argument("--mapping", default=None, help="'field = column' mapping file")
    p.add_argument("--sector", default="works", help="Sector kept, or 'all' (default: works)")
    p.add_argument("--year", type=int, default=None, help="Calendar year kept (default: every)")
    p.add_argument("--region", default=None, help="Supplier region kept (default: every)")
    p.add_argument("--focal-category", default="municipality")
    p.add_argument("--threshold", type=int, default=2, help="Anomalous edges for label A")
    p.add_argument("--min-contracts", type=int, default=3)
    p.add_argument("--max-contracts", type=int, default=200)
    p.add_argument("--out", required=True, help="Transaction file to write")
    p.add_argument("--provenance", default=None, help="Sidecar CSV (default: OUT.provenance.csv)")
    p.add_argument("--features", default=None, help="Also write per-contract features here")
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("convert", help="Convert a benchmark bundle to a transaction file")
    p.add_argument("bundle", help="Benchmark bundle directory")
    p.add_argument("--positive-label", default="1")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_convert)

    p = sub.add_parser("stats", help="Graph counts and size statistics per class")
    _add_input(p)
    p.add_argument("--out", default=None, help="Also write the table as CSV")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("scores", help="Distribution of discrimination scores")
    p.add_argument("patterns", help="Pattern file")
    p.add_argument("--freq", choices=[k.value for k in FrequencyKind], default="gf")
    p.add_argument("--normalize-classes", action="store_true")
    p.add_argument("--bin-width", type=float, default=1.0)
    p.add_argument(
        "--band", type=float, nargs=2, default=(0.0, 20.0), metavar=("LOW", "HIGH"),
        help="Report the share of scores inside [LOW, HIGH] (default: 0 20)",
    )
    p.add_argument("--out", default=None, help="Histogram CSV")
    p.set_defaults(func=cmd_scores)

    p = sub.add_parser("repro", help="Representation x pattern-budget grid")
    _add_input(p)
    _add_pipeline(p)
    p.add_argument(
        "--representations",
        default=",".join(r.value for r in Representation),
        help="Comma-separated representations (default: all six)",
    )
    p.add_argument(
        "--s-values", type=_budgets, default=[10, 50, 100, None],
        help="Comma-separated budgets, 'all' allowed (default: 10,50,100,all)",
    )
    p.add_argument("--out", required=True, help="Grid CSV")
    p.set_defaults(func=cmd_repro)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code) if isinstance(e.code, int) else EXIT_USAGE

    logging.basicConfig(
        level=getattr(logging, args.log_level),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
    if args.metrics_file:
        init_metrics(enabled=True, registry=new_registry())

    try:
        code = args.func(args)
    except UsageError as e:
        parser.print_usage(sys.stderr)
        print(f"patternweaver: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (PatternWeaverError, ValidationError, ValueError, OSError) as e:
        logger.error(f"{args.command} failed: {e}")
        return EXIT_FAILURE

    if args.metrics_file:
        get_metrics().write(args.metrics_file)
    return code


if __name__ == "__main__":
    sys.exit(main())
