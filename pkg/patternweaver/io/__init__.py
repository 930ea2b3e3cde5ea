"""
Readers and writers: graph transactions, benchmark bundles, pattern files,
feature matrices and evaluation reports.
"""

from .benchmark import read_benchmark
from .matrix import read_matrix, write_matrix
from .patterns import PatternRecord, read_patterns, write_patterns
from .report import format_text, report_frame, write_report_csv, write_report_json
from .transactions import parse_transactions, read_transactions, write_transactions

__all__ = [
    "parse_transactions",
    "read_transactions",
    "write_transactions",
    "read_benchmark",
    "PatternRecord",
    "read_patterns",
    "write_patterns",
    "read_matrix",
    "write_matrix",
    "report_frame",
    "format_text",
    "write_report_csv",
    "write_report_json",
]
