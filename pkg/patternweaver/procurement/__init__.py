"""
Labeled agent graphs from public procurement contracts.
"""

from .extract import (
    AgentGraph,
    ExtractionConfig,
    ExtractionResult,
    extract_collection,
    extract_graph,
    red_flag,
)
from .records import ColumnMapping, ContractRecord, read_contracts

__all__ = [
    "ContractRecord",
    "ColumnMapping",
    "read_contracts",
    "ExtractionConfig",
    "AgentGraph",
    "ExtractionResult",
    "red_flag",
    "extract_graph",
    "extract_collection",
]
