"""
Error types raised by PatternWeaver.

Input problems subclass ``ValueError`` as well, so code that already catches
``ValueError`` keeps working.
"""

from pathlib import Path
from typing import Optional, Union


class PatternWeaverError(Exception):
    """Base class for all PatternWeaver errors."""


class GraphError(PatternWeaverError, ValueError):
    """An attributed graph or pattern violates its structural invariants."""


class ParseError(PatternWeaverError, ValueError):
    """A dataset file could not be parsed."""

    def __init__(
        self,
        message: str,
        path: Optional[Union[str, Path]] = None,
        line_number: Optional[int] = None,
    ):
        self.path = str(path) if path is not None else None
        self.line_number = line_number
        location = ""
        if self.path is not None:
            location = self.path
            if line_number is not None:
                location += f":{line_number}"
            location += ": "
        elif line_number is not None:
            location = f"line {line_number}: "
        super().__init__(f"{location}{message}")


class SchemaError(PatternWeaverError, ValueError):
    """A tabular input lacks the columns its mapping requires."""

    def __init__(self, missing_columns: list[str], path: Optional[Union[str, Path]] = None):
        self.missing_columns = list(missing_columns)
        self.path = str(path) if path is not None else None
        where = f" in {self.path}" if self.path else ""
        super().__init__(f"Missing required columns{where}: {', '.join(self.missing_columns)}")


class MiningError(PatternWeaverError, ValueError):
    """Mining parameters cannot be applied to the given collection."""


class TrainingError(PatternWeaverError, ValueError):
    """The classifier cannot be trained or applied to the given data."""


class EvaluationError(PatternWeaverError, ValueError):
    """Cross-validation cannot run with the given data and configuration."""


class ExtractionError(PatternWeaverError, ValueError):
    """A procurement contract subset cannot be turned into a graph."""
