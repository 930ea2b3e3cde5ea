"""
Utility functions for serialization and data handling.
"""

import dataclasses
import json
from enum import Enum
from pathlib import Path
from typing import Any, Union

import numpy as np
from pydantic import BaseModel


def to_jsonable(obj: Any) -> Any:
    """Convert reports, enums, numpy values and dataclasses to JSON-safe values"""
    if obj is None:
        return None
    elif isinstance(obj, Enum):
        return to_jsonable(obj.value)
    elif isinstance(obj, (str, int, float, bool)):
        return obj
    elif isinstance(obj, np.generic):
        return obj.item()
    elif isinstance(obj, np.ndarray):
        return [to_jsonable(item) for item in obj.tolist()]
    elif isinstance(obj, BaseModel):
        return obj.model_dump(mode="json")
    elif dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {f.name: to_jsonable(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
    elif isinstance(obj, (list, tuple)):
        return [to_jsonable(item) for item in obj]
    elif isinstance(obj, (set, frozenset)):
        return sorted((to_jsonable(item) for item in obj), key=str)
    elif isinstance(obj, dict):
        return {str(to_jsonable(k)): to_jsonable(v) for k, v in obj.items()}
    elif hasattr(obj, "__dict__"):
        return to_jsonable(vars(obj))
    else:
        return str(obj)


def write_json(obj: Any, path: Union[str, Path]) -> None:
    """Write ``obj`` as stable, indented JSON (sorted keys, trailing newline)"""
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        json.dump(to_jsonable(obj), handle, indent=2, sort_keys=True)
        handle.write("\n")
