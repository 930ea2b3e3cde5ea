"""
Procurement contract records and their tabular input.

A contract file is delimiter-separated with a header row. A ``ColumnMapping``
names the header of each field, so files with another schema (FOPPA's, for
instance) can be read without reshaping them first.
"""

import logging
from pathlib import Path
from typing import Optional, Union

import pandas as pd
from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from ..exceptions import ParseError, SchemaError

logger = logging.getLogger(__name__)


class ContractRecord(BaseModel):
    """One awarded contract (or lot group) between a buyer and a winner."""

    model_config = ConfigDict(frozen=True)

    contract_id: str = Field(min_length=1)
    buyer_id: str = Field(min_length=1)
    winner_id: str = Field(min_length=1)
    lot_count: int = Field(ge=1, description="Lots covered by the contract")
    offers_received: Optional[int] = Field(
        default=None, ge=0, description="Offers received, None when undocumented"
    )
    year: int = Field(description="Calendar year of the award")
    region_code: str = Field(description="Administrative subdivision of the supplier")
    activity_sector: str = Field(description="Activity sector, e.g. works, supplies, services")
    agent_category: str = Field(description="Category of the buyer, e.g. municipality")

    @model_validator(mode="after")
    def _distinct_agents(self) -> "ContractRecord":
        if self.buyer_id == self.winner_id:
            raise ValueError(f"Buyer and winner are the same agent ({self.buyer_id})")
        return self


class ColumnMapping(BaseModel):
    """Header name of each contract field in the input file."""

    contract_id: str = Field(default="contract_id", description="Contract identifier column")
    buyer_id: str = Field(default="buyer_id", description="Buyer identifier column")
    winner_id: str = Field(default="winner_id", description="Winner identifier column")
    lot_count: str = Field(default="lot_count", description="Number of lots column")
    offers_received: str = Field(default="offers_received", description="Offers received column")
    year: str = Field(default="year", description="Award year or award date column")
    region_code: str = Field(default="region_code", description="Supplier region column")
    activity_sector: str = Field(default="activity_sector", description="Sector column")
    agent_category: str = Field(default="agent_category", description="Buyer category column")

    @classmethod
    def from_file(cls, path: Union[str, Path]) -> "ColumnMapping":
        """
        Load ``field = column`` lines. Blank lines and ``#`` comments are
        ignored; unknown fields are rejected.
        """
        values: dict[str, str] = {}
        with open(path, encoding="utf-8") as handle:
            for line_number, raw in enumerate(handle, start=1):
                line = raw.split("#", 1)[0].strip()
                if not line:
                    continue
                key, sep, value = line.partition("=")
                key, value = key.strip(), value.strip()
                if not sep or not key or not value:
                    raise ParseError(
                        f"Expected 'field = column', got {raw.strip()!r}", path, line_number
                    )
                if key not in cls.model_fields:
                    raise ParseError(f"Unknown field {key!r}", path, line_number)
                values[key] = value
        return cls(**values)


def _parse_year(value: str) -> int:
    value = value.strip()
    if value.isdigit():
        return int(value)
    return int(pd.Timestamp(value).year)


def _parse_count(value: str) -> Optional[int]:
    value = value.strip()
    if not value:
        return None
    return int(float(value))


def read_contracts(
    path: Union[str, Path],
    mapping: Optional[ColumnMapping] = None,
    sep: Optional[str] = None,
) -> list[ContractRecord]:
    """
    Read contract records; rows that violate the record rules are skipped
    with a warning.

    Args:
        path: Contract file.
        mapping: Column names, defaults to the field names.
        sep: Delimiter; tab for ``.tsv`` files and comma otherwise by default.

    Raises:
        SchemaError: when mapped columns are missing from the header.
    """
    mapping = mapping or ColumnMapping()
    path = Path(path)
    if sep is None:
        sep = "\t" if path.suffix.lower() == ".tsv" else ","
    frame = pd.read_csv(path, sep=sep, dtype=str, keep_default_na=False)

    columns = mapping.model_dump()
    missing = sorted({column for column in columns.values() if column not in frame.columns})
    if missing:
        raise SchemaError(missing, path)

    records = []
    skipped = 0
    for offset, row in enumerate(frame.to_dict(orient="records")):
        raw = {name: str(row[column]) for name, column in columns.items()}
        try:
            records.append(
                ContractRecord(
                    contract_id=raw["contract_id"].strip(),
                    buyer_id=raw["buyer_id"].strip(),
                    winner_id=raw["winner_id"].strip(),
                    lot_count=_parse_count(raw["lot_count"]),
                    offers_received=_parse_count(raw["offers_received"]),
                    year=_parse_year(raw["year"]),
                    region_code=raw["region_code"].strip(),
                    activity_sector=raw["activity_sector"].strip(),
                    agent_category=raw["agent_category"].strip(),
                )
            )
        except (ValidationError, ValueError) as e:
            skipped += 1
            logger.debug(f"{path}:{offset + 2}: skipped contract row: {e}")

    if skipped:
        logger.warning(f"Skipped {skipped} invalid contract rows in {path}")
    logger.info(f"Read {len(records)} contracts from {path}")
    return records
