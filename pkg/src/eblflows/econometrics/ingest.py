"""Validated CSV ingestion for the three documented schemas.

Schemas (header row required, UTF-8, ``.`` decimal separator, missing
values as empty cells):

* ``panel``: ``country,year,gdp_growth,cif,cod`` plus optional indicator
  columns ``old_above_median,young_above_median,old_top_quartile,
  young_top_quartile``.
* ``equity``: ``year,us_market_cap,global_market_cap,
  foreign_holdings_of_us_equity,us_foreign_equity_assets``.
* ``population``: ``country,year,age_bin_start,count``.

Unknown columns, duplicate keys and unparseable non-empty numerics are
errors; rows with missing required values are rejected and reported.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path

import pandas as pd

from ..params import DataError
from .homebias import EquitySeries
from .panel import INDICATOR_COLUMNS, PanelDataset

_SCHEMAS = {
    "panel": {
        "key": ("country", "year"),
        "required": ("country", "year", "gdp_growth", "cif", "cod"),
        "optional": INDICATOR_COLUMNS,
        "numeric": ("gdp_growth", "cif", "cod", *INDICATOR_COLUMNS),
        "integer": ("year", *INDICATOR_COLUMNS),
    },
    "equity": {
        "key": ("year",),
        "required": (
            "year",
            "us_market_cap",
            "global_market_cap",
            "foreign_holdings_of_us_equity",
            "us_foreign_equity_assets",
        ),
        "optional": (),
        "numeric": (
            "us_market_cap",
            "global_market_cap",
            "foreign_holdings_of_us_equity",
            "us_foreign_equity_assets",
        ),
        "integer": ("year",),
    },
    "population": {
        "key": ("country", "year", "age_bin_start"),
        "required": ("country", "year", "age_bin_start", "count"),
        "optional": (),
        "numeric": ("count",),
        "integer": ("year", "age_bin_start"),
    },
}


@dataclass
class IngestReport:
    n_rows: int = 0
    n_rejected: int = 0
    rejections: list[tuple[int, str]] = field(default_factory=list)


@dataclass
class IngestResult:
    dataset: object
    report: IngestReport


def ingest_csv(path, schema: str) -> IngestResult:
    """Parse and validate a CSV file against one of the documented schemas."""
    if schema not in _SCHEMAS:
        raise DataError(f"unknown schema {schema!r}; expected one of {sorted(_SCHEMAS)}")
    spec = _SCHEMAS[schema]
    path = Path(path)
    if not path.exists():
        raise DataError(f"no such file: {path}")

    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise DataError(f"empty file: {path}") from None
        header = [h.strip() for h in header]
        known = set(spec["required"]) | set(spec["optional"])
        unknown = [h for h in header if h not in known]
        if unknown:
            raise DataError(f"unknown columns in {path.name}: {unknown}")
        missing = [c for c in spec["required"] if c not in header]
        if missing:
            raise DataError(f"{path.name} is missing required columns: {missing}")
        if len(set(header)) != len(header):
            raise DataError(f"{path.name} has repeated header columns")

        report = IngestReport()
        rows = []
        seen_keys: set[tuple] = set()
        for line_no, raw in enumerate(reader, start=2):
            if not raw or all(not cell.strip() for cell in raw):
                continue
            if len(raw) != len(header):
                raise DataError(
                    f"{path.name}:{line_no} has {len(raw)} cells, expected {len(header)}"
                )
            record = dict(zip(header, (cell.strip() for cell in raw)))
            parsed, missing_cells = _parse_record(record, spec, path.name, line_no)
            report.n_rows += 1
            if missing_cells:
                report.n_rejected += 1
                report.rejections.append(
                    (line_no, f"missing values for {sorted(missing_cells)}")
                )
                continue
            key = tuple(parsed[c] for c in spec["key"])
            if key in seen_keys:
                raise DataError(f"{path.name}:{line_no} duplicate key {key}")
            seen_keys.add(key)
            rows.append(parsed)

    if not rows:
        raise DataError(f"{path.name} contains no usable data rows")
    frame = pd.DataFrame(rows)
    return IngestResult(dataset=_typed_dataset(schema, frame, str(path)), report=report)


def _parse_record(record: dict, spec: dict, filename: str, line_no: int):
    parsed = {}
    missing = []
    for column, cell in record.items():
        if cell == "":
            if column in spec["required"]:
                missing.append(column)
            else:
                parsed[column] = None
            continue
        if column in spec["numeric"] or column in spec["integer"]:
            try:
                value = float(cell)
            except ValueError:
                raise DataError(
                    f"{filename}:{line_no} unparseable numeric {cell!r} in column {column}"
                ) from None
            if column in spec["integer"]:
                if value != int(value):
                    raise DataError(
                        f"{filename}:{line_no} column {column} must be an integer, got {cell!r}"
                    )
                value = int(value)
            parsed[column] = value
        else:
            parsed[column] = cell
    return parsed, missing


def _typed_dataset(schema: str, frame: pd.DataFrame, source: str):
    if schema == "panel":
        return PanelDataset(frame=frame, provenance=f"ingested({source})")
    if schema == "equity":
        return EquitySeries(frame=frame)
    return frame
