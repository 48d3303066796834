from __future__ import annotations

import csv
import json
import logging
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

from pydantic import BaseModel, Field, model_validator

logger = logging.getLogger(__name__)

Cell = Union[int, float, str]

# 17 significant digits round-trip every double
FLOAT_FORMAT = "%.17g"

SCHEMA_PATH = Path(__file__).resolve().parent.parent / "docs" / "report.schema.json"


class Table(BaseModel):
    """One rectangular block of output: a header plus rows of cells."""

    name: str = Field(pattern=r"^[a-z0-9_]+$")
    columns: List[str] = Field(min_length=1)
    rows: List[List[Cell]] = Field(default_factory=list)

    @model_validator(mode="after")
    def _rows_match_header(self) -> "Table":
        width = len(self.columns)
        for i, row in enumerate(self.rows):
            if len(row) != width:
                raise ValueError(
                    f"Table {self.name!r} row {i} has {len(row)} cells, header has {width}"
                )
        return self

    def column(self, name: str) -> List[Cell]:
        idx = self.columns.index(name)
        return [row[idx] for row in self.rows]


class Report(BaseModel):
    """Everything one subcommand produces, in a fixed table order."""

    command: str
    family: Optional[str] = None
    parameters: Dict[str, Any] = Field(default_factory=dict)
    tables: List[Table] = Field(default_factory=list)

    def table(self, name: str) -> Table:
        for t in self.tables:
            if t.name == name:
                return t
        raise KeyError(f"Report {self.command!r} has no table {name!r}")


def format_cell(value: Cell) -> str:
    if isinstance(value, float):
        return FLOAT_FORMAT % value
    return str(value)


def _write_csv(table: Table, path: Path) -> None:
    with path.open("w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(table.columns)
        for row in table.rows:
            writer.writerow([format_cell(v) for v in row])


def write_report(report: Report, fmt: str, directory: Union[str, Path]) -> List[Path]:
    """
    csv:  <directory>/<command>-<table>.csv, one header row each
    json: <directory>/<command>.json
    """
    out_dir = Path(directory)
    out_dir.mkdir(parents=True, exist_ok=True)

    if fmt == "json":
        path = out_dir / f"{report.command}.json"
        path.write_text(report.model_dump_json(indent=2) + "\n", encoding="utf-8")
        written = [path]
    elif fmt == "csv":
        written = []
        for table in report.tables:
            path = out_dir / f"{report.command}-{table.name}.csv"
            _write_csv(table, path)
            written.append(path)
    else:
        raise ValueError(f"Unsupported output format {fmt!r} (expected csv or json)")

    for path in written:
        logger.info("Wrote %s", path)
    return written


def report_json_schema() -> Dict[str, Any]:
    return Report.model_json_schema()


def render_schema() -> str:
    """Text of docs/report.schema.json."""
    return json.dumps(report_json_schema(), indent=2, sort_keys=True) + "\n"
