"""Typed, immutable tables ingested from delimiter-separated text.

A table is loaded once, column kinds are inferred (a column is numeric only
when every non-empty cell parses as a decimal number), and a value index is
built mapping each normalized textual cell value to the columns containing
it. Row ids are 0-based ingestion order and are the unit of provenance
throughout the system.
"""

from __future__ import annotations

import csv
import enum
import io
import re
from dataclasses import dataclass
from decimal import Decimal
from typing import IO, Iterable, Mapping

from .lexicon import normalize_key

__all__ = [
    "BadColumnError",
    "CellValue",
    "ColumnKind",
    "ColumnMeta",
    "DuplicateHeaderError",
    "EmptyTableError",
    "HeaderRequiredError",
    "RaggedRowError",
    "TableDocument",
    "TableError",
    "ValueIndex",
    "build_value_index",
    "column_values",
    "load_table",
    "serialize_table",
]

# A cell is plain text, a decimal number, or empty (blank raw cell).
CellValue = str | Decimal | None

# Optional sign, optional fraction; no thousands separators or units.
_NUMBER_RE = re.compile(r"[+-]?(\d+(\.\d*)?|\.\d+)")


class TableError(Exception):
    """Base class for ingestion and lookup errors."""


class RaggedRowError(TableError):
    def __init__(self, row_id: int, expected: int, got: int):
        super().__init__(
            f"row {row_id} has {got} cells, header has {expected}"
        )
        self.row_id = row_id


class DuplicateHeaderError(TableError):
    def __init__(self, norm_key: str):
        super().__init__(f"duplicate column name {norm_key!r} after normalization")
        self.norm_key = norm_key


class EmptyTableError(TableError):
    def __init__(self):
        super().__init__("table has no data rows")


class HeaderRequiredError(TableError):
    def __init__(self):
        super().__init__("a header row is required; has_header=False is not supported")


class BadColumnError(TableError):
    def __init__(self, column: int):
        super().__init__(f"no column with index {column}")
        self.column = column


class ColumnKind(enum.Enum):
    TEXTUAL = "textual"
    NUMERIC = "numeric"


@dataclass(frozen=True)
class ColumnMeta:
    index: int
    display_name: str
    norm_key: str
    kind: ColumnKind


@dataclass(frozen=True)
class TableDocument:
    """An immutable ingested table; row ids are positions in `rows`."""

    columns: tuple[ColumnMeta, ...]
    rows: tuple[tuple[CellValue, ...], ...]
    source_name: str = "table"

    @property
    def n_rows(self) -> int:
        return len(self.rows)

    @property
    def n_columns(self) -> int:
        return len(self.columns)

    def column(self, index: int) -> ColumnMeta:
        if not 0 <= index < len(self.columns):
            raise BadColumnError(index)
        return self.columns[index]

    def column_by_key(self, norm_key: str) -> ColumnMeta | None:
        return self._key_map().get(norm_key)

    def cell(self, row_id: int, column: int) -> CellValue:
        return self.rows[row_id][self.column(column).index]

    def _key_map(self) -> Mapping[str, ColumnMeta]:
        # Cached on first use; the table is frozen so this is safe.
        cached = self.__dict__.get("_keys")
        if cached is None:
            cached = {c.norm_key: c for c in self.columns}
            object.__setattr__(self, "_keys", cached)
        return cached


def _parse_cell(raw: str) -> CellValue:
    text = raw.strip()
    if not text:
        return None
    if _NUMBER_RE.fullmatch(text):
        return Decimal(text)
    return text


def load_table(
    source: bytes | str | IO[str] | IO[bytes],
    delimiter: str = ",",
    has_header: bool = True,
    source_name: str = "table",
) -> TableDocument:
    """Ingest RFC-4180-style delimited text into a TableDocument.

    The first record must be the header. Column kind is numeric when all
    non-empty cells parse as decimals, textual otherwise.

    Raises HeaderRequiredError, EmptyTableError, DuplicateHeaderError, or
    RaggedRowError (with the offending 0-based data row id).
    """
    if not has_header:
        raise HeaderRequiredError()
    if isinstance(source, bytes):
        text = source.decode("utf-8")
    elif isinstance(source, str):
        text = source
    else:
        data = source.read()
        text = data.decode("utf-8") if isinstance(data, bytes) else data
    # Zero-cell records only come from blank lines; skip them.
    records = [row for row in csv.reader(io.StringIO(text), delimiter=delimiter) if row]
    if not records:
        raise EmptyTableError()
    header, data_rows = records[0], records[1:]
    if not data_rows:
        raise EmptyTableError()

    seen: set[str] = set()
    for name in header:
        key = normalize_key(name)
        if key in seen:
            raise DuplicateHeaderError(key)
        seen.add(key)

    parsed: list[tuple[CellValue, ...]] = []
    for row_id, raw in enumerate(data_rows):
        if len(raw) != len(header):
            raise RaggedRowError(row_id, len(header), len(raw))
        parsed.append(tuple(_parse_cell(cell) for cell in raw))

    columns = []
    for idx, name in enumerate(header):
        cells = [row[idx] for row in parsed]
        numeric = all(isinstance(c, Decimal) for c in cells if c is not None)
        columns.append(
            ColumnMeta(
                index=idx,
                display_name=name,
                norm_key=normalize_key(name),
                kind=ColumnKind.NUMERIC if numeric else ColumnKind.TEXTUAL,
            )
        )
    return TableDocument(tuple(columns), tuple(parsed), source_name)


def serialize_table(table: TableDocument, delimiter: str = ",") -> str:
    """Write the table back to delimited text; load_table round-trips it."""
    out = io.StringIO()
    writer = csv.writer(out, delimiter=delimiter, lineterminator="\n")
    writer.writerow([c.display_name for c in table.columns])
    for row in table.rows:
        cells = ["" if c is None else str(c) for c in row]
        if cells == [""]:
            # A lone empty cell must be quoted or the line reads as blank.
            out.write('""\n')
        else:
            writer.writerow(cells)
    return out.getvalue()


class ValueIndex:
    """Map from normalized text value to the columns containing it.

    Only Text cells of textual columns are indexed; numeric columns are
    deliberately absent so numeric criteria always require an explicit
    column name.
    """

    def __init__(self, entries: Mapping[str, Mapping[int, int]]):
        self._entries = {v: dict(cols) for v, cols in entries.items()}

    def lookup(self, value: str) -> dict[int, int]:
        """Columns containing the value, as {column index: occurrence count}."""
        return dict(self._entries.get(normalize_key(value), {}))

    def __contains__(self, value: str) -> bool:
        return normalize_key(value) in self._entries

    def __len__(self) -> int:
        return len(self._entries)

    def values(self) -> Iterable[str]:
        return self._entries.keys()


def build_value_index(table: TableDocument) -> ValueIndex:
    entries: dict[str, dict[int, int]] = {}
    for col in table.columns:
        if col.kind is not ColumnKind.TEXTUAL:
            continue
        for row in table.rows:
            cell = row[col.index]
            if isinstance(cell, str):
                cols = entries.setdefault(normalize_key(cell), {})
                cols[col.index] = cols.get(col.index, 0) + 1
    return ValueIndex(entries)


def column_values(
    table: TableDocument,
    column: int,
    filter_rows: set[int] | None = None,
) -> list[CellValue]:
    """Cell values of one column in row order, optionally restricted to a row-id set."""
    meta = table.column(column)
    if filter_rows is None:
        return [row[meta.index] for row in table.rows]
    return [row[meta.index] for rid, row in enumerate(table.rows) if rid in filter_rows]
