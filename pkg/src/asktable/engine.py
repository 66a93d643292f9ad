"""Execute query intents against a table, tracking row provenance.

Every result remembers exactly which row ids produced it, so a count can
later be expanded back into the rows behind it. Evaluation is a plain scan;
at the data sizes this system targets no indexing is needed beyond the
value index used at parse time.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from decimal import Decimal

from .intent import (
    And,
    IntentKind,
    Not,
    NumCompare,
    Or,
    Predicate,
    QueryIntent,
    TruePredicate,
    ValueMatch,
)
from .lexicon import normalize_key
from .table import CellValue, TableDocument

__all__ = [
    "EmptySelectionError",
    "GroupEntry",
    "GroupTable",
    "QueryResult",
    "RowSet",
    "Scalar",
    "ValueAnswer",
    "eval_predicate",
    "execute",
]


class EmptySelectionError(Exception):
    """Most/least-frequent over zero matching rows; reported, not a crash."""

    def __init__(self, column_name: str):
        super().__init__(f"no rows to rank values of {column_name!r}")
        self.column_name = column_name


@dataclass(frozen=True)
class RowSet:
    """Matching rows, projected to `columns` (all columns when unprojected)."""

    row_ids: tuple[int, ...]
    columns: tuple[int, ...]

    @property
    def provenance(self) -> tuple[int, ...]:
        return self.row_ids


@dataclass(frozen=True)
class Scalar:
    count: int
    provenance: tuple[int, ...]


@dataclass(frozen=True)
class ValueAnswer:
    column: int
    value: CellValue
    count: int
    provenance: tuple[int, ...]


@dataclass(frozen=True)
class GroupEntry:
    key: tuple[CellValue, ...]
    count: int
    provenance: tuple[int, ...]


@dataclass(frozen=True)
class GroupTable:
    group_columns: tuple[int, ...]
    groups: tuple[GroupEntry, ...]
    # Rows matching the predicate but dropped because a group cell was empty.
    dropped_rows: tuple[int, ...] = field(default=())


QueryResult = RowSet | Scalar | ValueAnswer | GroupTable


def _decimal_key(d: Decimal) -> str:
    # Plain notation with trailing zeros stripped, so 18, 18.0 and 18.00
    # share an identity and no key ever uses scientific notation.
    s = format(d, "f")
    if "." in s:
        s = s.rstrip("0").rstrip(".")
    return "0" if s in ("", "-0") else s


def _cell_key(cell: CellValue) -> str:
    """Identity used for value equality and grouping; empty cells have none."""
    if isinstance(cell, Decimal):
        return _decimal_key(cell)
    return normalize_key(cell) if cell is not None else ""


def eval_predicate(row: tuple[CellValue, ...], predicate: Predicate) -> bool:
    """Evaluate a predicate against one row record; empty cells never match."""
    if isinstance(predicate, TruePredicate):
        return True
    if isinstance(predicate, ValueMatch):
        cell = row[predicate.column]
        if cell is None:
            return False
        return _cell_key(cell) == predicate.value
    if isinstance(predicate, NumCompare):
        cell = row[predicate.column]
        if not isinstance(cell, Decimal):
            return False
        n = predicate.number
        return {
            "EQ": cell == n,
            "GT": cell > n,
            "LT": cell < n,
            "GE": cell >= n,
            "LE": cell <= n,
        }[predicate.op]
    if isinstance(predicate, And):
        return all(eval_predicate(row, c) for c in predicate.children)
    if isinstance(predicate, Or):
        return any(eval_predicate(row, c) for c in predicate.children)
    if isinstance(predicate, Not):
        return not eval_predicate(row, predicate.child)
    raise TypeError(f"unknown predicate {predicate!r}")


def execute(intent: QueryIntent, table: TableDocument) -> QueryResult:
    """Run an intent over the table.

    Raises EmptySelectionError for most/least-frequent over an empty
    selection; everything else returns a result, possibly empty.
    """
    intent.validate()
    matching = [
        rid for rid, row in enumerate(table.rows) if eval_predicate(row, intent.predicate)
    ]

    if intent.kind is IntentKind.FILTER:
        columns = intent.projection or tuple(c.index for c in table.columns)
        return RowSet(tuple(matching), tuple(columns))

    if intent.kind is IntentKind.COUNT:
        return Scalar(len(matching), tuple(matching))

    if intent.kind in (IntentKind.MOST_FREQUENT, IntentKind.LEAST_FREQUENT):
        column = intent.target_column
        assert column is not None
        tallies: dict[str, list[int]] = {}
        first_value: dict[str, CellValue] = {}
        for rid in matching:
            cell = table.rows[rid][column]
            if cell is None:
                continue
            key = _cell_key(cell)
            tallies.setdefault(key, []).append(rid)
            first_value.setdefault(key, cell)
        if not tallies:
            raise EmptySelectionError(table.column(column).display_name)
        # Dict order is first occurrence; min/max return the first extreme,
        # which is exactly the earliest-occurrence tie-break.
        pick = max if intent.kind is IntentKind.MOST_FREQUENT else min
        key = pick(tallies, key=lambda k: len(tallies[k]))
        rows = tallies[key]
        return ValueAnswer(column, first_value[key], len(rows), tuple(rows))

    # GROUP_COUNT
    group_cols = intent.group_columns
    entries: dict[tuple[str, ...], list[int]] = {}
    first_key: dict[tuple[str, ...], tuple[CellValue, ...]] = {}
    dropped: list[int] = []
    for rid in matching:
        cells = tuple(table.rows[rid][c] for c in group_cols)
        if any(c is None for c in cells):
            dropped.append(rid)
            continue
        key = tuple(_cell_key(c) for c in cells)
        entries.setdefault(key, []).append(rid)
        first_key.setdefault(key, cells)
    groups = tuple(
        GroupEntry(first_key[k], len(rows), tuple(rows)) for k, rows in entries.items()
    )
    return GroupTable(tuple(group_cols), groups, tuple(dropped))
