"""The table-algebra IR: predicate trees and query intents.

Intents have a canonical form (connective children sorted, nested
same-kind connectives flattened) and a stable s-expression text rendering,
so different phrasings of the same request compare equal and clients can
show users exactly what was understood.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field, replace
from decimal import Decimal

from .table import TableDocument

__all__ = [
    "And",
    "Diagnostics",
    "IntentKind",
    "NeedsClarification",
    "Not",
    "NotUnderstood",
    "NumCompare",
    "Or",
    "ParseOutcome",
    "Parsed",
    "Predicate",
    "QueryIntent",
    "TruePredicate",
    "ValueMatch",
    "canonicalize",
    "render_intent",
    "render_predicate",
]

_OP_SYMBOL = {"EQ": "=", "GT": ">", "LT": "<", "GE": ">=", "LE": "<="}


@dataclass(frozen=True)
class TruePredicate:
    """Matches every row; the predicate of an unfiltered query."""


@dataclass(frozen=True)
class ValueMatch:
    """Normalized text equality against one textual column."""

    column: int
    value: str  # normalized


@dataclass(frozen=True)
class NumCompare:
    """Decimal comparison against one numeric column."""

    column: int
    op: str  # EQ | GT | LT | GE | LE
    number: Decimal


@dataclass(frozen=True)
class And:
    children: tuple["Predicate", ...]

    def __post_init__(self):
        if len(self.children) < 2:
            raise ValueError("And requires at least two children")


@dataclass(frozen=True)
class Or:
    children: tuple["Predicate", ...]

    def __post_init__(self):
        if len(self.children) < 2:
            raise ValueError("Or requires at least two children")


@dataclass(frozen=True)
class Not:
    child: "Predicate"


Predicate = TruePredicate | ValueMatch | NumCompare | And | Or | Not


class IntentKind(enum.Enum):
    FILTER = "filter"
    COUNT = "count"
    MOST_FREQUENT = "most-frequent"
    LEAST_FREQUENT = "least-frequent"
    GROUP_COUNT = "group-count"


@dataclass(frozen=True)
class QueryIntent:
    """A resolved table-algebra operation.

    `projection` is meaningful for FILTER only, `target_column` for
    MOST/LEAST_FREQUENT, `group_columns` for GROUP_COUNT; validate() checks
    the shape.
    """

    kind: IntentKind
    predicate: Predicate = TruePredicate()
    projection: tuple[int, ...] | None = None
    target_column: int | None = None
    group_columns: tuple[int, ...] = ()

    def validate(self) -> None:
        if self.kind in (IntentKind.MOST_FREQUENT, IntentKind.LEAST_FREQUENT):
            if self.target_column is None:
                raise ValueError(f"{self.kind.value} requires target_column")
        elif self.target_column is not None:
            raise ValueError(f"{self.kind.value} does not take target_column")
        if self.kind is IntentKind.GROUP_COUNT:
            if not self.group_columns:
                raise ValueError("group-count requires group_columns")
        elif self.group_columns:
            raise ValueError(f"{self.kind.value} does not take group_columns")
        if self.projection is not None and self.kind is not IntentKind.FILTER:
            raise ValueError(f"{self.kind.value} does not take a projection")


# -- parse outcomes ----------------------------------------------------------


@dataclass(frozen=True)
class Parsed:
    intent: QueryIntent
    # Dropped tokens (text, start, end) that matched nothing but did not
    # block the parse.
    warnings: tuple[tuple[str, int, int], ...] = ()


@dataclass(frozen=True)
class NeedsClarification:
    """An ambiguous bare value: which of the candidate columns was meant?"""

    value: str  # normalized
    candidates: tuple[tuple[int, str, int], ...]  # (column index, display name, count)
    utterance: str
    bindings: tuple[tuple[str, int], ...] = ()  # values already pinned to columns


@dataclass(frozen=True)
class Diagnostics:
    """Token spans that matched nothing, plus a human-readable reason."""

    unmatched: tuple[tuple[str, int, int], ...] = ()  # (token, start, end)
    reason: str = ""


@dataclass(frozen=True)
class NotUnderstood:
    diagnostics: Diagnostics = field(default_factory=Diagnostics)


ParseOutcome = Parsed | NeedsClarification | NotUnderstood


# -- canonical form ----------------------------------------------------------


def _sort_key(pred: Predicate) -> str:
    """A total order over predicates: leaves by (column, value), then shape."""
    if isinstance(pred, TruePredicate):
        return "0|true"
    if isinstance(pred, ValueMatch):
        return f"1|{pred.column:06d}|=|{pred.value}"
    if isinstance(pred, NumCompare):
        return f"1|{pred.column:06d}|{_OP_SYMBOL[pred.op]}|{pred.number}"
    if isinstance(pred, Not):
        return "2|" + _sort_key(pred.child)
    tag = "3" if isinstance(pred, And) else "4"
    return tag + "|" + min(_sort_key(c) for c in pred.children)


def canonicalize_predicate(pred: Predicate) -> Predicate:
    """Sort connective children and flatten nested same-kind connectives."""
    if isinstance(pred, (And, Or)):
        kind = type(pred)
        flat: list[Predicate] = []
        for child in pred.children:
            c = canonicalize_predicate(child)
            if isinstance(c, kind):
                flat.extend(c.children)
            else:
                flat.append(c)
        flat.sort(key=_sort_key)
        if len(flat) == 1:
            return flat[0]
        return kind(tuple(flat))
    if isinstance(pred, Not):
        return Not(canonicalize_predicate(pred.child))
    return pred


def canonicalize(intent: QueryIntent) -> QueryIntent:
    """Idempotent normal form enabling structural equality across paraphrases."""
    return replace(intent, predicate=canonicalize_predicate(intent.predicate))


# -- stable text form --------------------------------------------------------


def _quote(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def render_predicate(pred: Predicate, table: TableDocument) -> str:
    if isinstance(pred, TruePredicate):
        return "(true)"
    if isinstance(pred, ValueMatch):
        return f"(= {_quote(table.column(pred.column).display_name)} {_quote(pred.value)})"
    if isinstance(pred, NumCompare):
        name = _quote(table.column(pred.column).display_name)
        return f"({_OP_SYMBOL[pred.op]} {name} {pred.number})"
    if isinstance(pred, Not):
        return f"(not {render_predicate(pred.child, table)})"
    tag = "and" if isinstance(pred, And) else "or"
    inner = " ".join(render_predicate(c, table) for c in pred.children)
    return f"({tag} {inner})"


def render_intent(intent: QueryIntent, table: TableDocument) -> str:
    """The canonical IR as s-expression text (stable across runs)."""
    intent = canonicalize(intent)
    pred = render_predicate(intent.predicate, table)
    name = lambda i: _quote(table.column(i).display_name)  # noqa: E731
    if intent.kind is IntentKind.FILTER:
        if intent.projection:
            cols = " ".join(name(i) for i in intent.projection)
            return f"(filter {pred} (project {cols}))"
        return f"(filter {pred})"
    if intent.kind is IntentKind.COUNT:
        return f"(count {pred})"
    if intent.kind is IntentKind.MOST_FREQUENT:
        return f"(most-frequent {name(intent.target_column)} {pred})"
    if intent.kind is IntentKind.LEAST_FREQUENT:
        return f"(least-frequent {name(intent.target_column)} {pred})"
    cols = " ".join(name(i) for i in intent.group_columns)
    return f"(group-count ({cols}) {pred})"
