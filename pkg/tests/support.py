"""Shared generators for randomized tests: tables, predicate trees, and the
translation of engine predicates into oracle query text."""

from __future__ import annotations

import csv
import io
import random
from decimal import Decimal

from asktable import (
    And,
    ColumnKind,
    Not,
    NumCompare,
    Or,
    TableDocument,
    TruePredicate,
    ValueMatch,
    load_table,
)

TEXT_POOL = ["alpha", "beta", "gamma", "delta", "red fox", "Blue Jay", "omega"]


def make_random_table(rng: random.Random, max_rows: int = 50, max_cols: int = 6):
    """A random mixed table; returns (csv_text, TableDocument)."""
    n_cols = rng.randint(2, max_cols)
    n_rows = rng.randint(1, max_rows)
    kinds = [rng.choice(["text", "num"]) for _ in range(n_cols)]
    if "text" not in kinds:
        kinds[0] = "text"
    header = [f"Col {i}" for i in range(n_cols)]
    grid = []
    for _ in range(n_rows):
        row = []
        for kind in kinds:
            roll = rng.random()
            if roll < 0.1:
                row.append("")
            elif kind == "num":
                row.append(str(rng.randint(0, 9)))
            else:
                row.append(rng.choice(TEXT_POOL))
        grid.append(row)
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(grid)
    text = out.getvalue()
    return text, load_table(text)


def random_predicate(rng: random.Random, table: TableDocument, depth: int = 3):
    """A random predicate tree of the given maximum depth."""
    textual = [c.index for c in table.columns if c.kind is ColumnKind.TEXTUAL]
    numeric = [c.index for c in table.columns if c.kind is ColumnKind.NUMERIC]

    def leaf():
        if numeric and rng.random() < 0.4:
            op = rng.choice(["EQ", "GT", "LT", "GE", "LE"])
            return NumCompare(rng.choice(numeric), op, Decimal(rng.randint(0, 9)))
        if textual:
            value = rng.choice(TEXT_POOL + ["missing value"])
            from asktable import normalize_key

            return ValueMatch(rng.choice(textual), normalize_key(value))
        return TruePredicate()

    def node(d):
        if d <= 0 or rng.random() < 0.35:
            return leaf()
        kind = rng.choice(["and", "or", "not"])
        if kind == "not":
            return Not(node(d - 1))
        children = tuple(node(d - 1) for _ in range(rng.randint(2, 3)))
        return (And if kind == "and" else Or)(children)

    return node(depth)


def predicate_to_oracle(pred, table: TableDocument) -> str:
    """Render an engine predicate as oracle query predicate text."""

    def quote(text: str) -> str:
        return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'

    def walk(p) -> str:
        if isinstance(p, TruePredicate):
            return "true"
        if isinstance(p, ValueMatch):
            return f"{quote(table.column(p.column).display_name)}={quote(p.value)}"
        if isinstance(p, NumCompare):
            op = {"EQ": "=", "GT": ">", "LT": "<", "GE": ">=", "LE": "<="}[p.op]
            return f"{quote(table.column(p.column).display_name)}{op}{p.number}"
        if isinstance(p, Not):
            return f"!({walk(p.child)})"
        joiner = " & " if isinstance(p, And) else " | "
        return "(" + joiner.join(walk(c) for c in p.children) + ")"

    return walk(pred)
