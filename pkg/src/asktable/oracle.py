"""Independent naive-scan oracle used to produce and check gold answers.

This module deliberately shares no evaluation code with the query engine:
it reads the CSV text itself, normalizes values with its own code, and
answers structural queries by scanning raw rows. The eval harness asserts
engine results against oracle results, so the two paths must stay separate.

Query syntax (used in corpus `check` lines)::

    filter Difficulty="Easy" & Terrain="Flat"
    count Terrain="Hilly" | Difficulty="Hard"
    count !(Terrain="Varied")
    most Terrain where County="Boone"
    group County where Difficulty="Executive"
    filter Holes>9 & "Course Type"="Public"
    count true

Predicates combine with ``&``, ``|`` and ``!``; parentheses group; column
and value tokens may be quoted. Comparison operators: = > < >= <=.
"""

from __future__ import annotations

import csv
import io
import re
from dataclasses import dataclass

__all__ = ["OracleAnswer", "OracleError", "OracleQuery", "parse_query", "run_query"]


class OracleError(ValueError):
    pass


def _norm(text: str) -> str:
    """The oracle's own text normalization, kept separate from the package's."""
    squeezed = re.sub(r"\s+", "", text.lower())
    return re.sub(r"^\W+|\W+$", "", squeezed, flags=re.UNICODE)


_NUM_RE = re.compile(r"[+-]?(\d+(\.\d*)?|\.\d+)$")


def _as_number(text: str) -> float | None:
    text = text.strip()
    return float(text) if _NUM_RE.fullmatch(text) else None


def _num_key(f: float) -> str:
    return str(int(f)) if f == int(f) else str(f)


# -- query text --------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"""\s*(?:
        (?P<quoted>"(?:[^"\\]|\\.)*")
      | (?P<op>>=|<=|=|>|<|&|\||!|\(|\)|,)
      | (?P<word>[^\s"()&|!,=<>]+)
    )""",
    re.VERBOSE,
)


def _lex(text: str) -> list[str]:
    tokens, pos = [], 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None or m.end() == pos:
            if text[pos:].strip():
                raise OracleError(f"bad query near {text[pos:pos + 20]!r}")
            break
        tok = m.group("quoted") or m.group("op") or m.group("word")
        if m.group("quoted"):
            tok = tok[1:-1].replace('\\"', '"').replace("\\\\", "\\")
            tok = "\0" + tok  # mark as quoted literal
        tokens.append(tok)
        pos = m.end()
    return tokens


def _unmark(tok: str) -> str:
    return tok[1:] if tok.startswith("\0") else tok


@dataclass(frozen=True)
class OracleQuery:
    kind: str  # filter | count | most | least | group
    columns: tuple[str, ...]  # target/group column names
    predicate: tuple  # tiny tuple-based AST


class _PredParser:
    def __init__(self, tokens: list[str]):
        self.tokens = tokens
        self.pos = 0

    def peek(self) -> str | None:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def take(self) -> str:
        tok = self.peek()
        if tok is None:
            raise OracleError("unexpected end of query")
        self.pos += 1
        return tok

    def parse(self) -> tuple:
        node = self.or_expr()
        if self.peek() is not None:
            raise OracleError(f"trailing tokens at {self.peek()!r}")
        return node

    def or_expr(self) -> tuple:
        parts = [self.and_expr()]
        while self.peek() == "|":
            self.take()
            parts.append(self.and_expr())
        return parts[0] if len(parts) == 1 else ("or", tuple(parts))

    def and_expr(self) -> tuple:
        parts = [self.unary()]
        while self.peek() == "&":
            self.take()
            parts.append(self.unary())
        return parts[0] if len(parts) == 1 else ("and", tuple(parts))

    def unary(self) -> tuple:
        if self.peek() == "!":
            self.take()
            return ("not", self.unary())
        if self.peek() == "(":
            self.take()
            node = self.or_expr()
            if self.take() != ")":
                raise OracleError("expected ')'")
            return node
        return self.atom()

    def atom(self) -> tuple:
        column = self.take()
        if _unmark(column) == "true" and not column.startswith("\0"):
            return ("true",)
        op = self.take()
        if op not in ("=", ">", "<", ">=", "<="):
            raise OracleError(f"expected comparison after {column!r}, got {op!r}")
        value = self.take()
        quoted = value.startswith("\0")
        value = _unmark(value)
        # Quoted equality is text equality; everything else is numeric.
        if op == "=" and quoted:
            return ("text", _unmark(column), value)
        number = _as_number(value)
        if number is None:
            if op == "=":
                return ("text", _unmark(column), value)
            raise OracleError(f"{op} needs a numeric value, got {value!r}")
        return ("num", _unmark(column), op, number)


def parse_query(text: str) -> OracleQuery:
    tokens = _lex(text)
    if not tokens:
        raise OracleError("empty query")
    kind = _unmark(tokens[0])
    rest = tokens[1:]
    if kind in ("filter", "count"):
        pred = _PredParser(rest).parse() if rest else ("true",)
        return OracleQuery(kind, (), pred)
    if kind in ("most", "least"):
        if not rest:
            raise OracleError(f"{kind} needs a column")
        column, rest = _unmark(rest[0]), rest[1:]
        pred = _split_where(rest)
        return OracleQuery(kind, (column,), pred)
    if kind == "group":
        columns = []
        while rest and _unmark(rest[0]) != "where":
            tok = rest.pop(0)
            if tok == ",":
                continue
            columns.append(_unmark(tok))
        if not columns:
            raise OracleError("group needs at least one column")
        pred = _split_where(rest)
        return OracleQuery(kind, tuple(columns), pred)
    raise OracleError(f"unknown query kind {kind!r}")


def _split_where(tokens: list[str]) -> tuple:
    if not tokens:
        return ("true",)
    if _unmark(tokens[0]) != "where":
        raise OracleError(f"expected 'where', got {tokens[0]!r}")
    return _PredParser(tokens[1:]).parse()


# -- evaluation --------------------------------------------------------------


@dataclass(frozen=True)
class OracleAnswer:
    kind: str
    rows: tuple[int, ...] = ()
    count: int = 0
    value: str = ""
    groups: tuple[tuple[tuple[str, ...], int], ...] = ()

    def group_map(self) -> dict[tuple[str, ...], int]:
        return {tuple(_norm(k) for k in key): n for key, n in self.groups}


def _column_index(header: list[str], name: str) -> int:
    wanted = _norm(name)
    for i, cell in enumerate(header):
        if _norm(cell) == wanted:
            return i
    raise OracleError(f"no column named {name!r}")


def _matches(cells: list[str], header: list[str], node: tuple) -> bool:
    tag = node[0]
    if tag == "true":
        return True
    if tag == "and":
        return all(_matches(cells, header, c) for c in node[1])
    if tag == "or":
        return any(_matches(cells, header, c) for c in node[1])
    if tag == "not":
        return not _matches(cells, header, node[1])
    if tag == "text":
        _, column, value = node
        raw = cells[_column_index(header, column)].strip()
        return bool(raw) and _norm(raw) == _norm(value)
    _, column, op, target = node
    raw = cells[_column_index(header, column)].strip()
    cell_num = _as_number(raw)
    if cell_num is None:
        return False
    return {
        "=": cell_num == target,
        ">": cell_num > target,
        "<": cell_num < target,
        ">=": cell_num >= target,
        "<=": cell_num <= target,
    }[op]


def run_query(csv_text: str, query: OracleQuery) -> OracleAnswer:
    """Answer a structural query by scanning the raw CSV rows."""
    records = [r for r in csv.reader(io.StringIO(csv_text)) if r]
    if len(records) < 2:
        raise OracleError("table needs a header and at least one row")
    header, rows = records[0], records[1:]

    matching = [
        rid for rid, cells in enumerate(rows) if _matches(cells, header, query.predicate)
    ]
    if query.kind == "filter":
        return OracleAnswer("rows", rows=tuple(matching))
    if query.kind == "count":
        return OracleAnswer("count", count=len(matching))
    if query.kind in ("most", "least"):
        col = _column_index(header, query.columns[0])
        tallies: dict[str, int] = {}
        first_raw: dict[str, str] = {}
        for rid in matching:
            raw = rows[rid][col].strip()
            if not raw:
                continue
            num = _as_number(raw)
            key = _norm(raw) if num is None else _num_key(num)
            tallies[key] = tallies.get(key, 0) + 1
            first_raw.setdefault(key, raw)
        if not tallies:
            raise OracleError("empty selection for most/least")
        pick = max if query.kind == "most" else min
        key = pick(tallies, key=lambda k: tallies[k])
        return OracleAnswer("value", value=first_raw[key], count=tallies[key])
    # group
    cols = [_column_index(header, c) for c in query.columns]
    groups: dict[tuple[str, ...], int] = {}
    first_key: dict[tuple[str, ...], tuple[str, ...]] = {}
    for rid in matching:
        raw = tuple(rows[rid][c].strip() for c in cols)
        if any(not cell for cell in raw):
            continue
        key = tuple(_norm(c) for c in raw)
        groups[key] = groups.get(key, 0) + 1
        first_key.setdefault(key, raw)
    return OracleAnswer(
        "groups",
        groups=tuple((first_key[k], n) for k, n in groups.items()),
    )
