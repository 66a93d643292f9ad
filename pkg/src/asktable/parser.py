"""Rule-based utterance parser: tokens in, QueryIntent (or a question) out.

The pipeline is deterministic and index-driven:

  1. cue pass      - intent/connective/comparator phrases are consumed first,
                     longest match wins, so "or" is always a connective;
  2. gap pass      - remaining tokens become column references (longest run
                     whose concatenated normalization equals a column key),
                     table values (longest run found in the value index),
                     numbers, stopwords, or unmatched tokens;
  3. claim phases  - group cues claim their following column, numbers claim
                     an adjacent numeric column (explicitly named, never
                     inferred), most/least cues claim a target column, and
                     each remaining value binds to an adjacent column or to
                     the single column the index knows it from;
  4. assembly      - criteria combine by conjunction, "or" joins its two
                     neighboring criteria, a negation cue wraps the next
                     criterion, then the intent kind is resolved.

A bare value found in two or more columns with no adjoining column name
stops the parse with a clarification question. Tokens that match nothing
are dropped with a warning when the parse found an intent and at least one
semantic element, otherwise the whole utterance is rejected as not
understood, listing every unmatched token.
"""

from __future__ import annotations

from dataclasses import dataclass
from decimal import Decimal
from typing import Any, Mapping

from .intent import (
    And,
    Diagnostics,
    IntentKind,
    NeedsClarification,
    Not,
    NotUnderstood,
    NumCompare,
    Or,
    ParseOutcome,
    Parsed,
    Predicate,
    QueryIntent,
    TruePredicate,
    ValueMatch,
    canonicalize,
)
from .lexicon import Lexicon, Token, normalize_key, tokenize
from .table import ColumnKind, TableDocument, ValueIndex

__all__ = ["parse", "parse_numeric_criterion"]

_MAX_RUN = 8  # longest token run considered for a column or value match


@dataclass(eq=False)
class _Item:
    kind: str  # count|most|least|group|list|or|not|cmp|col|val|num|stop|unk
    ti: int  # first token index
    tj: int  # past-the-end token index
    payload: Any = None
    claimed: str | None = None


@dataclass(eq=False)
class _Criterion:
    pos: int  # token index, for or/not scoping
    predicate: Predicate


def _singular_variants(key: str) -> list[str]:
    out = []
    if key.endswith("ies"):
        out.append(key[:-3] + "y")
    if key.endswith("s"):
        out.append(key[:-1])
    if key.endswith("es"):
        out.append(key[:-2])
    return out


def _cue_pass(tokens: list[Token], lexicon: Lexicon) -> dict[int, _Item]:
    """Greedy longest-match over all cue sets; returns items keyed by start."""
    sets: list[tuple[str, Any]] = [
        ("count", lexicon.count_cues),
        ("most", lexicon.most_cues),
        ("least", lexicon.least_cues),
        ("group", lexicon.group_cues),
        ("or", lexicon.or_cues),
        ("not", lexicon.not_cues),
        ("list", lexicon.list_cues),
    ]
    items: dict[int, _Item] = {}
    i = 0
    while i < len(tokens):
        best: _Item | None = None
        for kind, cue_set in sets:
            n = _match_at(tokens, i, cue_set)
            if n and (best is None or n > best.tj - best.ti):
                best = _Item(kind, i, i + n)
        n, op = _match_cmp_at(tokens, i, lexicon)
        if n and (best is None or n > best.tj - best.ti):
            best = _Item("cmp", i, i + n, payload=op)
        if best is not None:
            items[i] = best
            i = best.tj
        else:
            i += 1
    return items


def _match_at(tokens: list[Token], i: int, cue_set) -> int:
    best = 0
    for phrase in cue_set:
        n = len(phrase)
        if n > best and tuple(t.text for t in tokens[i : i + n]) == phrase:
            best = n
    return best


def _match_cmp_at(tokens: list[Token], i: int, lexicon: Lexicon) -> tuple[int, str | None]:
    best, op = 0, None
    for phrase, phrase_op in lexicon.comparator_cues.items():
        n = len(phrase)
        if n > best and tuple(t.text for t in tokens[i : i + n]) == phrase:
            best, op = n, phrase_op
    return best, op


def _scan(
    tokens: list[Token],
    table: TableDocument,
    index: ValueIndex,
    lexicon: Lexicon,
    bindings: Mapping[str, int],
) -> list[_Item]:
    cues = _cue_pass(tokens, lexicon)
    items: list[_Item] = []
    i = 0
    while i < len(tokens):
        if i in cues:
            items.append(cues[i])
            i = cues[i].tj
            continue
        # The run may not cross into a cue span.
        limit = i + 1
        while (
            limit < len(tokens)
            and limit - i < _MAX_RUN
            and limit not in cues
        ):
            limit += 1

        col = _match_column(tokens, i, limit, table, lexicon)
        if col is not None:
            n, column = col
            items.append(_Item("col", i, i + n, payload=column))
            i += n
            continue

        val = _match_value(tokens, i, limit, index, bindings)
        if val is not None:
            n, key = val
            items.append(_Item("val", i, i + n, payload=key))
            i += n
            continue

        tok = tokens[i]
        if tok.is_number():
            items.append(_Item("num", i, i + 1, payload=Decimal(tok.text)))
        elif tok.text in lexicon.stopwords:
            items.append(_Item("stop", i, i + 1))
        else:
            items.append(_Item("unk", i, i + 1))
        i += 1
    return items


def _match_column(
    tokens: list[Token],
    i: int,
    limit: int,
    table: TableDocument,
    lexicon: Lexicon,
) -> tuple[int, int] | None:
    for j in range(limit, i, -1):
        key = normalize_key("".join(t.text for t in tokens[i:j]))
        meta = table.column_by_key(key)
        if meta is None and lexicon.group_column_stripping:
            for variant in _singular_variants(key):
                meta = table.column_by_key(variant)
                if meta is not None:
                    break
        if meta is not None:
            return j - i, meta.index
    return None


def _match_value(
    tokens: list[Token],
    i: int,
    limit: int,
    index: ValueIndex,
    bindings: Mapping[str, int],
) -> tuple[int, str] | None:
    for j in range(limit, i, -1):
        key = normalize_key("".join(t.text for t in tokens[i:j]))
        if key in bindings or index.lookup(key):
            return j - i, key
    return None


def _nearest(items: list[_Item], idx: int, step: int, skip_stops: bool = True) -> _Item | None:
    j = idx + step
    while 0 <= j < len(items):
        if not (skip_stops and items[j].kind == "stop"):
            return items[j]
        j += step
    return None


def _token_triple(tokens: list[Token], item: _Item) -> list[tuple[str, int, int]]:
    return [(t.text, t.start, t.end) for t in tokens[item.ti : item.tj]]


class _ParseRun:
    """One parse attempt; collects items, criteria, and warnings."""

    def __init__(
        self,
        utterance: str,
        table: TableDocument,
        index: ValueIndex,
        lexicon: Lexicon,
        bindings: Mapping[str, int],
    ):
        self.utterance = utterance
        self.table = table
        self.index = index
        self.lexicon = lexicon
        self.bindings = dict(bindings)
        self.tokens = tokenize(utterance)
        self.items = _scan(self.tokens, table, index, lexicon, self.bindings)
        self.criteria: list[_Criterion] = []
        self.warnings: list[tuple[str, int, int]] = []
        self.group_columns: list[int] = []
        self.target_column: int | None = None

    # -- helpers -------------------------------------------------------------

    def _warn_item(self, item: _Item) -> None:
        self.warnings.extend(_token_triple(self.tokens, item))

    def _unmatched(self) -> tuple[tuple[str, int, int], ...]:
        out: list[tuple[str, int, int]] = []
        for item in self.items:
            if item.kind == "unk":
                out.extend(_token_triple(self.tokens, item))
        return tuple(out)

    def _fail(self, reason: str, extra: list[tuple[str, int, int]] = ()) -> NotUnderstood:
        unmatched = list(self._unmatched())
        for triple in extra:
            if triple not in unmatched:
                unmatched.append(triple)
        unmatched.sort(key=lambda t: t[1])
        return NotUnderstood(Diagnostics(unmatched=tuple(unmatched), reason=reason))

    def _columns_of(self, kind_filter=None):
        for idx, item in enumerate(self.items):
            if item.kind == "col" and item.claimed is None:
                if kind_filter is None or self.table.column(item.payload).kind is kind_filter:
                    yield idx, item

    # -- claim phases ----------------------------------------------------------

    def claim_group_columns(self) -> None:
        strict = not self.lexicon.group_column_stripping
        for idx, item in enumerate(self.items):
            if item.kind != "group":
                continue
            nxt = _nearest(self.items, idx, +1, skip_stops=not strict)
            if nxt is not None and nxt.kind == "col" and nxt.claimed is None:
                nxt.claimed = "group"
                if nxt.payload not in self.group_columns:
                    self.group_columns.append(nxt.payload)
            else:
                self._warn_item(item)

    def claim_numeric_criteria(self) -> NotUnderstood | None:
        for idx, item in enumerate(self.items):
            if item.kind != "num":
                continue
            bound = self._bind_number(idx, item)
            if bound is None:
                triples = _token_triple(self.tokens, item)
                return self._fail(
                    "a number must name its numeric column explicitly", triples
                )
        return None

    def _bind_number(self, idx: int, item: _Item) -> _Criterion | None:
        def numeric_col(it: _Item | None) -> bool:
            return (
                it is not None
                and it.kind == "col"
                and it.claimed is None
                and self.table.column(it.payload).kind is ColumnKind.NUMERIC
            )

        left = _nearest(self.items, idx, -1)
        right = _nearest(self.items, idx, +1)
        op = "EQ"
        column_item = None
        if left is not None and left.kind == "cmp":
            op = left.payload
            left.claimed = "numeric"
            left_of_cmp = _nearest(self.items, self.items.index(left), -1)
            if numeric_col(left_of_cmp):
                column_item = left_of_cmp
            elif numeric_col(right):
                column_item = right
        elif numeric_col(left):
            column_item = left
        elif numeric_col(right):
            column_item = right
        if column_item is None:
            return None
        column_item.claimed = "numeric"
        item.claimed = "numeric"
        crit = _Criterion(
            min(item.ti, column_item.ti),
            NumCompare(column_item.payload, op, item.payload),
        )
        self.criteria.append(crit)
        return crit

    def reinterpret_cue_values(self) -> None:
        # A single-token cue adjoining a column that actually contains that
        # word is treated as an explicitly qualified value; this is the only
        # way to reach a cell whose text collides with the vocabulary.
        for idx, item in enumerate(self.items):
            if item.kind in ("col", "val", "num", "stop", "unk"):
                continue
            if item.claimed is not None or item.tj - item.ti != 1:
                continue
            word = self.tokens[item.ti].text
            cols = self.index.lookup(word)
            if not cols:
                continue
            for step in (-1, +1):
                near = _nearest(self.items, idx, step)
                if (
                    near is not None
                    and near.kind == "col"
                    and near.claimed is None
                    and near.payload in cols
                ):
                    item.kind = "val"
                    item.payload = normalize_key(word)
                    break

    def claim_target_column(self) -> None:
        cue = next((it for it in self.items if it.kind in ("most", "least")), None)
        if cue is None:
            return
        after = [(i, it) for i, it in self._columns_of() if it.ti > cue.ti]
        anywhere = list(self._columns_of())
        chosen = after[0][1] if after else (anywhere[0][1] if anywhere else None)
        if chosen is None:
            return  # only fatal if most/least wins kind resolution
        chosen.claimed = "target"
        self.target_column = chosen.payload

    def bind_values(self) -> NeedsClarification | None:
        for idx, item in enumerate(self.items):
            if item.kind != "val":
                continue
            key = item.payload
            column = self._value_column(idx, item, key)
            if isinstance(column, NeedsClarification):
                return column
            item.claimed = "value"
            self.criteria.append(_Criterion(item.ti, ValueMatch(column, key)))
        return None

    def _value_column(self, idx: int, item: _Item, key: str) -> int | NeedsClarification:
        if key in self.bindings:
            return self.bindings[key]
        cols = self.index.lookup(key)
        # An adjoining column name that actually contains the value is an
        # explicit qualifier and pre-empts clarification; a column that does
        # not contain it (e.g. "show the city of the easy courses") is left
        # alone to become a projection.
        for step in (-1, +1):
            near = _nearest(self.items, idx, step)
            if (
                near is not None
                and near.kind == "col"
                and near.claimed is None
                and near.payload in cols
            ):
                near.claimed = "value"
                return near.payload
        if len(cols) == 1:
            return next(iter(cols))
        candidates = tuple(
            (c, self.table.column(c).display_name, cols[c]) for c in sorted(cols)
        )
        return NeedsClarification(
            value=key,
            candidates=candidates,
            utterance=self.utterance,
            bindings=tuple(sorted(self.bindings.items())),
        )

    # -- assembly --------------------------------------------------------------

    def apply_negation(self) -> None:
        self.criteria.sort(key=lambda c: c.pos)
        for item in self.items:
            if item.kind != "not":
                continue
            nxt = next((c for c in self.criteria if c.pos > item.ti), None)
            if nxt is None:
                self._warn_item(item)
            else:
                nxt.predicate = Not(nxt.predicate)

    def build_predicate(self) -> Predicate:
        self.criteria.sort(key=lambda c: c.pos)
        group_of = list(range(len(self.criteria)))

        def find(i: int) -> int:
            while group_of[i] != i:
                i = group_of[i]
            return i

        for item in self.items:
            if item.kind != "or":
                continue
            left = max(
                (i for i, c in enumerate(self.criteria) if c.pos < item.ti),
                default=None,
            )
            right = next(
                (i for i, c in enumerate(self.criteria) if c.pos > item.ti), None
            )
            if left is None or right is None:
                self._warn_item(item)
            else:
                group_of[find(right)] = find(left)

        groups: dict[int, list[Predicate]] = {}
        order: list[int] = []
        for i, crit in enumerate(self.criteria):
            root = find(i)
            if root not in groups:
                groups[root] = []
                order.append(root)
            groups[root].append(crit.predicate)

        parts: list[Predicate] = []
        for root in order:
            members = groups[root]
            parts.append(members[0] if len(members) == 1 else Or(tuple(members)))
        if not parts:
            return TruePredicate()
        if len(parts) == 1:
            return parts[0]
        return And(tuple(parts))

    def resolve(self) -> ParseOutcome:
        if not self.tokens:
            return NotUnderstood(Diagnostics(reason="empty utterance"))

        self.claim_group_columns()
        failure = self.claim_numeric_criteria()
        if failure is not None:
            return failure
        self.reinterpret_cue_values()
        self.claim_target_column()
        clarification = self.bind_values()
        if clarification is not None:
            return clarification
        self.apply_negation()
        predicate = self.build_predicate()

        has = lambda kind: any(it.kind == kind for it in self.items)  # noqa: E731
        kind: IntentKind | None = None
        if has("count") and self.group_columns:
            kind = IntentKind.GROUP_COUNT
        elif has("count"):
            kind = IntentKind.COUNT
        elif has("most"):
            kind = IntentKind.MOST_FREQUENT
        elif has("least"):
            kind = IntentKind.LEAST_FREQUENT
        elif has("list") or self.criteria:
            kind = IntentKind.FILTER
        if kind is None:
            return self._fail("no intent could be resolved")
        if (
            kind in (IntentKind.MOST_FREQUENT, IntentKind.LEAST_FREQUENT)
            and self.target_column is None
        ):
            return self._fail("most/least needs a column to rank")

        if kind is not IntentKind.GROUP_COUNT:
            # Grouping lost the kind race (e.g. a group cue without a count
            # cue); release the claimed columns so they can project instead.
            for item in self.items:
                if item.kind == "col" and item.claimed == "group":
                    item.claimed = None

        projection: tuple[int, ...] | None = None
        if kind is IntentKind.FILTER:
            cols = []
            for _, item in self._columns_of():
                item.claimed = "projection"
                if item.payload not in cols:
                    cols.append(item.payload)
            projection = tuple(cols) or None

        # Leftover bare columns and unmatched words are dropped with a
        # warning, but only when something meaningful was understood.
        for item in self.items:
            if item.kind == "col" and item.claimed is None:
                self._warn_item(item)
            elif item.kind == "unk":
                self._warn_item(item)
            elif item.kind == "cmp" and item.claimed is None:
                self._warn_item(item)

        elements = (
            len(self.criteria)
            + len(self.group_columns if kind is IntentKind.GROUP_COUNT else ())
            + (1 if self.target_column is not None else 0)
            + len(projection or ())
        )
        if elements == 0 and self._unmatched():
            return self._fail("no recognizable criteria")

        intent = QueryIntent(
            kind=kind,
            predicate=predicate,
            projection=projection,
            target_column=self.target_column if kind in (IntentKind.MOST_FREQUENT, IntentKind.LEAST_FREQUENT) else None,
            group_columns=tuple(self.group_columns) if kind is IntentKind.GROUP_COUNT else (),
        )
        intent = canonicalize(intent)
        intent.validate()
        self.warnings.sort(key=lambda t: t[1])
        return Parsed(intent, warnings=tuple(self.warnings))


def parse(
    utterance: str,
    table: TableDocument,
    index: ValueIndex,
    lexicon: Lexicon | None = None,
    bindings: Mapping[str, int] | None = None,
) -> ParseOutcome:
    """Parse an utterance against a table; pure and deterministic.

    `bindings` pins normalized values to column indices, which is how a
    clarification answer is replayed: the same utterance is parsed again
    with the ambiguous value bound.
    """
    run = _ParseRun(utterance, table, index, lexicon or Lexicon.default(), bindings or {})
    return run.resolve()


def parse_numeric_criterion(
    text: str,
    table: TableDocument,
    lexicon: Lexicon | None = None,
) -> NumCompare | None:
    """Extract the single numeric criterion from a token span, if any.

    Returns None when the span's number has no adjacent, explicitly named
    numeric column (bare numbers never infer their column).
    """
    run = _ParseRun(text, table, _EMPTY_INDEX, lexicon or Lexicon.default(), {})
    for idx, item in enumerate(run.items):
        if item.kind == "num":
            crit = run._bind_number(idx, item)
            if crit is not None and isinstance(crit.predicate, NumCompare):
                return crit.predicate
    return None


_EMPTY_INDEX = ValueIndex({})
