"""Dialog sessions: hold a pending ambiguous parse until the user resolves it.

A session is a small state machine over one table: Idle, or awaiting the
answer to exactly one clarification question. Submitting a new utterance
while a question is pending abandons the question (users simply rephrase).
Resolving a question replays the original utterance with the ambiguous
value pinned to the chosen column, so the result is identical to having
named the column explicitly.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass

from .engine import EmptySelectionError, QueryResult, execute
from .intent import NeedsClarification, NotUnderstood, Parsed, ParseOutcome
from .lexicon import Lexicon
from .parser import parse
from .table import TableDocument, ValueIndex, build_value_index

__all__ = [
    "ClarificationRequest",
    "InvalidChoiceError",
    "NoPendingClarificationError",
    "Session",
    "SessionError",
    "SubmitResult",
    "open_session",
]

log = logging.getLogger(__name__)

_session_counter = itertools.count(1)


class SessionError(Exception):
    pass


class NoPendingClarificationError(SessionError):
    def __init__(self, request_id: str | None = None):
        detail = f" (got {request_id!r})" if request_id else ""
        super().__init__("no clarification is pending" + detail)


class InvalidChoiceError(SessionError):
    def __init__(self, column: int, candidates: tuple[int, ...]):
        super().__init__(
            f"column {column} is not among the candidates {sorted(candidates)}"
        )
        self.column = column


@dataclass(frozen=True)
class ClarificationRequest:
    """A pending question: which column did an ambiguous value refer to?"""

    request_id: str
    ambiguous_value: str
    candidates: tuple[tuple[int, str, int], ...]  # (index, display name, count)
    pending: NeedsClarification

    def candidate_indices(self) -> tuple[int, ...]:
        return tuple(c[0] for c in self.candidates)


@dataclass(frozen=True)
class SubmitResult:
    """Outcome of a submit or clarify call.

    `result` is set when the utterance parsed and executed; `request` when a
    clarification is (still) needed; `error` when execution failed in a
    reportable way (e.g. nothing to rank for most-frequent).
    """

    outcome: ParseOutcome
    result: QueryResult | None = None
    request: ClarificationRequest | None = None
    error: str | None = None


class Session:
    """Serialized dialog state over one shared, immutable table."""

    def __init__(
        self,
        table: TableDocument,
        index: ValueIndex | None = None,
        lexicon: Lexicon | None = None,
        session_id: str | None = None,
    ):
        self.session_id = session_id or f"s{next(_session_counter)}"
        self.table = table
        self.index = index if index is not None else build_value_index(table)
        self.lexicon = lexicon or Lexicon.default()
        self.pending: ClarificationRequest | None = None
        self.history: list[tuple[str, ParseOutcome]] = []
        self._request_counter = itertools.count(1)

    @property
    def awaiting_clarification(self) -> bool:
        return self.pending is not None

    def submit(self, utterance: str) -> SubmitResult:
        """Parse an utterance; execute immediately when unambiguous."""
        if self.pending is not None:
            log.info(
                "session %s: abandoning pending clarification %s",
                self.session_id,
                self.pending.request_id,
            )
            self.pending = None
        outcome = parse(utterance, self.table, self.index, self.lexicon)
        return self._settle(utterance, outcome)

    def clarify(self, request_id: str, column: int) -> SubmitResult:
        """Answer the pending question by choosing one candidate column."""
        if self.pending is None or self.pending.request_id != request_id:
            raise NoPendingClarificationError(request_id)
        if column not in self.pending.candidate_indices():
            raise InvalidChoiceError(column, self.pending.candidate_indices())
        pending = self.pending.pending
        self.pending = None
        bindings = dict(pending.bindings)
        bindings[pending.value] = column
        outcome = parse(
            pending.utterance, self.table, self.index, self.lexicon, bindings
        )
        return self._settle(pending.utterance, outcome)

    def _settle(self, utterance: str, outcome: ParseOutcome) -> SubmitResult:
        self.history.append((utterance, outcome))
        if isinstance(outcome, Parsed):
            try:
                result = execute(outcome.intent, self.table)
            except EmptySelectionError as exc:
                return SubmitResult(outcome, error=str(exc))
            return SubmitResult(outcome, result=result)
        if isinstance(outcome, NeedsClarification):
            # Ids are deterministic per session so identical dialogs produce
            # identical wire payloads regardless of transport.
            request = ClarificationRequest(
                request_id=f"r{next(self._request_counter)}",
                ambiguous_value=outcome.value,
                candidates=outcome.candidates,
                pending=outcome,
            )
            self.pending = request
            return SubmitResult(outcome, request=request)
        assert isinstance(outcome, NotUnderstood)
        return SubmitResult(outcome)


def open_session(
    table: TableDocument,
    index: ValueIndex | None = None,
    lexicon: Lexicon | None = None,
) -> Session:
    """Create a fresh Idle session over a loaded table."""
    return Session(table, index, lexicon)
