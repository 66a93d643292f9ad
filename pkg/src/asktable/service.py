"""HTTP facade: table upload, sessions, querying, clarification, row fetch.

Tables live in an in-memory LRU registry (no database); sessions are
per-table dialog state with an idle expiry. All response bodies are
serialized through wire.dump_envelope or plain JSON with the same encoder,
so CLI output and service output match byte for byte.
"""

from __future__ import annotations

import itertools
import threading
import time
from collections import OrderedDict
from dataclasses import dataclass, field
from pathlib import Path

from fastapi import FastAPI, Request, Response
from fastapi.staticfiles import StaticFiles

from .lexicon import Lexicon, normalize_key
from .session import (
    InvalidChoiceError,
    NoPendingClarificationError,
    Session,
)
from .table import (
    TableDocument,
    TableError,
    ValueIndex,
    build_value_index,
    load_table,
)
from .wire import build_envelope, cell_to_json, dump_envelope, envelope_error

__all__ = ["ServiceConfig", "create_app"]

DEFAULT_TABLE_CAP = 16
DEFAULT_SESSION_TIMEOUT = 30 * 60.0  # seconds


@dataclass
class ServiceConfig:
    table_cap: int = DEFAULT_TABLE_CAP
    session_timeout: float = DEFAULT_SESSION_TIMEOUT
    lexicon: Lexicon = field(default_factory=Lexicon.default)
    static_dir: Path | None = None
    preload: list[Path] = field(default_factory=list)


@dataclass
class _TableEntry:
    table: TableDocument
    index: ValueIndex


@dataclass
class _SessionEntry:
    session: Session
    table_id: str
    lock: threading.Lock
    last_used: float


class _Registry:
    """Thread-safe table LRU plus session map with idle expiry."""

    def __init__(self, config: ServiceConfig):
        self.config = config
        self._lock = threading.Lock()
        self._tables: OrderedDict[str, _TableEntry] = OrderedDict()
        self._sessions: dict[str, _SessionEntry] = {}
        self._table_ids = itertools.count(1)
        self._session_ids = itertools.count(1)

    def add_table(self, table: TableDocument) -> tuple[str, _TableEntry]:
        entry = _TableEntry(table, build_value_index(table))
        with self._lock:
            table_id = f"t{next(self._table_ids)}"
            self._tables[table_id] = entry
            while len(self._tables) > self.config.table_cap:
                self._tables.popitem(last=False)
            return table_id, entry

    def get_table(self, table_id: str) -> _TableEntry | None:
        with self._lock:
            entry = self._tables.get(table_id)
            if entry is not None:
                self._tables.move_to_end(table_id)
            return entry

    def add_session(self, table_id: str, entry: _TableEntry) -> str:
        session = Session(entry.table, entry.index, self.config.lexicon)
        with self._lock:
            self._expire_sessions()
            session_id = f"s{next(self._session_ids)}"
            self._sessions[session_id] = _SessionEntry(
                session, table_id, threading.Lock(), time.monotonic()
            )
            return session_id

    def get_session(self, session_id: str) -> _SessionEntry | None:
        with self._lock:
            entry = self._sessions.get(session_id)
            if entry is None:
                return None
            if time.monotonic() - entry.last_used > self.config.session_timeout:
                del self._sessions[session_id]
                return None
            entry.last_used = time.monotonic()
            return entry

    def _expire_sessions(self) -> None:
        now = time.monotonic()
        stale = [
            sid
            for sid, entry in self._sessions.items()
            if now - entry.last_used > self.config.session_timeout
        ]
        for sid in stale:
            del self._sessions[sid]


def _json_response(envelope: dict, status_code: int = 200) -> Response:
    return Response(
        content=dump_envelope(envelope),
        status_code=status_code,
        media_type="application/json",
    )


def _error(status_code: int, code: str, message: str, **extra) -> Response:
    return _json_response(envelope_error(code, message, **extra), status_code)


def create_app(config: ServiceConfig | None = None) -> FastAPI:
    config = config or ServiceConfig()
    app = FastAPI(title="asktable", version="0.1.0")
    registry = _Registry(config)
    app.state.registry = registry

    for path in config.preload:
        table = load_table(path.read_bytes(), source_name=path.name)
        registry.add_table(table)

    @app.post("/tables")
    async def upload_table(request: Request) -> Response:
        body = await request.body()
        name = request.query_params.get("name", "upload")
        delimiter = request.query_params.get("delimiter", ",")
        try:
            table = load_table(body, delimiter=delimiter, source_name=name)
        except TableError as exc:
            extra = {}
            if hasattr(exc, "row_id"):
                extra["row"] = exc.row_id
            return _error(400, type(exc).__name__.removesuffix("Error"), str(exc), **extra)
        table_id, entry = registry.add_table(table)
        return _json_response(
            {
                "table_id": table_id,
                "name": name,
                "rows": table.n_rows,
                "columns": [
                    {"name": c.display_name, "kind": c.kind.value}
                    for c in table.columns
                ],
            },
            status_code=201,
        )

    @app.post("/tables/{table_id}/sessions")
    async def create_session(table_id: str) -> Response:
        entry = registry.get_table(table_id)
        if entry is None:
            return _error(404, "UnknownTable", f"no table {table_id!r}")
        session_id = registry.add_session(table_id, entry)
        return _json_response({"session_id": session_id}, status_code=201)

    async def _json_body(request: Request) -> dict | None:
        try:
            body = await request.json()
        except Exception:
            return None
        return body if isinstance(body, dict) else None

    @app.post("/sessions/{session_id}/query")
    async def query(session_id: str, request: Request) -> Response:
        entry = registry.get_session(session_id)
        if entry is None:
            return _error(404, "UnknownSession", f"no session {session_id!r}")
        body = await _json_body(request)
        if body is None:
            return _error(400, "BadRequest", "body must be a JSON object")
        utterance = body.get("utterance")
        if not isinstance(utterance, str):
            return _error(400, "BadRequest", "body must contain an 'utterance' string")
        with entry.lock:
            submitted = entry.session.submit(utterance)
            return _json_response(build_envelope(submitted, entry.session.table))

    @app.post("/sessions/{session_id}/clarify")
    async def clarify(session_id: str, request: Request) -> Response:
        entry = registry.get_session(session_id)
        if entry is None:
            return _error(404, "UnknownSession", f"no session {session_id!r}")
        body = await _json_body(request)
        if body is None:
            return _error(400, "BadRequest", "body must be a JSON object")
        request_id = body.get("request_id")
        column = body.get("column")
        with entry.lock:
            pending = entry.session.pending
            if pending is None or pending.request_id != request_id:
                return _error(
                    409,
                    "NoPendingClarification",
                    str(NoPendingClarificationError(request_id)),
                )
            index = _resolve_column(entry.session.table, column)
            if index is None:
                return _error(400, "InvalidChoice", f"unknown column {column!r}")
            try:
                submitted = entry.session.clarify(request_id, index)
            except InvalidChoiceError as exc:
                return _error(400, "InvalidChoice", str(exc))
            return _json_response(build_envelope(submitted, entry.session.table))

    @app.get("/tables/{table_id}/rows")
    async def rows(table_id: str, ids: str = "") -> Response:
        entry = registry.get_table(table_id)
        if entry is None:
            return _error(404, "UnknownTable", f"no table {table_id!r}")
        table = entry.table
        row_ids: list[int] = []
        for part in ids.split(","):
            part = part.strip()
            if not part:
                continue
            try:
                rid = int(part)
            except ValueError:
                return _error(400, "BadRowId", f"row id {part!r} is not an integer")
            if not 0 <= rid < table.n_rows:
                return _error(400, "BadRowId", f"row id {rid} out of range")
            row_ids.append(rid)
        return _json_response(
            {
                "columns": [c.display_name for c in table.columns],
                "rows": [
                    {
                        "id": rid,
                        "cells": [cell_to_json(c) for c in table.rows[rid]],
                    }
                    for rid in row_ids
                ],
            }
        )

    if config.static_dir is not None and config.static_dir.is_dir():
        app.mount("/ui", StaticFiles(directory=config.static_dir, html=True), name="ui")

    return app


def _resolve_column(table: TableDocument, column) -> int | None:
    """Accept a column as an integer index or a display name."""
    if isinstance(column, bool):
        return None
    if isinstance(column, int):
        return column if 0 <= column < table.n_columns else None
    if isinstance(column, str):
        for meta in table.columns:
            if meta.display_name == column:
                return meta.index
        meta = table.column_by_key(normalize_key(column))
        return meta.index if meta else None
    return None
