"""JSON wire format shared by the HTTP service and the CLI.

Both transports serialize through `dump_envelope`, so a query answered over
HTTP and the same query answered by `sir --format json` produce identical
bytes. Field names and order are fixed; the JSON Schema shipped in
docs/wire_schema.json documents the contract.
"""

from __future__ import annotations

import json
from decimal import Decimal
from typing import Any

from .engine import GroupEntry, GroupTable, QueryResult, RowSet, Scalar, ValueAnswer
from .intent import Diagnostics, NotUnderstood, Parsed, render_intent
from .session import ClarificationRequest, SubmitResult
from .table import CellValue, TableDocument

__all__ = [
    "API_VERSION",
    "build_envelope",
    "dump_envelope",
    "envelope_error",
    "result_from_payload",
    "result_to_payload",
]

API_VERSION = "1.0.0"


def cell_to_json(cell: CellValue) -> Any:
    if cell is None:
        return None
    if isinstance(cell, Decimal):
        if cell == cell.to_integral_value():
            return int(cell)
        return float(cell)
    return cell


def cell_from_json(value: Any) -> CellValue:
    if value is None:
        return None
    if isinstance(value, bool):
        raise ValueError("boolean is not a cell value")
    if isinstance(value, (int, float)):
        return Decimal(str(value))
    return value


def result_to_payload(result: QueryResult, table: TableDocument) -> dict:
    name = lambda i: table.column(i).display_name  # noqa: E731
    if isinstance(result, RowSet):
        return {
            "kind": "rows",
            "columns": [name(i) for i in result.columns],
            "rows": [
                {
                    "id": rid,
                    "cells": [cell_to_json(table.rows[rid][i]) for i in result.columns],
                }
                for rid in result.row_ids
            ],
            "provenance": list(result.row_ids),
        }
    if isinstance(result, Scalar):
        return {
            "kind": "count",
            "count": result.count,
            "provenance": list(result.provenance),
        }
    if isinstance(result, ValueAnswer):
        return {
            "kind": "value",
            "column": name(result.column),
            "value": cell_to_json(result.value),
            "count": result.count,
            "provenance": list(result.provenance),
        }
    if isinstance(result, GroupTable):
        return {
            "kind": "groups",
            "group_columns": [name(i) for i in result.group_columns],
            "groups": [
                {
                    "key": [cell_to_json(c) for c in g.key],
                    "count": g.count,
                    "provenance": list(g.provenance),
                }
                for g in result.groups
            ],
            "dropped_rows": list(result.dropped_rows),
        }
    raise TypeError(f"unknown result {result!r}")


def result_from_payload(payload: dict, table: TableDocument) -> QueryResult:
    """Rebuild a QueryResult from its wire payload (round-trip inverse)."""
    index_of = {c.display_name: c.index for c in table.columns}
    kind = payload["kind"]
    if kind == "rows":
        return RowSet(
            tuple(r["id"] for r in payload["rows"]),
            tuple(index_of[n] for n in payload["columns"]),
        )
    if kind == "count":
        return Scalar(payload["count"], tuple(payload["provenance"]))
    if kind == "value":
        return ValueAnswer(
            index_of[payload["column"]],
            cell_from_json(payload["value"]),
            payload["count"],
            tuple(payload["provenance"]),
        )
    if kind == "groups":
        return GroupTable(
            tuple(index_of[n] for n in payload["group_columns"]),
            tuple(
                GroupEntry(
                    tuple(cell_from_json(c) for c in g["key"]),
                    g["count"],
                    tuple(g["provenance"]),
                )
                for g in payload["groups"]
            ),
            tuple(payload["dropped_rows"]),
        )
    raise ValueError(f"unknown result kind {kind!r}")


def _tokens_to_json(triples) -> list[dict]:
    return [{"token": t, "start": s, "end": e} for t, s, e in triples]


def envelope_ok(parsed: Parsed, result: QueryResult, table: TableDocument) -> dict:
    return {
        "status": "ok",
        "api_version": API_VERSION,
        "payload": {
            "ir": render_intent(parsed.intent, table),
            "result": result_to_payload(result, table),
            "dropped_tokens": _tokens_to_json(parsed.warnings),
        },
    }


def envelope_clarify(request: ClarificationRequest) -> dict:
    return {
        "status": "clarify",
        "api_version": API_VERSION,
        "payload": {
            "request_id": request.request_id,
            "value": request.ambiguous_value,
            "candidates": [
                {"column": name, "index": idx, "count": count}
                for idx, name, count in request.candidates
            ],
        },
    }


def envelope_not_understood(diagnostics: Diagnostics) -> dict:
    return {
        "status": "not_understood",
        "api_version": API_VERSION,
        "payload": {
            "unmatched": _tokens_to_json(diagnostics.unmatched),
            "reason": diagnostics.reason,
        },
    }


def envelope_error(code: str, message: str, **extra: Any) -> dict:
    payload = {"code": code, "message": message}
    payload.update(extra)
    return {"status": "error", "api_version": API_VERSION, "payload": payload}


def build_envelope(submitted: SubmitResult, table: TableDocument) -> dict:
    """Convert a session submit/clarify outcome to its wire envelope."""
    if submitted.error is not None:
        return envelope_error("EmptySelection", submitted.error)
    if submitted.result is not None:
        assert isinstance(submitted.outcome, Parsed)
        return envelope_ok(submitted.outcome, submitted.result, table)
    if submitted.request is not None:
        return envelope_clarify(submitted.request)
    assert isinstance(submitted.outcome, NotUnderstood)
    return envelope_not_understood(submitted.outcome.diagnostics)


def dump_envelope(envelope: dict) -> str:
    """Serialize an envelope to its canonical compact JSON text."""
    return json.dumps(
        envelope, ensure_ascii=False, separators=(",", ":"), allow_nan=False
    )
