from __future__ import annotations

import json
from decimal import Decimal
from pathlib import Path

import pytest

from asktable import (
    GroupTable,
    IntentKind,
    QueryIntent,
    Scalar,
    Session,
    TruePredicate,
    ValueAnswer,
    ValueMatch,
    execute,
)
from asktable.engine import GroupEntry
from asktable.wire import (
    API_VERSION,
    build_envelope,
    cell_from_json,
    cell_to_json,
    dump_envelope,
    result_from_payload,
    result_to_payload,
)

GOLDEN_DIR = Path(__file__).resolve().parent / "golden"

GOLDEN_UTTERANCES = {
    "ok_count": "how many easy courses",
    "ok_rows": "show the city of the easy courses",
    "ok_value": "most popular terrain",
    "ok_groups": "how many courses are of each difficulty",
    "clarify": "marion courses",
    "not_understood": "zzz qqq",
    "error_empty_selection": "most popular terrain of the courses with 99 holes",
}


def col(table, name):
    return next(c.index for c in table.columns if c.display_name == name)


@pytest.mark.parametrize("name", sorted(GOLDEN_UTTERANCES))
def test_envelope_matches_golden(name, mini6):
    session = Session(mini6)
    envelope = build_envelope(session.submit(GOLDEN_UTTERANCES[name]), mini6)
    expected = (GOLDEN_DIR / f"{name}.json").read_text().rstrip("\n")
    assert dump_envelope(envelope) == expected


@pytest.mark.parametrize("name", sorted(GOLDEN_UTTERANCES))
def test_golden_files_are_valid_json(name):
    envelope = json.loads((GOLDEN_DIR / f"{name}.json").read_text())
    assert envelope["api_version"] == API_VERSION
    assert envelope["status"] in ("ok", "clarify", "not_understood", "error")
    assert "payload" in envelope


@pytest.mark.parametrize("name", sorted(GOLDEN_UTTERANCES))
def test_golden_files_validate_against_shipped_schema(name):
    jsonschema = pytest.importorskip("jsonschema")
    schema = json.loads(
        (Path(__file__).resolve().parent.parent / "docs" / "wire_schema.json").read_text()
    )
    envelope = json.loads((GOLDEN_DIR / f"{name}.json").read_text())
    jsonschema.validate(envelope, schema)


def _roundtrip(result, table):
    payload = result_to_payload(result, table)
    json_text = json.dumps(payload)
    return result_from_payload(json.loads(json_text), table)


def test_rowset_roundtrip(mini6):
    result = execute(
        QueryIntent(IntentKind.FILTER, ValueMatch(col(mini6, "Difficulty"), "easy")),
        mini6,
    )
    assert _roundtrip(result, mini6) == result


def test_scalar_roundtrip(mini6):
    result = Scalar(3, (1, 2, 4))
    assert _roundtrip(result, mini6) == result


def test_value_answer_roundtrip(mini6):
    result = ValueAnswer(col(mini6, "Terrain"), "Varied", 2, (0, 1))
    assert _roundtrip(result, mini6) == result
    numeric = ValueAnswer(col(mini6, "Holes"), Decimal("18"), 5, (0, 1, 3, 4, 5))
    assert _roundtrip(numeric, mini6) == numeric


def test_group_table_roundtrip(mini6):
    result = execute(
        QueryIntent(
            IntentKind.GROUP_COUNT,
            TruePredicate(),
            group_columns=(col(mini6, "Difficulty"),),
        ),
        mini6,
    )
    again = _roundtrip(result, mini6)
    assert isinstance(again, GroupTable)
    assert again == result


def test_group_entry_with_numeric_key_roundtrip(mini6):
    result = GroupTable(
        (col(mini6, "Holes"),),
        (GroupEntry((Decimal("18"),), 5, (0, 1, 3, 4, 5)), GroupEntry((Decimal("9"),), 1, (2,))),
        (),
    )
    assert _roundtrip(result, mini6) == result


def test_cell_json_mapping():
    assert cell_to_json(None) is None
    assert cell_to_json("x") == "x"
    assert cell_to_json(Decimal("18")) == 18
    assert cell_to_json(Decimal("1.5")) == 1.5
    assert cell_from_json(None) is None
    assert cell_from_json(18) == Decimal("18")
    assert cell_from_json(1.5) == Decimal("1.5")
    assert cell_from_json("x") == "x"


def test_dump_is_compact_and_stable():
    envelope = {"status": "ok", "api_version": API_VERSION, "payload": {"a": 1}}
    assert dump_envelope(envelope) == (
        '{"status":"ok","api_version":"1.0.0","payload":{"a":1}}'
    )


def test_ok_envelope_always_carries_ir(mini6):
    session = Session(mini6)
    envelope = build_envelope(session.submit("how many easy courses"), mini6)
    assert envelope["payload"]["ir"] == '(count (= "Difficulty" "easy"))'


def test_rowset_payload_cells_match_table(mini6):
    result = execute(
        QueryIntent(IntentKind.FILTER, ValueMatch(col(mini6, "Difficulty"), "easy")),
        mini6,
    )
    payload = result_to_payload(result, mini6)
    first = payload["rows"][0]
    assert first["id"] == 1
    assert first["cells"][0] == "Greenfield"
    assert first["cells"][col(mini6, "Holes")] == 18
