from __future__ import annotations

import json
import subprocess
import sys

import pytest
from fastapi.testclient import TestClient

from asktable.cli import main
from asktable.service import create_app
from conftest import DATA_DIR, MINI6_CSV


def run_cli(capsys, *args):
    code = main(list(args))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_oneshot_count(mini6_path, capsys):
    code, out, _ = run_cli(capsys, "-t", str(mini6_path), "how many easy courses")
    assert code == 0
    assert out.strip() == "3"


def test_oneshot_query_flag(mini6_path, capsys):
    code, out, _ = run_cli(capsys, "-t", str(mini6_path), "-q", "how many easy courses")
    assert code == 0
    assert out.strip() == "3"


def test_oneshot_clarify_exit_code(mini6_path, capsys):
    code, out, _ = run_cli(capsys, "-t", str(mini6_path), "marion courses")
    assert code == 3
    assert "City" in out and "County" in out


def test_oneshot_not_understood_exit_code(mini6_path, capsys):
    code, out, _ = run_cli(capsys, "-t", str(mini6_path), "zzz")
    assert code == 2
    assert "not understood" in out


def test_missing_table_file_exit_code(tmp_path, capsys):
    code, _, err = run_cli(capsys, "-t", str(tmp_path / "nope.csv"), "anything")
    assert code == 1
    assert "error" in err


def test_bad_table_exit_code(tmp_path, capsys):
    bad = tmp_path / "bad.csv"
    bad.write_text("a,b\n1\n")
    code, _, err = run_cli(capsys, "-t", str(bad), "anything")
    assert code == 1


def test_table_flag_required(capsys):
    code, _, err = run_cli(capsys, "how many easy courses")
    assert code == 1
    assert "--table" in err


def test_format_ir(mini6_path, capsys):
    code, out, _ = run_cli(
        capsys, "-t", str(mini6_path), "how many easy courses", "--format", "ir"
    )
    assert code == 0
    assert out.strip() == '(count (= "Difficulty" "easy"))'


def test_emit_ir_alias(mini6_path, capsys):
    code, out, _ = run_cli(
        capsys, "-t", str(mini6_path), "how many easy courses", "--emit-ir"
    )
    assert out.strip() == '(count (= "Difficulty" "easy"))'


def test_rowset_text_rendering(mini6_path, capsys):
    code, out, _ = run_cli(
        capsys, "-t", str(mini6_path), "show the city of the easy courses"
    )
    assert code == 0
    assert "Greenfield" in out
    assert "(3 rows)" in out


def test_value_text_rendering(mini6_path, capsys):
    code, out, _ = run_cli(capsys, "-t", str(mini6_path), "most popular terrain")
    assert code == 0
    assert out.strip().endswith("Varied (2)")


def test_group_text_rendering(mini6_path, capsys):
    code, out, _ = run_cli(
        capsys, "-t", str(mini6_path), "how many courses are of each difficulty"
    )
    lines = out.strip().splitlines()
    assert lines[0].split() == ["Difficulty", "count"]
    assert any(line.split() == ["Easy", "3"] for line in lines)


def test_strict_paper_flag(mini6_path, capsys):
    code, out, _ = run_cli(
        capsys, "-t", str(mini6_path), "Most popular terrain", "--strict-paper"
    )
    assert code == 0
    code, _, _ = run_cli(
        capsys, "-t", str(mini6_path), "Most used terrain", "--strict-paper"
    )
    assert code == 2


def test_lexicon_override(mini6_path, tmp_path, capsys):
    from asktable.lexicon import Lexicon

    config = Lexicon.default().to_config().replace(
        "most_cues: ", "most_cues: most used, "
    )
    path = tmp_path / "custom.lex"
    path.write_text(config)
    code, out, _ = run_cli(
        capsys, "-t", str(mini6_path), "Most used terrain", "--lexicon", str(path)
    )
    assert code == 0
    assert out.strip().endswith("Varied (2)")


def test_json_output_matches_service_bytes(mini6_path, capsys):
    utterance = "how many easy courses"
    code, out, _ = run_cli(
        capsys, "-t", str(mini6_path), utterance, "--format", "json"
    )
    assert code == 0

    client = TestClient(create_app())
    table_id = client.post("/tables", content=MINI6_CSV.encode()).json()["table_id"]
    sid = client.post(f"/tables/{table_id}/sessions").json()["session_id"]
    response = client.post(f"/sessions/{sid}/query", json={"utterance": utterance})
    assert out.rstrip("\n").encode() == response.content


def test_eval_mode(capsys):
    code, out, _ = run_cli(capsys, "--eval", str(DATA_DIR / "tasks.corpus"))
    assert code == 0
    assert "10/10" in out


def test_eval_mode_json(capsys):
    code, out, _ = run_cli(
        capsys, "--eval", str(DATA_DIR / "tasks.corpus"), "--format", "json"
    )
    assert code == 0
    report = json.loads(out)
    assert report["tasks_passed"] == 10


def test_eval_bad_corpus(tmp_path, capsys):
    bad = tmp_path / "bad.corpus"
    bad.write_text("task t1\nmystery line\n")
    code, _, err = run_cli(capsys, "--eval", str(bad))
    assert code == 1
    assert "error" in err


# -- REPL (driven through a real subprocess) ------------------------------------


def repl(mini6_path, stdin: str) -> subprocess.CompletedProcess:
    return subprocess.run(
        [sys.executable, "-m", "asktable.cli", "-t", str(mini6_path)],
        input=stdin,
        capture_output=True,
        text=True,
        timeout=60,
    )


def test_repl_answer_and_quit(mini6_path):
    proc = repl(mini6_path, "Most popular terrain\n\\quit\n")
    assert proc.returncode == 0
    assert "Varied (2)" in proc.stdout


def test_repl_not_understood_reprompts(mini6_path):
    proc = repl(mini6_path, "Most used terrain\nMost popular terrain\n\\quit\n")
    assert proc.returncode == 0
    assert "not understood" in proc.stdout
    assert "Varied (2)" in proc.stdout


def test_repl_clarification_menu(mini6_path):
    proc = repl(mini6_path, "marion courses\n2\n\\quit\n")
    assert proc.returncode == 0
    assert "which column" in proc.stdout
    assert "County" in proc.stdout
    assert "(3 rows)" in proc.stdout


def test_repl_ir_toggle(mini6_path):
    proc = repl(mini6_path, "\\ir\nhow many easy courses\n\\quit\n")
    assert proc.returncode == 0
    assert 'understood as (count (= "Difficulty" "easy"))' in proc.stdout


def test_repl_eof_exits_cleanly(mini6_path):
    proc = repl(mini6_path, "")
    assert proc.returncode == 0


@pytest.mark.parametrize(
    "args,expected",
    [
        (("how many easy courses",), 0),
        (("marion courses",), 3),
        (("zzz",), 2),
    ],
)
def test_exit_code_contract(mini6_path, capsys, args, expected):
    code, _, _ = run_cli(capsys, "-t", str(mini6_path), *args)
    assert code == expected
