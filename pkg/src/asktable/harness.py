"""Task corpus runner: machine-checkable reproduction of the 10-task protocol.

A corpus is a plain-text file of task blocks. Each task carries one or more
phrasings (tagged by style), a structural `check` query for the independent
oracle, and a frozen `gold` answer originally produced by that oracle::

    table golf127.csv

    task t1
    category Easy
    full Show me all of the easy courses in Hancock with a varied terrain
    terse hancock easy varied
    para list the courses in hancock county with easy difficulty and varied terrain
    check filter Difficulty="Easy" & County="Hancock" & Terrain="Varied"
    gold rows 3 41 77
    end

The runner pushes every phrasing through the full parse/execute pipeline
and compares results against gold (row sets order-insensitively, counts
exactly). A task passes when its first listed phrasing (the canonical one)
passes. `sync_check` re-derives every gold line with the oracle so the
frozen answers can never drift from the scan they came from.
"""

from __future__ import annotations

import shlex
import time
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from . import oracle
from .engine import GroupTable, RowSet, Scalar, ValueAnswer
from .lexicon import Lexicon, normalize_key
from .session import Session, SubmitResult
from .table import TableDocument, load_table
from .wire import cell_to_json

__all__ = [
    "CorpusError",
    "EvalReport",
    "GoldSpec",
    "TaskReport",
    "TaskSpec",
    "gold_line",
    "load_corpus",
    "run_eval",
    "sync_check",
]

CATEGORIES = ("Easy", "Intermediate", "Complex")
STYLES = ("full", "terse", "para", "say")


class CorpusError(ValueError):
    pass


@dataclass(frozen=True)
class GoldSpec:
    kind: str  # rows | count | value | groups | clarify
    rows: frozenset[int] = frozenset()
    count: int = 0
    value: str = ""
    groups: tuple[tuple[tuple[str, ...], int], ...] = ()
    columns: frozenset[str] = frozenset()

    def group_map(self) -> dict[tuple[str, ...], int]:
        return {key: n for key, n in self.groups}


@dataclass(frozen=True)
class TaskSpec:
    task_id: str
    category: str
    phrasings: tuple[tuple[str, str], ...]  # (style, utterance)
    check: str  # oracle query text
    gold: GoldSpec
    dataset: str


@dataclass
class PhrasingResult:
    style: str
    utterance: str
    passed: bool
    detail: str = ""


@dataclass
class TaskReport:
    task_id: str
    category: str
    phrasings: list[PhrasingResult]
    passed: bool  # canonical (first) phrasing passed
    first_pass: int | None  # 1-based index of the first passing phrasing

    @property
    def utterances_needed(self) -> int:
        return self.first_pass if self.first_pass is not None else len(self.phrasings)


@dataclass
class EvalReport:
    tasks: list[TaskReport] = field(default_factory=list)
    elapsed_seconds: float = 0.0

    @property
    def tasks_passed(self) -> int:
        return sum(1 for t in self.tasks if t.passed)

    @property
    def phrasings_passed(self) -> int:
        return sum(1 for t in self.tasks for p in t.phrasings if p.passed)

    @property
    def phrasings_total(self) -> int:
        return sum(len(t.phrasings) for t in self.tasks)

    def category_accuracy(self) -> dict[str, tuple[int, int]]:
        """Per category: (passing phrasings, attempted phrasings)."""
        out: dict[str, tuple[int, int]] = {}
        for task in self.tasks:
            passes, attempts = out.get(task.category, (0, 0))
            passes += sum(1 for p in task.phrasings if p.passed)
            attempts += len(task.phrasings)
            out[task.category] = (passes, attempts)
        return out

    def mean_utterances_needed(self) -> float:
        if not self.tasks:
            return 0.0
        return sum(t.utterances_needed for t in self.tasks) / len(self.tasks)

    def to_json(self) -> dict:
        return {
            "tasks": [
                {
                    "id": t.task_id,
                    "category": t.category,
                    "passed": t.passed,
                    "first_pass": t.first_pass,
                    "phrasings": [
                        {
                            "style": p.style,
                            "utterance": p.utterance,
                            "passed": p.passed,
                            "detail": p.detail,
                        }
                        for p in t.phrasings
                    ],
                }
                for t in self.tasks
            ],
            "tasks_passed": self.tasks_passed,
            "tasks_total": len(self.tasks),
            "phrasings_passed": self.phrasings_passed,
            "phrasings_total": self.phrasings_total,
            "category_accuracy": {
                cat: {"passed": p, "attempted": a}
                for cat, (p, a) in self.category_accuracy().items()
            },
            "mean_utterances_needed": self.mean_utterances_needed(),
            "elapsed_seconds": self.elapsed_seconds,
        }

    def to_text(self) -> str:
        lines = [f"{'task':10} {'category':13} {'phrasings':10} {'first':6} status"]
        for t in self.tasks:
            ok = sum(1 for p in t.phrasings if p.passed)
            first = str(t.first_pass) if t.first_pass else "-"
            status = "PASS" if t.passed else "FAIL"
            lines.append(
                f"{t.task_id:10} {t.category:13} {ok}/{len(t.phrasings):<8} {first:6} {status}"
            )
            for p in t.phrasings:
                if not p.passed:
                    lines.append(f"    [{p.style}] {p.utterance!r}: {p.detail}")
        for cat, (p, a) in self.category_accuracy().items():
            lines.append(f"category {cat}: {p}/{a} phrasings")
        lines.append(
            f"tasks {self.tasks_passed}/{len(self.tasks)} passed, "
            f"phrasings {self.phrasings_passed}/{self.phrasings_total}, "
            f"mean utterances to first pass {self.mean_utterances_needed():.2f}"
        )
        return "\n".join(lines)


# -- corpus parsing -----------------------------------------------------------


def _parse_gold(parts: list[str], lineno: int) -> GoldSpec:
    if not parts:
        raise CorpusError(f"line {lineno}: empty gold")
    kind, rest = parts[0], parts[1:]
    if kind == "rows":
        return GoldSpec("rows", rows=frozenset(int(p) for p in rest))
    if kind == "count":
        if len(rest) != 1:
            raise CorpusError(f"line {lineno}: gold count needs one number")
        return GoldSpec("count", count=int(rest[0]))
    if kind == "value":
        if len(rest) != 2:
            raise CorpusError(f"line {lineno}: gold value needs <value> <count>")
        return GoldSpec("value", value=rest[0], count=int(rest[1]))
    if kind == "groups":
        groups = []
        for part in rest:
            key, _, num = part.rpartition("=")
            if not key:
                raise CorpusError(f"line {lineno}: bad group entry {part!r}")
            groups.append((tuple(normalize_key(k) for k in key.split("|")), int(num)))
        return GoldSpec("groups", groups=tuple(groups))
    if kind == "clarify":
        return GoldSpec("clarify", columns=frozenset(rest))
    raise CorpusError(f"line {lineno}: unknown gold kind {kind!r}")


def load_corpus(text: str, source: str = "<corpus>") -> list[TaskSpec]:
    tasks: list[TaskSpec] = []
    default_table: str | None = None
    current: dict | None = None

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, _, rest = line.partition(" ")
        rest = rest.strip()
        if key == "table":
            if current is None:
                default_table = rest
            else:
                current["dataset"] = rest
        elif key == "task":
            if current is not None:
                raise CorpusError(f"{source}:{lineno}: nested task (missing 'end')")
            if not rest:
                raise CorpusError(f"{source}:{lineno}: task needs an id")
            current = {"id": rest, "phrasings": [], "lineno": lineno}
        elif key == "end":
            if current is None:
                raise CorpusError(f"{source}:{lineno}: 'end' outside a task")
            tasks.append(_finish_task(current, default_table, source))
            current = None
        elif current is None:
            raise CorpusError(f"{source}:{lineno}: {key!r} outside a task block")
        elif key == "category":
            if rest not in CATEGORIES:
                raise CorpusError(f"{source}:{lineno}: unknown category {rest!r}")
            current["category"] = rest
        elif key in STYLES:
            if not rest:
                raise CorpusError(f"{source}:{lineno}: empty phrasing")
            current["phrasings"].append((key, rest))
        elif key == "check":
            current["check"] = rest
        elif key == "gold":
            current["gold"] = _parse_gold(shlex.split(rest), lineno)
        else:
            raise CorpusError(f"{source}:{lineno}: unknown key {key!r}")
    if current is not None:
        raise CorpusError(f"{source}: unterminated task {current['id']!r}")
    return tasks


def _finish_task(current: dict, default_table: str | None, source: str) -> TaskSpec:
    lineno = current["lineno"]
    for required in ("category", "gold", "check"):
        if required not in current:
            raise CorpusError(
                f"{source}:{lineno}: task {current['id']!r} missing {required!r}"
            )
    if not current["phrasings"]:
        raise CorpusError(f"{source}:{lineno}: task {current['id']!r} has no phrasings")
    dataset = current.get("dataset") or default_table
    if not dataset:
        raise CorpusError(f"{source}:{lineno}: task {current['id']!r} has no table")
    return TaskSpec(
        task_id=current["id"],
        category=current["category"],
        phrasings=tuple(current["phrasings"]),
        check=current["check"],
        gold=current["gold"],
        dataset=dataset,
    )


def _read_dataset(name: str, base_dir: Path | None) -> str:
    if base_dir is not None:
        candidate = base_dir / name
        if candidate.exists():
            return candidate.read_text(encoding="utf-8")
    path = Path(name)
    if path.exists():
        return path.read_text(encoding="utf-8")
    packaged = resources.files("asktable").joinpath("data", name)
    if packaged.is_file():
        return packaged.read_text(encoding="utf-8")
    raise CorpusError(f"dataset {name!r} not found")


# -- result comparison --------------------------------------------------------


def _norm_cell(cell) -> str:
    return normalize_key(str(cell_to_json(cell)))


def _compare(submitted: SubmitResult, gold: GoldSpec, table: TableDocument) -> str:
    """Empty string when the outcome matches gold, else a failure detail."""
    if gold.kind == "clarify":
        if submitted.request is None:
            return f"expected a clarification, got {_describe(submitted)}"
        got = frozenset(name for _, name, _ in submitted.request.candidates)
        if got != gold.columns:
            return f"clarification candidates {sorted(got)} != {sorted(gold.columns)}"
        return ""
    result = submitted.result
    if result is None:
        return f"expected a {gold.kind} result, got {_describe(submitted)}"
    if gold.kind == "rows":
        if not isinstance(result, RowSet):
            return f"expected rows, got {type(result).__name__}"
        if set(result.row_ids) != set(gold.rows):
            missing = sorted(set(gold.rows) - set(result.row_ids))
            extra = sorted(set(result.row_ids) - set(gold.rows))
            return f"row set mismatch (missing {missing}, extra {extra})"
        return ""
    if gold.kind == "count":
        if not isinstance(result, Scalar):
            return f"expected a count, got {type(result).__name__}"
        if result.count != gold.count:
            return f"count {result.count} != {gold.count}"
        return ""
    if gold.kind == "value":
        if not isinstance(result, ValueAnswer):
            return f"expected a value answer, got {type(result).__name__}"
        if _norm_cell(result.value) != normalize_key(gold.value):
            return f"value {result.value!r} != {gold.value!r}"
        if result.count != gold.count:
            return f"value count {result.count} != {gold.count}"
        return ""
    if gold.kind == "groups":
        if not isinstance(result, GroupTable):
            return f"expected a group table, got {type(result).__name__}"
        got = {
            tuple(_norm_cell(c) for c in g.key): g.count for g in result.groups
        }
        if got != gold.group_map():
            return f"groups {got} != {gold.group_map()}"
        return ""
    return f"unknown gold kind {gold.kind!r}"


def _describe(submitted: SubmitResult) -> str:
    if submitted.error:
        return f"error ({submitted.error})"
    if submitted.request is not None:
        return "a clarification request"
    if submitted.result is not None:
        return type(submitted.result).__name__
    return "not understood"


# -- runner --------------------------------------------------------------------


def run_eval(
    corpus_text: str,
    base_dir: Path | None = None,
    lexicon: Lexicon | None = None,
    source: str = "<corpus>",
) -> EvalReport:
    """Run every phrasing of every task; compare against frozen gold."""
    tasks = load_corpus(corpus_text, source)
    started = time.monotonic()
    tables: dict[str, TableDocument] = {}
    report = EvalReport()
    for task in tasks:
        if task.dataset not in tables:
            tables[task.dataset] = load_table(
                _read_dataset(task.dataset, base_dir), source_name=task.dataset
            )
        table = tables[task.dataset]
        phrasings: list[PhrasingResult] = []
        first_pass = None
        for i, (style, utterance) in enumerate(task.phrasings, start=1):
            submitted = Session(table, lexicon=lexicon).submit(utterance)
            detail = _compare(submitted, task.gold, table)
            passed = detail == ""
            if passed and first_pass is None:
                first_pass = i
            phrasings.append(PhrasingResult(style, utterance, passed, detail))
        report.tasks.append(
            TaskReport(
                task_id=task.task_id,
                category=task.category,
                phrasings=phrasings,
                passed=phrasings[0].passed,
                first_pass=first_pass,
            )
        )
    report.elapsed_seconds = time.monotonic() - started
    return report


def run_eval_file(path: str | Path, lexicon: Lexicon | None = None) -> EvalReport:
    p = Path(path)
    return run_eval(
        p.read_text(encoding="utf-8"), base_dir=p.parent, lexicon=lexicon, source=str(p)
    )


# -- gold generation / drift detection -----------------------------------------


def _quote(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def gold_line(answer: oracle.OracleAnswer) -> str:
    """Render an oracle answer as a corpus `gold` line."""
    if answer.kind == "rows":
        return "gold rows " + " ".join(str(r) for r in answer.rows)
    if answer.kind == "count":
        return f"gold count {answer.count}"
    if answer.kind == "value":
        return f"gold value {_quote(answer.value)} {answer.count}"
    if answer.kind == "groups":
        parts = [f"{_quote('|'.join(key))}={n}" for key, n in answer.groups]
        return "gold groups " + " ".join(parts)
    raise ValueError(f"cannot render gold for {answer.kind!r}")


def sync_check(corpus_text: str, base_dir: Path | None = None) -> list[str]:
    """Recompute each task's gold with the oracle; report any drift."""
    problems: list[str] = []
    for task in load_corpus(corpus_text):
        if task.gold.kind == "clarify":
            continue  # clarification expectations have no oracle query
        csv_text = _read_dataset(task.dataset, base_dir)
        answer = oracle.run_query(csv_text, oracle.parse_query(task.check))
        if not _gold_matches(answer, task.gold):
            problems.append(
                f"task {task.task_id}: frozen gold disagrees with oracle; "
                f"expected '{gold_line(answer)}'"
            )
    return problems


def _gold_matches(answer: oracle.OracleAnswer, gold: GoldSpec) -> bool:
    if answer.kind == "rows" and gold.kind == "rows":
        return set(answer.rows) == set(gold.rows)
    if answer.kind == "count" and gold.kind == "count":
        return answer.count == gold.count
    if answer.kind == "value" and gold.kind == "value":
        return (
            normalize_key(answer.value) == normalize_key(gold.value)
            and answer.count == gold.count
        )
    if answer.kind == "groups" and gold.kind == "groups":
        return answer.group_map() == gold.group_map()
    return False


def _main() -> None:
    """Regenerate gold lines for a corpus file: python -m asktable.harness FILE."""
    import sys

    path = Path(sys.argv[1])
    text = path.read_text(encoding="utf-8")
    for task in load_corpus(text, str(path)):
        csv_text = _read_dataset(task.dataset, path.parent)
        answer = oracle.run_query(csv_text, oracle.parse_query(task.check))
        print(f"task {task.task_id}: {gold_line(answer)}")


if __name__ == "__main__":
    _main()
