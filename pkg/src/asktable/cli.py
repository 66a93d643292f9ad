"""Command-line interface: one-shot queries, a REPL, the eval runner, and serve.

Exit codes are part of the contract: 0 answered, 1 I/O / table / execution
errors, 2 utterance not understood, 3 clarification needed but the run is
non-interactive. `--format json` output is byte-identical to the HTTP
service's response body for the same utterance.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from .engine import GroupTable, QueryResult, RowSet, Scalar, ValueAnswer
from .harness import CorpusError, run_eval_file
from .intent import NotUnderstood, Parsed, render_intent
from .lexicon import Lexicon, LexiconError
from .session import ClarificationRequest, Session, SubmitResult
from .table import TableDocument, TableError, load_table
from .wire import build_envelope, cell_to_json, dump_envelope

__all__ = ["main"]

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_NOT_UNDERSTOOD = 2
EXIT_NEEDS_CLARIFICATION = 3


def _build_arg_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="sir",
        description="Ask questions about a CSV table in plain language.",
    )
    p.add_argument("utterance", nargs="?", help="question to ask (omit for a REPL)")
    p.add_argument("-t", "--table", help="path to the CSV table")
    p.add_argument("-q", "--query", help="question to ask (same as the positional)")
    p.add_argument(
        "--format",
        choices=("text", "json", "ir"),
        default="text",
        help="output format for one-shot queries",
    )
    p.add_argument("--emit-ir", action="store_true", help="shorthand for --format ir")
    p.add_argument("--lexicon", help="path to a lexicon config file")
    p.add_argument(
        "--strict-paper",
        action="store_true",
        help="use the strict vocabulary (no group-column stripping)",
    )
    p.add_argument("--delimiter", default=",", help="CSV delimiter (default ,)")
    p.add_argument("--serve", action="store_true", help="run the HTTP service")
    p.add_argument("--port", type=int, default=None, help="service port")
    p.add_argument("--host", default=None, help="service bind address")
    p.add_argument("--static", help="directory of built UI assets to serve at /ui")
    p.add_argument("--eval", dest="eval_path", help="run a task corpus and report")
    return p


def _load_lexicon(args) -> Lexicon:
    if args.lexicon and args.strict_paper:
        raise SystemExit("--lexicon and --strict-paper are mutually exclusive")
    if args.lexicon:
        return Lexicon.from_file(args.lexicon)
    if args.strict_paper:
        return Lexicon.strict_paper()
    return Lexicon.default()


def _load_table(args) -> TableDocument:
    path = Path(args.table)
    return load_table(path.read_bytes(), delimiter=args.delimiter, source_name=path.name)


def main(argv: list[str] | None = None) -> int:
    args = _build_arg_parser().parse_args(argv)
    if args.emit_ir:
        args.format = "ir"
    try:
        lexicon = _load_lexicon(args)
    except (OSError, LexiconError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR

    if args.eval_path:
        return _run_eval(args, lexicon)
    if args.serve:
        return _run_serve(args, lexicon)
    if not args.table:
        print("error: -t/--table is required", file=sys.stderr)
        return EXIT_ERROR

    try:
        table = _load_table(args)
    except (OSError, TableError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR

    utterance = args.utterance or args.query
    session = Session(table, lexicon=lexicon)
    if utterance is not None:
        return _oneshot(session, utterance, args.format)
    return _repl(session)


# -- one-shot ------------------------------------------------------------------


def _oneshot(session: Session, utterance: str, fmt: str) -> int:
    submitted = session.submit(utterance)
    if fmt == "json":
        print(dump_envelope(build_envelope(submitted, session.table)))
        return _exit_code(submitted)
    if fmt == "ir":
        if isinstance(submitted.outcome, Parsed):
            print(render_intent(submitted.outcome.intent, session.table))
        else:
            _print_non_answer(submitted, session.table)
        return _exit_code(submitted)
    _print_text(submitted, session.table)
    return _exit_code(submitted)


def _exit_code(submitted: SubmitResult) -> int:
    if submitted.error is not None:
        return EXIT_ERROR
    if submitted.request is not None:
        return EXIT_NEEDS_CLARIFICATION
    if isinstance(submitted.outcome, NotUnderstood):
        return EXIT_NOT_UNDERSTOOD
    return EXIT_OK


def _print_text(submitted: SubmitResult, table: TableDocument) -> None:
    if submitted.result is not None:
        print(render_result(submitted.result, table))
    else:
        _print_non_answer(submitted, table)


def _print_non_answer(submitted: SubmitResult, table: TableDocument) -> None:
    if submitted.error is not None:
        print(f"error: {submitted.error}")
    elif submitted.request is not None:
        req = submitted.request
        print(f"{req.ambiguous_value!r} appears in more than one column:")
        for i, (_, name, count) in enumerate(req.candidates, start=1):
            print(f"  {i}) {name} ({count} occurrences)")
        print("re-run naming the column, or answer the prompt in the REPL")
    elif isinstance(submitted.outcome, NotUnderstood):
        diag = submitted.outcome.diagnostics
        words = ", ".join(t[0] for t in diag.unmatched)
        reason = diag.reason or "could not interpret the utterance"
        print(f"not understood: {reason}" + (f" (unmatched: {words})" if words else ""))


# -- text rendering --------------------------------------------------------------


def _aligned(headers: list[str], rows: list[list[str]]) -> str:
    widths = [len(h) for h in headers]
    for row in rows:
        for i, cell in enumerate(row):
            widths[i] = max(widths[i], len(cell))
    fmt_row = lambda row: "  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip()  # noqa: E731
    lines = [fmt_row(headers), fmt_row(["-" * w for w in widths])]
    lines.extend(fmt_row(r) for r in rows)
    return "\n".join(lines)


def _cell_text(cell) -> str:
    value = cell_to_json(cell)
    return "" if value is None else str(value)


def render_result(result: QueryResult, table: TableDocument) -> str:
    if isinstance(result, Scalar):
        return str(result.count)
    if isinstance(result, ValueAnswer):
        return f"{_cell_text(result.value)} ({result.count})"
    if isinstance(result, RowSet):
        headers = ["row"] + [table.column(i).display_name for i in result.columns]
        rows = [
            [str(rid)] + [_cell_text(table.rows[rid][i]) for i in result.columns]
            for rid in result.row_ids
        ]
        body = _aligned(headers, rows)
        return f"{body}\n({len(result.row_ids)} rows)"
    if isinstance(result, GroupTable):
        headers = [table.column(i).display_name for i in result.group_columns] + ["count"]
        rows = [
            [_cell_text(c) for c in g.key] + [str(g.count)] for g in result.groups
        ]
        return _aligned(headers, rows)
    raise TypeError(f"unknown result {result!r}")


# -- REPL ------------------------------------------------------------------------


def _repl(session: Session) -> int:
    try:
        import readline  # noqa: F401  (line editing when available)
    except ImportError:
        pass
    table = session.table
    print(f"loaded {table.source_name}: {table.n_rows} rows, {table.n_columns} columns")
    print("type a question, \\ir to toggle IR echo, \\quit to exit")
    show_ir = False
    while True:
        try:
            line = input("? ").strip()
        except EOFError:
            print()
            return EXIT_OK
        except KeyboardInterrupt:
            print()
            return EXIT_OK
        if not line:
            continue
        if line == "\\quit":
            return EXIT_OK
        if line == "\\ir":
            show_ir = not show_ir
            print(f"IR echo {'on' if show_ir else 'off'}")
            continue
        if line.startswith("\\"):
            print("commands: \\ir toggle IR echo, \\quit exit")
            continue
        submitted = session.submit(line)
        if show_ir and isinstance(submitted.outcome, Parsed):
            print(f"understood as {render_intent(submitted.outcome.intent, table)}")
        if submitted.request is not None:
            submitted = _repl_clarify(session, submitted.request)
            if submitted is None:
                continue
            if show_ir and isinstance(submitted.outcome, Parsed):
                print(f"understood as {render_intent(submitted.outcome.intent, table)}")
        _print_text(submitted, table)


def _repl_clarify(session: Session, request: ClarificationRequest) -> SubmitResult | None:
    print(f"which column did you mean by {request.ambiguous_value!r}?")
    for i, (_, name, count) in enumerate(request.candidates, start=1):
        print(f"  {i}) {name} ({count} occurrences)")
    print("  0) never mind")
    while True:
        try:
            answer = input("choose: ").strip()
        except (EOFError, KeyboardInterrupt):
            print()
            return None
        if not answer.isdigit():
            print("enter a number from the menu")
            continue
        choice = int(answer)
        if choice == 0:
            return None
        if 1 <= choice <= len(request.candidates):
            column = request.candidates[choice - 1][0]
            result = session.clarify(request.request_id, column)
            if result.request is not None:
                return _repl_clarify(session, result.request)
            return result
        print("enter a number from the menu")


# -- eval / serve ------------------------------------------------------------------


def _run_eval(args, lexicon: Lexicon) -> int:
    try:
        report = run_eval_file(args.eval_path, lexicon=lexicon)
    except (OSError, CorpusError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    if args.format == "json":
        import json

        print(json.dumps(report.to_json(), indent=2))
    else:
        print(report.to_text())
    return EXIT_OK if report.tasks_passed == len(report.tasks) else EXIT_ERROR


def _run_serve(args, lexicon: Lexicon) -> int:
    import uvicorn

    from .service import ServiceConfig, create_app

    static = None
    if args.static:
        static = Path(args.static)
    elif Path("frontend/dist").is_dir():
        static = Path("frontend/dist")
    config = ServiceConfig(
        lexicon=lexicon,
        static_dir=static,
        preload=[Path(args.table)] if args.table else [],
    )
    host = args.host or os.environ.get("SIR_HOST", "127.0.0.1")
    port = args.port or int(os.environ.get("SIR_PORT", "8075"))
    uvicorn.run(create_app(config), host=host, port=port)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
