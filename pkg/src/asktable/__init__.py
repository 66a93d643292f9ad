"""asktable: ask questions about CSV tables in plain language.

The pieces compose left to right: load a table, build its value index,
parse an utterance into a small table-algebra intent, execute it with row
provenance, and—when a bare value is ambiguous—hold a clarification dialog.

    >>> from asktable import Session, load_table
    >>> table = load_table(open("courses.csv", "rb"))
    >>> Session(table).submit("how many easy courses").result.count
    3
"""

from .engine import (
    EmptySelectionError,
    GroupTable,
    QueryResult,
    RowSet,
    Scalar,
    ValueAnswer,
    eval_predicate,
    execute,
)
from .intent import (
    And,
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
    render_intent,
)
from .lexicon import Lexicon, match_cue, normalize_key, tokenize
from .parser import parse, parse_numeric_criterion
from .session import (
    ClarificationRequest,
    InvalidChoiceError,
    NoPendingClarificationError,
    Session,
    SubmitResult,
    open_session,
)
from .table import (
    ColumnKind,
    ColumnMeta,
    TableDocument,
    TableError,
    ValueIndex,
    build_value_index,
    column_values,
    load_table,
    serialize_table,
)

__version__ = "0.1.0"

__all__ = [
    "And",
    "ClarificationRequest",
    "ColumnKind",
    "ColumnMeta",
    "EmptySelectionError",
    "GroupTable",
    "IntentKind",
    "InvalidChoiceError",
    "Lexicon",
    "NeedsClarification",
    "NoPendingClarificationError",
    "Not",
    "NotUnderstood",
    "NumCompare",
    "Or",
    "ParseOutcome",
    "Parsed",
    "Predicate",
    "QueryIntent",
    "QueryResult",
    "RowSet",
    "Scalar",
    "Session",
    "SubmitResult",
    "TableDocument",
    "TableError",
    "TruePredicate",
    "ValueAnswer",
    "ValueIndex",
    "ValueMatch",
    "build_value_index",
    "canonicalize",
    "column_values",
    "eval_predicate",
    "execute",
    "load_table",
    "match_cue",
    "normalize_key",
    "open_session",
    "parse",
    "parse_numeric_criterion",
    "render_intent",
    "serialize_table",
    "tokenize",
]
