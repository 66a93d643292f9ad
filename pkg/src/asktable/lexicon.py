"""Normalization rules and cue vocabularies.

Everything the parser knows about language lives here: how raw text is
reduced to matchable keys, which phrases signal each intent kind, which
words are comparators, and which words are ignorable noise. The shipped
default vocabulary is loadable from a plain-text config file so deployments
can extend it without code changes.
"""

from __future__ import annotations

import re
import unicodedata
from dataclasses import dataclass, field, fields

__all__ = [
    "Comparator",
    "Lexicon",
    "LexiconError",
    "Token",
    "match_cue",
    "normalize_key",
    "tokenize",
]

# Comparator operator names used in NumCompare predicates.
EQ, GT, LT, GE, LE = "EQ", "GT", "LT", "GE", "LE"
Comparator = str

_WS_RE = re.compile(r"\s+")
# Word tokens keep interior apostrophes ("don't" stays one token); number
# tokens keep an interior decimal point.
_TOKEN_RE = re.compile(r"\d+(?:\.\d+)?|[^\W\d_]+(?:'[^\W\d_]+)*", re.UNICODE)


class LexiconError(ValueError):
    """Raised for malformed lexicon config files or inconsistent cue sets."""


def normalize_key(text: str) -> str:
    """Reduce text to a matchable key.

    Lowercases, removes all whitespace, and strips leading/trailing
    punctuation; interior characters are preserved. Idempotent.
    """
    lowered = _WS_RE.sub("", text.lower())
    start, end = 0, len(lowered)
    while start < end and not _is_word_char(lowered[start]):
        start += 1
    while end > start and not _is_word_char(lowered[end - 1]):
        end -= 1
    return lowered[start:end]


def _is_word_char(ch: str) -> bool:
    return ch.isalnum() or unicodedata.category(ch) == "Mn"


@dataclass(frozen=True)
class Token:
    """A lowercase word or number token with its span in the utterance."""

    text: str
    start: int
    end: int

    def is_number(self) -> bool:
        return self.text[0].isdigit()


def tokenize(utterance: str) -> list[Token]:
    """Split an utterance into lowercase word/number tokens.

    Punctuation is dropped except for decimal points inside numbers and
    apostrophes inside words. Original character spans are kept so
    diagnostics can point back at the input.
    """
    return [
        Token(m.group(0).lower(), m.start(), m.end())
        for m in _TOKEN_RE.finditer(utterance)
    ]


def match_cue(tokens: list[Token], cue_set: frozenset[tuple[str, ...]]) -> tuple[int, int] | None:
    """Find the first, longest contiguous token run matching a cue phrase.

    Returns a half-open (start, end) token span or None. Scans left to
    right; at each position the longest matching phrase wins.
    """
    if not cue_set:
        return None
    max_len = max(len(p) for p in cue_set)
    for i in range(len(tokens)):
        for n in range(min(max_len, len(tokens) - i), 0, -1):
            if tuple(t.text for t in tokens[i : i + n]) in cue_set:
                return (i, i + n)
    return None


def _phrases(*texts: str) -> frozenset[tuple[str, ...]]:
    return frozenset(tuple(t.split()) for t in texts)


@dataclass(frozen=True)
class Lexicon:
    """The system vocabulary: cue phrases, comparators, and stopwords.

    Cue phrases are stored as token tuples. All cue sets must be pairwise
    disjoint so a phrase signals exactly one thing. `group_column_stripping`
    controls whether group-by column references may skip filler stopwords
    and match plural forms ("each of the counties"); disabling it reproduces
    the stricter historical behavior selected by --strict-paper.
    """

    count_cues: frozenset[tuple[str, ...]] = _phrases("how many", "number of", "count")
    most_cues: frozenset[tuple[str, ...]] = _phrases(
        "most popular", "most common", "most frequent"
    )
    least_cues: frozenset[tuple[str, ...]] = _phrases(
        "least popular", "least common", "least frequent"
    )
    group_cues: frozenset[tuple[str, ...]] = _phrases("each", "every", "per", "by")
    or_cues: frozenset[tuple[str, ...]] = _phrases("or")
    not_cues: frozenset[tuple[str, ...]] = _phrases("not", "without", "don't", "doesn't")
    list_cues: frozenset[tuple[str, ...]] = _phrases(
        "show", "list", "what", "which", "give", "display", "find"
    )
    comparator_cues: dict[tuple[str, ...], Comparator] = field(
        default_factory=lambda: {
            ("more", "than"): GT,
            ("greater", "than"): GT,
            ("over",): GT,
            ("above",): GT,
            ("less", "than"): LT,
            ("fewer", "than"): LT,
            ("under",): LT,
            ("below",): LT,
            ("at", "least"): GE,
            ("at", "most"): LE,
            ("no", "more", "than"): LE,
            ("exactly",): EQ,
            ("equal", "to"): EQ,
        }
    )
    # Closed-class function words only; domain nouns are never stopwords.
    stopwords: frozenset[str] = frozenset(
        """the a an of in with are is was were am be been being me my all that
        this those these there here have has had do does did to for on at
        from as it its they them their i we you your us and either please
        would could can will""".split()
    )
    group_column_stripping: bool = True

    def __post_init__(self) -> None:
        named = self._cue_sets()
        names = list(named)
        for i, a in enumerate(names):
            for b in names[i + 1 :]:
                overlap = named[a] & named[b]
                if overlap:
                    phrase = " ".join(next(iter(overlap)))
                    raise LexiconError(f"cue {phrase!r} appears in both {a} and {b}")

    def _cue_sets(self) -> dict[str, frozenset[tuple[str, ...]]]:
        return {
            "count_cues": self.count_cues,
            "most_cues": self.most_cues,
            "least_cues": self.least_cues,
            "group_cues": self.group_cues,
            "or_cues": self.or_cues,
            "not_cues": self.not_cues,
            "list_cues": self.list_cues,
            "comparator_cues": frozenset(self.comparator_cues),
        }

    @classmethod
    def default(cls) -> "Lexicon":
        return cls()

    @classmethod
    def strict_paper(cls) -> "Lexicon":
        """The default vocabulary with group-column stripping disabled."""
        return cls(group_column_stripping=False)

    # -- config file format -------------------------------------------------
    #
    # Flat "key: phrase, phrase, ..." lines; '#' starts a comment. Comparator
    # cues are split per operator (gt_cues, lt_cues, ge_cues, le_cues,
    # eq_cues). Boolean flags are listed on a "flags:" line.

    @classmethod
    def from_config(cls, text: str, source: str = "<config>") -> "Lexicon":
        entries: dict[str, list[str]] = {}
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if ":" not in line:
                raise LexiconError(f"{source}:{lineno}: expected 'key: values' line")
            key, _, values = line.partition(":")
            key = key.strip()
            items = [v.strip() for v in values.split(",") if v.strip()]
            if key in entries:
                raise LexiconError(f"{source}:{lineno}: duplicate key {key!r}")
            entries[key] = items

        version = entries.pop("version", ["1"])
        if version != ["1"]:
            raise LexiconError(f"{source}: unsupported lexicon version {version}")

        kwargs: dict = {}
        for name in (
            "count_cues",
            "most_cues",
            "least_cues",
            "group_cues",
            "or_cues",
            "not_cues",
            "list_cues",
        ):
            if name in entries:
                kwargs[name] = _phrases(*entries.pop(name))
        comparators: dict[tuple[str, ...], Comparator] = {}
        for key, op in (
            ("gt_cues", GT),
            ("lt_cues", LT),
            ("ge_cues", GE),
            ("le_cues", LE),
            ("eq_cues", EQ),
        ):
            for phrase in entries.pop(key, []):
                comparators[tuple(phrase.split())] = op
        if comparators:
            kwargs["comparator_cues"] = comparators
        if "stopwords" in entries:
            kwargs["stopwords"] = frozenset(entries.pop("stopwords"))
        flags = set(entries.pop("flags", []))
        known_flags = {"group_column_stripping"}
        if flags - known_flags:
            raise LexiconError(f"{source}: unknown flags {sorted(flags - known_flags)}")
        kwargs["group_column_stripping"] = "group_column_stripping" in flags
        unknown = set(entries)
        if unknown:
            raise LexiconError(f"{source}: unknown keys {sorted(unknown)}")
        return cls(**kwargs)

    @classmethod
    def from_file(cls, path: str) -> "Lexicon":
        with open(path, encoding="utf-8") as fh:
            return cls.from_config(fh.read(), source=path)

    def to_config(self) -> str:
        """Serialize to the config format; from_config round-trips it."""

        def line(key: str, phrases) -> str:
            return f"{key}: " + ", ".join(sorted(" ".join(p) for p in phrases))

        parts = ["version: 1"]
        for name in (
            "count_cues",
            "most_cues",
            "least_cues",
            "group_cues",
            "or_cues",
            "not_cues",
            "list_cues",
        ):
            parts.append(line(name, getattr(self, name)))
        by_op: dict[str, list[tuple[str, ...]]] = {}
        for phrase, op in self.comparator_cues.items():
            by_op.setdefault(op, []).append(phrase)
        for key, op in (
            ("gt_cues", GT),
            ("lt_cues", LT),
            ("ge_cues", GE),
            ("le_cues", LE),
            ("eq_cues", EQ),
        ):
            if op in by_op:
                parts.append(line(key, by_op[op]))
        parts.append("stopwords: " + ", ".join(sorted(self.stopwords)))
        enabled = [
            f.name
            for f in fields(self)
            if f.type == "bool" and getattr(self, f.name)
        ]
        parts.append("flags: " + ", ".join(enabled))
        return "\n".join(parts) + "\n"
