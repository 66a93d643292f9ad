from __future__ import annotations

import pytest
from hypothesis import given, strategies as st

from asktable.lexicon import (
    Lexicon,
    LexiconError,
    match_cue,
    normalize_key,
    tokenize,
)
from conftest import DATA_DIR


@pytest.mark.parametrize(
    "raw,expected",
    [
        ("Course Type", "coursetype"),
        ("", ""),
        ("  Web page  ", "webpage"),
        ("Holes", "holes"),
        ("  ...Price!  ", "price"),
        ("UPPER lower", "upperlower"),
    ],
)
def test_normalize_key(raw, expected):
    assert normalize_key(raw) == expected


@given(st.text(max_size=40))
def test_normalize_key_idempotent(text):
    once = normalize_key(text)
    assert normalize_key(once) == once


def test_tokenize_sentence():
    tokens = tokenize("How many courses are of each difficulty?")
    assert [t.text for t in tokens] == [
        "how", "many", "courses", "are", "of", "each", "difficulty",
    ]


def test_tokenize_google_style():
    assert [t.text for t in tokenize("Boone flat Golf Course")] == [
        "boone", "flat", "golf", "course",
    ]


def test_tokenize_empty():
    assert tokenize("") == []


def test_tokenize_keeps_spans():
    tokens = tokenize("easy, courses")
    assert (tokens[0].text, tokens[0].start, tokens[0].end) == ("easy", 0, 4)
    assert (tokens[1].text, tokens[1].start, tokens[1].end) == ("courses", 6, 13)


def test_tokenize_numbers_and_apostrophes():
    tokens = tokenize("don't list 3.5 holes")
    assert [t.text for t in tokens] == ["don't", "list", "3.5", "holes"]
    assert tokens[2].is_number()


def test_match_cue_count_cue():
    lex = Lexicon.default()
    tokens = tokenize("how many courses")
    assert match_cue(tokens, lex.count_cues) == (0, 2)


def test_match_cue_most_used_absent():
    lex = Lexicon.default()
    assert match_cue(tokenize("most used terrain"), lex.most_cues) is None
    assert match_cue(tokenize("most popular terrain"), lex.most_cues) == (0, 2)


def test_match_cue_longest_wins():
    cues = frozenset({("count",), ("count", "of")})
    assert match_cue(tokenize("count of courses"), cues) == (0, 2)


def test_match_cue_not_at_start():
    lex = Lexicon.default()
    assert match_cue(tokenize("courses count"), lex.count_cues) == (1, 2)


def test_cue_sets_must_be_disjoint():
    with pytest.raises(LexiconError):
        Lexicon(count_cues=frozenset({("or",)}))


def test_stopwords_contain_no_domain_nouns():
    lex = Lexicon.default()
    for word in ("courses", "course", "terrain", "difficulty"):
        assert word not in lex.stopwords


def test_default_config_file_matches_builtin():
    lex = Lexicon.from_file(str(DATA_DIR / "lexicon_default.lex"))
    assert lex == Lexicon.default()


def test_strict_config_file_matches_builtin():
    lex = Lexicon.from_file(str(DATA_DIR / "lexicon_strict_paper.lex"))
    assert lex == Lexicon.strict_paper()
    assert lex.group_column_stripping is False


def test_config_roundtrip():
    lex = Lexicon.default()
    assert Lexicon.from_config(lex.to_config()) == lex


def test_config_rejects_unknown_key():
    with pytest.raises(LexiconError):
        Lexicon.from_config("version: 1\nbogus_cues: x\n")


def test_config_rejects_duplicate_key():
    with pytest.raises(LexiconError):
        Lexicon.from_config("count_cues: a\ncount_cues: b\n")


def test_config_rejects_bad_line():
    with pytest.raises(LexiconError):
        Lexicon.from_config("not a key value line\n")


def test_config_rejects_unknown_flag():
    with pytest.raises(LexiconError):
        Lexicon.from_config("flags: mystery_mode\n")


def test_config_rejects_bad_version():
    with pytest.raises(LexiconError):
        Lexicon.from_config("version: 2\n")
