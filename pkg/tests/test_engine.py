from __future__ import annotations

import random
from decimal import Decimal

import pytest

from asktable import (
    And,
    EmptySelectionError,
    GroupTable,
    IntentKind,
    Not,
    NumCompare,
    Or,
    QueryIntent,
    RowSet,
    Scalar,
    TruePredicate,
    ValueAnswer,
    ValueMatch,
    eval_predicate,
    execute,
    load_table,
)
from asktable.oracle import parse_query, run_query
from support import make_random_table, predicate_to_oracle, random_predicate


def col(table, name):
    return next(c.index for c in table.columns if c.display_name == name)


def count(pred) -> QueryIntent:
    return QueryIntent(IntentKind.COUNT, pred)


# -- eval_predicate -----------------------------------------------------------


def test_value_match_on_row(mini6):
    difficulty = col(mini6, "Difficulty")
    assert eval_predicate(mini6.rows[1], ValueMatch(difficulty, "easy"))
    assert not eval_predicate(mini6.rows[0], ValueMatch(difficulty, "easy"))


def test_true_matches_everything(mini6):
    assert all(eval_predicate(row, TruePredicate()) for row in mini6.rows)


def test_not_varied_on_first_row(mini6):
    terrain = col(mini6, "Terrain")
    assert not eval_predicate(mini6.rows[0], Not(ValueMatch(terrain, "varied")))


def test_empty_cells_never_match():
    table = load_table("a,b\nx,1\n,\n")
    assert not eval_predicate(table.rows[1], ValueMatch(0, ""))
    assert not eval_predicate(table.rows[1], NumCompare(1, "EQ", Decimal(1)))


def test_numeric_comparisons():
    table = load_table("n\n5\n")
    row = table.rows[0]
    assert eval_predicate(row, NumCompare(0, "EQ", Decimal(5)))
    assert eval_predicate(row, NumCompare(0, "GE", Decimal(5)))
    assert eval_predicate(row, NumCompare(0, "LT", Decimal(6)))
    assert not eval_predicate(row, NumCompare(0, "GT", Decimal(5)))


# -- execute -----------------------------------------------------------------


def test_count_easy(mini6):
    result = execute(count(ValueMatch(col(mini6, "Difficulty"), "easy")), mini6)
    assert result == Scalar(3, (1, 2, 4))


def test_group_count_difficulty(mini6):
    intent = QueryIntent(
        IntentKind.GROUP_COUNT, group_columns=(col(mini6, "Difficulty"),)
    )
    result = execute(intent, mini6)
    assert isinstance(result, GroupTable)
    assert [(g.key[0], g.count) for g in result.groups] == [
        ("Moderate", 1),
        ("Easy", 3),
        ("Hard", 2),
    ]
    assert result.groups[1].provenance == (1, 2, 4)


def test_most_frequent_tie_breaks_by_first_occurrence(mini6):
    intent = QueryIntent(
        IntentKind.MOST_FREQUENT, target_column=col(mini6, "Terrain")
    )
    result = execute(intent, mini6)
    # Varied and Rolling both occur twice; Varied occurs first (row 0).
    assert result == ValueAnswer(col(mini6, "Terrain"), "Varied", 2, (0, 1))


def test_least_frequent(mini6):
    intent = QueryIntent(
        IntentKind.LEAST_FREQUENT, target_column=col(mini6, "Terrain")
    )
    result = execute(intent, mini6)
    # Flat and Hilly both occur once; Flat occurs first (row 2).
    assert result == ValueAnswer(col(mini6, "Terrain"), "Flat", 1, (2,))


def test_count_or(mini6):
    pred = Or(
        (
            ValueMatch(col(mini6, "Terrain"), "hilly"),
            ValueMatch(col(mini6, "Difficulty"), "hard"),
        )
    )
    assert execute(count(pred), mini6) == Scalar(2, (3, 5))


def test_count_not_varied(mini6):
    pred = Not(ValueMatch(col(mini6, "Terrain"), "varied"))
    assert execute(count(pred), mini6).count == 4


def test_count_true_is_row_count(mini6):
    assert execute(count(TruePredicate()), mini6).count == mini6.n_rows


def test_filter_projection(mini6):
    intent = QueryIntent(
        IntentKind.FILTER,
        ValueMatch(col(mini6, "Difficulty"), "easy"),
        projection=(col(mini6, "City"),),
    )
    result = execute(intent, mini6)
    assert result == RowSet((1, 2, 4), (col(mini6, "City"),))


def test_filter_without_projection_keeps_all_columns(mini6):
    result = execute(QueryIntent(IntentKind.FILTER), mini6)
    assert result.columns == tuple(range(mini6.n_columns))
    assert result.row_ids == tuple(range(mini6.n_rows))


def test_empty_selection_raises(mini6):
    intent = QueryIntent(
        IntentKind.MOST_FREQUENT,
        ValueMatch(col(mini6, "City"), "nowhere"),
        target_column=col(mini6, "Terrain"),
    )
    with pytest.raises(EmptySelectionError):
        execute(intent, mini6)


def test_group_count_drops_empty_group_cells():
    table = load_table("g,v\nx,1\n,2\ny,3\nx,4\n")
    intent = QueryIntent(IntentKind.GROUP_COUNT, group_columns=(0,))
    result = execute(intent, table)
    assert [(g.key[0], g.count) for g in result.groups] == [("x", 2), ("y", 1)]
    assert result.dropped_rows == (1,)
    # Partition over non-empty group cells: group counts + dropped = matches.
    assert sum(g.count for g in result.groups) + len(result.dropped_rows) == 4


def test_frequency_ignores_empty_cells():
    table = load_table("v,w\nx,a\n,a\nx,a\ny,a\n")
    intent = QueryIntent(IntentKind.MOST_FREQUENT, target_column=0)
    result = execute(intent, table)
    assert result.value == "x"
    assert result.count == 2


def test_group_keys_use_normalized_identity():
    table = load_table("g\nEasy\neasy\nEASY \n")
    intent = QueryIntent(IntentKind.GROUP_COUNT, group_columns=(0,))
    result = execute(intent, table)
    assert len(result.groups) == 1
    assert result.groups[0].count == 3
    assert result.groups[0].key == ("Easy",)  # first occurrence is displayed


def test_execute_validates_shape(mini6):
    with pytest.raises(ValueError):
        execute(QueryIntent(IntentKind.GROUP_COUNT), mini6)
    with pytest.raises(ValueError):
        execute(QueryIntent(IntentKind.MOST_FREQUENT), mini6)


def test_determinism(mini6):
    intent = QueryIntent(IntentKind.GROUP_COUNT, group_columns=(col(mini6, "Terrain"),))
    results = {repr(execute(intent, mini6)) for _ in range(5)}
    assert len(results) == 1


# -- randomized oracle equivalence ------------------------------------------------


def test_randomized_engine_matches_oracle_scan():
    rng = random.Random(20240817)
    for _ in range(200):
        csv_text, table = make_random_table(rng, max_rows=30, max_cols=5)
        pred = random_predicate(rng, table)
        oracle_pred = predicate_to_oracle(pred, table)

        engine_count = execute(count(pred), table)
        oracle_count = run_query(csv_text, parse_query(f"count {oracle_pred}"))
        assert engine_count.count == oracle_count.count

        engine_rows = execute(QueryIntent(IntentKind.FILTER, pred), table)
        oracle_rows = run_query(csv_text, parse_query(f"filter {oracle_pred}"))
        assert set(engine_rows.row_ids) == set(oracle_rows.rows)

        # Count/Filter coherence and complement law on the same predicate.
        assert engine_count.count == len(engine_rows.row_ids)
        complement = execute(count(Not(pred)), table)
        assert engine_count.count + complement.count == table.n_rows


def test_randomized_laws():
    rng = random.Random(99)
    for _ in range(150):
        _, table = make_random_table(rng, max_rows=25, max_cols=4)
        a = random_predicate(rng, table, depth=2)
        b = random_predicate(rng, table, depth=2)
        n_a = execute(count(a), table).count
        n_b = execute(count(b), table).count
        n_or = execute(count(Or((a, b))), table).count
        n_and = execute(count(And((a, b))), table).count
        assert n_or == n_a + n_b - n_and


def test_randomized_group_partition():
    rng = random.Random(4242)
    from asktable import ColumnKind

    for _ in range(150):
        _, table = make_random_table(rng, max_rows=30, max_cols=5)
        textual = [c.index for c in table.columns if c.kind is ColumnKind.TEXTUAL]
        pred = random_predicate(rng, table, depth=2)
        group_cols = tuple(rng.sample(textual, k=min(len(textual), rng.randint(1, 2))))
        intent = QueryIntent(IntentKind.GROUP_COUNT, pred, group_columns=group_cols)
        result = execute(intent, table)
        total = execute(count(pred), table).count
        assert sum(g.count for g in result.groups) + len(result.dropped_rows) == total
        # Each matching row lands in exactly one group's provenance.
        seen: list[int] = []
        for g in result.groups:
            seen.extend(g.provenance)
        assert len(seen) == len(set(seen))
        assert set(seen) | set(result.dropped_rows) == set(
            execute(QueryIntent(IntentKind.FILTER, pred), table).row_ids
        )


def test_randomized_mode_correctness():
    rng = random.Random(7)
    from asktable import ColumnKind

    checked = 0
    while checked < 100:
        _, table = make_random_table(rng, max_rows=30, max_cols=4)
        textual = [c.index for c in table.columns if c.kind is ColumnKind.TEXTUAL]
        target = rng.choice(textual)
        values = [row[target] for row in table.rows if row[target] is not None]
        if not values:
            continue
        checked += 1
        most = execute(
            QueryIntent(IntentKind.MOST_FREQUENT, target_column=target), table
        )
        least = execute(
            QueryIntent(IntentKind.LEAST_FREQUENT, target_column=target), table
        )
        from asktable.engine import _cell_key

        tallies: dict[str, int] = {}
        for v in values:
            tallies[_cell_key(v)] = tallies.get(_cell_key(v), 0) + 1
        assert most.count == max(tallies.values())
        assert least.count == min(tallies.values())
