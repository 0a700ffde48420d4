"""CNF parsing and the formula-to-history compilers."""

from __future__ import annotations

import itertools
import random

import pytest

from mmcheck import (
    Cnf3,
    format_history,
    get_model,
    parse_dimacs,
    parse_history,
    sat_brute_force,
    sat_to_history_relaxed,
    sat_to_history_sc,
    solve,
)
from mmcheck.errors import (
    MalformedDimacsError,
    NotThreeSatError,
    TooManyVarsError,
)
from mmcheck.reduction import format_dimacs


def test_parse_dimacs_examples():
    cnf = parse_dimacs("p cnf 1 1\n1 1 1 0\n")
    assert cnf.num_vars == 1
    assert cnf.clauses == ((1, 1, 1),)
    assert len(cnf.literals) == 1

    cnf = parse_dimacs("p cnf 3 1\n1 2 3 0\n")
    assert len(cnf.literals) == 3


def test_parse_dimacs_rejects_short_clause():
    with pytest.raises(NotThreeSatError):
        parse_dimacs("p cnf 2 1\n1 2 0\n")


def test_parse_dimacs_malformed():
    with pytest.raises(MalformedDimacsError):
        parse_dimacs("1 2 3 0\n")  # no header
    with pytest.raises(MalformedDimacsError):
        parse_dimacs("p cnf 3 2\n1 2 3 0\n")  # clause count mismatch
    with pytest.raises(MalformedDimacsError):
        parse_dimacs("p cnf 3 1\n1 2 3\n")  # unterminated
    with pytest.raises(MalformedDimacsError):
        parse_dimacs("p cnf 2 1\n1 2 5 0\n")  # variable out of range
    with pytest.raises(MalformedDimacsError):
        parse_dimacs("p cnf x 1\n1 1 1 0\n")


def test_parse_dimacs_comments_and_terminator():
    cnf = parse_dimacs("c comment\np cnf 2 1\nc mid\n1 -2 2 0\n%\n0\n")
    assert cnf.clauses == ((1, -2, 2),)


def test_format_dimacs_round_trip():
    cnf = Cnf3(3, ((1, -2, 3), (-1, 2, -3)))
    assert parse_dimacs(format_dimacs(cnf)) == cnf


def test_literal_ordering_and_distinctness():
    cnf = Cnf3(2, ((1, 1, -2), (-2, 1, 2)))
    # positives first per variable, each distinct literal once
    assert cnf.literals == ((1, False), (2, False), (2, True))


def test_sc_instance_shapes():
    cnf = Cnf3(1, ((1, 1, 1),))
    h = sat_to_history_sc(cnf)
    # variable pair
    assert h.thread_events("T0_x1") and h.thread_events("T1_x1")
    # literal threads: guard, write, guard
    t0 = [h.events[e] for e in h.thread_events("T0_p1")]
    assert [(e.kind, e.var, e.val) for e in t0] == [
        ("rd", "x1", 0),
        ("wr", "p1", 0),
        ("rd", "x1", 0),
    ]
    t1 = [h.events[e] for e in h.thread_events("T1_p1")]
    assert [(e.kind, e.var, e.val) for e in t1] == [
        ("rd", "x1", 1),
        ("wr", "p1", 1),
        ("rd", "x1", 1),
    ]
    # clause reader threads pair the slots cyclically
    c1 = [h.events[e] for e in h.thread_events("C1_1")]
    assert [(e.kind, e.var, e.val) for e in c1] == [
        ("rd", "p1", 0),
        ("rd", "p1", 1),
    ]
    # counts: k = 2n + 2|L|, events = 2n + 6|L| + 6m
    assert h.k == 4
    assert h.n == 14


def test_negated_literal_write_values():
    cnf = Cnf3(1, ((-1, -1, -1),))
    h = sat_to_history_sc(cnf)
    t0 = [h.events[e] for e in h.thread_events("T0_n1")]
    assert [(e.kind, e.var, e.val) for e in t0] == [
        ("rd", "x1", 0),
        ("wr", "n1", 1),
        ("rd", "x1", 0),
    ]


def test_clause_thread_slot_wiring():
    cnf = Cnf3(3, ((1, 2, 3),))
    h = sat_to_history_sc(cnf)
    c1 = [h.events[e] for e in h.thread_events("C1_1")]
    c2 = [h.events[e] for e in h.thread_events("C1_2")]
    c3 = [h.events[e] for e in h.thread_events("C1_3")]
    assert [(e.var, e.val) for e in c1] == [("p3", 0), ("p1", 1)]
    assert [(e.var, e.val) for e in c2] == [("p1", 0), ("p2", 1)]
    assert [(e.var, e.val) for e in c3] == [("p2", 0), ("p3", 1)]


def test_relaxed_instance_shapes():
    cnf = Cnf3(1, ((1, 1, 1),))
    h = sat_to_history_relaxed(cnf)
    t0 = [h.events[e] for e in h.thread_events("T0_p1")]
    assert [(e.kind, e.var, e.val) for e in t0] == [
        ("rd", "x1", 0),
        ("wr", "p1", 0),
    ]
    u0 = [h.events[e] for e in h.thread_events("U0_p1")]
    assert [(e.kind, e.var, e.val) for e in u0] == [
        ("rd", "p1", 0),
        ("rd", "x1", 0),
    ]
    # same write count, two extra events per literal
    assert h.k == 4
    assert h.n == 16  # 2n + 8|L| + 6m


def test_relaxed_instance_has_no_relaxable_po_pairs():
    cnf = Cnf3(2, ((1, -2, 2), (-1, 2, -2)))
    h = sat_to_history_relaxed(cnf)
    for a, b in h.po.pairs:
        assert not h.events[a].is_write


def test_write_count_formula():
    rng = random.Random(8)
    for _ in range(30):
        n = rng.randint(1, 3)
        m = rng.randint(1, 3)
        pool = list(range(1, n + 1)) + [-v for v in range(1, n + 1)]
        clauses = tuple(
            tuple(rng.choice(pool) for _ in range(3)) for _ in range(m)
        )
        cnf = Cnf3(n, clauses)
        expected_k = 2 * n + 2 * len(cnf.literals)
        assert sat_to_history_sc(cnf).k == expected_k
        assert sat_to_history_relaxed(cnf).k == expected_k


def test_emitted_instances_round_trip():
    cnf = Cnf3(2, ((1, -2, 2), (-1, 2, -2)))
    for build in (sat_to_history_sc, sat_to_history_relaxed):
        h = build(cnf)
        text = format_history(h)
        assert format_history(parse_history(text)) == text


def test_relaxed_and_strict_instances_agree_under_sc():
    rng = random.Random(31337)
    sc = get_model("sc")
    for _ in range(25):
        n = rng.randint(2, 3)
        pool = list(range(1, n + 1)) + [-v for v in range(1, n + 1)]
        clauses = tuple(
            tuple(rng.sample(pool, 3)) for _ in range(rng.randint(1, 3))
        )
        cnf = Cnf3(n, clauses)
        strict = solve(sat_to_history_sc(cnf), sc).consistent
        relaxed = solve(sat_to_history_relaxed(cnf), sc).consistent
        assert strict == relaxed == sat_brute_force(cnf)


def test_sat_brute_force_examples():
    assert sat_brute_force(Cnf3(1, ((1, 1, 1),)))
    assert not sat_brute_force(Cnf3(1, ((1, 1, 1), (-1, -1, -1))))
    with pytest.raises(TooManyVarsError):
        sat_brute_force(Cnf3(21, ()))


def test_sat_brute_force_matches_truth_table():
    rng = random.Random(99)
    for _ in range(40):
        n = 3
        pool = list(range(1, 4)) + [-v for v in range(1, 4)]
        clauses = tuple(
            tuple(rng.choice(pool) for _ in range(3)) for _ in range(3)
        )
        cnf = Cnf3(n, clauses)
        expected = any(
            all(
                any(
                    (lit > 0) == bool(assign[abs(lit) - 1])
                    for lit in clause
                )
                for clause in clauses
            )
            for assign in itertools.product([0, 1], repeat=n)
        )
        assert sat_brute_force(cnf) == expected


def test_unit_clause_instances_track_satisfiability():
    # full unit clauses make the guard forcing coincide with the clause
    sc = get_model("sc")
    for clauses, expected in [
        (((1, 1, 1),), True),
        (((1, 1, 1), (-1, -1, -1)), False),
        (((2, 2, 2), (-1, -1, -1)), True),
    ]:
        cnf = Cnf3(2, clauses)
        assert sat_brute_force(cnf) == expected
        assert solve(sat_to_history_sc(cnf), sc).consistent == expected


def test_mixed_repeat_clauses_force_literals():
    """A literal repeated beside a different one is forced true by the
    guard pairing, so such instances over-constrain the formula; the
    compilers stay faithful to the thread shapes and the instance decides
    the forced variant."""
    sc = get_model("sc")
    cnf = Cnf3(3, ((1, 1, 2), (-1, -1, 3)))
    assert sat_brute_force(cnf)  # satisfiable as a formula
    # but the instance also forces both x1 and not-x1: inconsistent
    assert not solve(sat_to_history_sc(cnf), sc).consistent
