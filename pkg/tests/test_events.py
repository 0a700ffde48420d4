"""Relation algebra, program-order invariants, and reads-from inference."""

from __future__ import annotations

from hypothesis import given, settings
from hypothesis import strategies as st

from mmcheck import (
    Relation,
    infer_rf,
    parse_history,
    po_loc,
    restrict_var,
    simulate,
    generate_program,
)

from conftest import SB

pairs_st = st.sets(
    st.tuples(st.integers(0, 6), st.integers(0, 6)), max_size=12
)


def test_compose_definition():
    a = Relation({(1, 2), (2, 3)})
    b = Relation({(2, 9), (3, 9)})
    assert a.compose(b) == Relation({(1, 9), (2, 9)})


def test_compose_with_empty_is_empty():
    assert Relation().compose(Relation({(1, 2)})) == Relation()
    assert Relation({(1, 2)}).compose(Relation()) == Relation()


def test_inverse_example():
    assert Relation({(1, 2)}).inverse() == Relation({(2, 1)})


@settings(deadline=None)
@given(pairs_st)
def test_inverse_involution(pairs):
    rel = Relation(pairs)
    assert rel.inverse().inverse() == rel


@settings(deadline=None)
@given(pairs_st, pairs_st)
def test_compose_matches_set_builder(pa, pb):
    a, b = Relation(pa), Relation(pb)
    expected = {(x, z) for (x, y) in pa for (y2, z) in pb if y == y2}
    assert a.compose(b).pairs == frozenset(expected)


def test_transitive_closure():
    rel = Relation({(0, 1), (1, 2), (2, 3)})
    assert (0, 3) in rel.transitive_closure()
    assert (3, 0) not in rel.transitive_closure()


def test_adjacency_indexes_consistent():
    rel = Relation({(1, 2), (1, 3), (4, 2)})
    assert rel.successors(1) == {2, 3}
    assert rel.predecessors(2) == {1, 4}
    assert rel.successors(9) == frozenset()


def test_restrict_var_groups_by_variable():
    h = parse_history(
        "thread T0\nwr x 1\nwr x 2\nwr y 1\nthread T1\nrd x 2\n"
    )
    wx1, wx2, wy = 0, 1, 2
    rel = Relation({(wx1, wx2), (wx1, wy)})
    fam = restrict_var(rel, h)
    assert fam["x"] == Relation({(wx1, wx2)})
    assert fam["y"] == Relation()


def test_po_transitive_and_irreflexive_within_threads():
    h = parse_history("thread T0\nwr x 1\nrd x 1\nwr y 1\n")
    assert (0, 1) in h.po and (1, 2) in h.po and (0, 2) in h.po
    for e in range(h.n):
        assert (e, e) not in h.po
    ids = h.thread_events("T0")
    for i in range(len(ids)):
        for j in range(len(ids)):
            assert ((ids[i], ids[j]) in h.po) == (i < j)


def test_po_loc_examples():
    h = parse_history("thread T0\nwr x 1\nwr y 1\n")
    assert po_loc(h) == Relation()

    h = parse_history("thread T0\nwr x 1\nrd x 1\nrd x 1\n")
    assert (1, 2) in po_loc(h, llh=False)
    assert (1, 2) not in po_loc(h, llh=True)
    assert (0, 1) in po_loc(h, llh=True)  # write-read pair survives

    h = parse_history("init: x=0\nthread T0\nrd x 0\nwr x 1\n")
    assert po_loc(h).pairs == {(0, 1), (0, 2), (1, 2)}


def test_infer_rf_examples():
    h = parse_history("thread T0\nwr x 1\nwr y 1\n")
    assert infer_rf(h) == Relation()

    h = parse_history("init: x=0\nthread T0\nrd x 0\n")
    assert infer_rf(h) == Relation({(0, 1)})

    h = parse_history("thread T0\nwr x 1\nthread T1\nwr x 2\nthread T2\nrd x 2\n")
    assert infer_rf(h) == Relation({(1, 2)})


def test_infer_rf_idempotent_and_total():
    h = parse_history(SB)
    assert infer_rf(h) == h.rf
    assert len(h.rf) == len(h.reads)


@settings(deadline=None, max_examples=60)
@given(st.integers(0, 10**6))
def test_infer_rf_reproduces_simulated_rf(seed):
    prog = generate_program(2, 3, 2, seed=seed, max_writes=4)
    h = simulate(prog, "tso", seed=seed + 1)
    assert infer_rf(h) == h.rf
    assert len(h.rf) == len(h.reads)
