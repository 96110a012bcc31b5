import pytest
from hypothesis import given, settings, strategies as st

from eetc.errors import BoundTooLarge, UnresolvedRef
from eetc.model import (
    Atom, Choice, Const, Dead, Empty, Guarded, Interaction, Interleave, Loop, Message, Param,
    Predicate, Ref, Seq, Trace,
)
from eetc.oracle import MAX_BOUND, denote, interleavings
from eetc.randexpr import SMALL_DOC

from conftest import FIG2, NOT_AVAILABLE
from strategies import exprs

A = Message("A", "B", "a")
B = Message("B", "A", "b")
ia, ib = Interaction("A", "B", "a"), Interaction("B", "A", "b")


def words(e, n=6):
    return {t.events for t in denote(e, SMALL_DOC, n).traces}


def test_basic_denotations():
    assert words(Empty()) == {()}
    assert words(Dead()) == set()
    assert words(Seq(A, B)) == {(ia, ib)}
    assert words(Choice((A, B))) == {(ia,), (ib,)}
    assert words(Interleave(A, B)) == {(ia, ib), (ib, ia)}
    assert words(Loop(A, 0, 2)) == {(), (ia,), (ia, ia)}


def test_bound_cuts_unbounded_loops():
    assert words(Loop(A, 0, None), 3) == {(ia,) * k for k in range(4)}


def test_loop_of_empty_terminates():
    assert words(Loop(Empty(), 0, None)) == {()}
    assert words(Loop(Loop(Empty(), 1, None), 3, None)) == {()}


def test_high_minimum_with_empty_body_still_reaches_epsilon():
    assert words(Loop(Choice((Empty(), A)), 5, 5), 2) == {(), (ia,), (ia, ia)}


def test_guard_over_shared_parameter():
    c = lambda v: Interaction("A", "B", "c", (v,))
    m = Message("A", "B", "c", (Param("x"),))
    g = Guarded(Seq(m, m), Predicate((Atom(Param("x"), "==", Const("v")),)))
    assert words(g) == {(c("v"), c("v"))}


def test_denotation_is_sorted_and_supports_membership():
    d = denote(Choice((B, A, Seq(A, B))), SMALL_DOC, 4)
    assert list(d.traces) == sorted(d.traces)
    assert (ia, ib) in d
    assert Trace((ib,)) in d
    assert (ib, ia) not in d
    assert len(d) == 3 and d.exhaustive_to_bound


def test_bound_limits():
    with pytest.raises(BoundTooLarge):
        denote(A, SMALL_DOC, MAX_BOUND + 1)
    with pytest.raises(ValueError):
        denote(A, SMALL_DOC, -1)
    assert len(denote(A, SMALL_DOC, MAX_BOUND)) == 1


def test_unresolved_ref_rejected():
    with pytest.raises(UnresolvedRef):
        denote(Ref("X"), SMALL_DOC, 3)


def test_car_reservation_small_bounds(car, eets):
    # Bound 4 admits the empty trace and one not-available round
    # (2 * 2 * 2 assignments of f, t, c): 1 + 8 = 9.
    d4 = denote(eets["CarReservation"], car, 4)
    assert len(d4) == 9
    assert () in d4 and NOT_AVAILABLE in d4
    # Bound 5 adds 16 successful reservations and 16 rejections.
    d5 = denote(eets["CarReservation"], car, 5)
    assert len(d5) == 41
    assert FIG2 in d5


def test_successful_reservation_has_sixteen_traces(car, eets):
    d = denote(eets["SuccessfulReservation"], car, 5)
    assert len(d) == 16
    assert FIG2 in d
    assert len(denote(eets["SuccessfulReservation"], car, 4)) == 0


def test_interleavings_helper():
    assert interleavings((1, 2), (3,)) == {(1, 2, 3), (1, 3, 2), (3, 1, 2)}
    assert interleavings((), (1,)) == {(1,)}


@settings(max_examples=150, deadline=None)
@given(exprs, st.integers(0, 5))
def test_monotone_in_bound(e, n):
    small = words(e, n)
    larger = words(e, n + 1)
    assert small == {w for w in larger if len(w) <= n}


@settings(max_examples=150, deadline=None)
@given(exprs)
def test_every_trace_respects_bound(e):
    assert all(len(w) <= 4 for w in words(e, 4))
