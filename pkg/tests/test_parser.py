from __future__ import annotations

from fractions import Fraction
from pathlib import Path

import pytest

from negsimp.errors import ParseError
from negsimp.formula import init_neg
from negsimp.lattice import INT, POSREAL, TOP, interval, list_of, param
from negsimp.parser import parse_goal, parse_model, parse_properties, parse_session, parse_term, parse_type
from negsimp.properties import arithmetic_seeds
from negsimp.terms import Compound, Num, Var

DATA = Path(__file__).parent / "data"
GOALS = ["chain5.pl", "f0.pl", "session1.pl", "session2.pl", "svt.pl"]


@pytest.mark.parametrize("name", GOALS)
def test_goal_round_trip(name):
    _, conj, locals_ = parse_session((DATA / name).read_text())
    again = parse_goal(str(init_neg(conj, locals_)) + ".")
    assert tuple(again[0]) == tuple(conj) and tuple(again[1]) == tuple(locals_)


def test_both_argument_orders():
    a = parse_goal("neg([X], (p(X, Y))).")
    b = parse_goal("neg((p(X, Y)), [X]).")
    assert tuple(a[0]) == tuple(b[0]) and tuple(a[1]) == tuple(b[1])


def test_annotations_spread_to_every_occurrence():
    conj, locals_ = parse_goal("neg([X:int(0,20)], (sq(X, Y:posint), b(X))).")
    assert conj[1].args[0].type == interval("int", 0, 20)
    assert locals_[0].type == interval("int", 0, 20)


def test_conflicting_annotations():
    with pytest.raises(ParseError):
        parse_goal("neg([X:int], (p(X:real))).")


@pytest.mark.parametrize("p", arithmetic_seeds(), ids=str)
def test_property_round_trip(p):
    (q,) = parse_properties(str(p) + ".")
    assert (q.kind, q.predicate, q.slots, q.indices) == (p.kind, p.predicate, p.slots, p.indices)


def test_declaration_wrapper_and_session():
    props, conj, locals_ = parse_session((DATA / "session2.pl").read_text())
    assert [p.predicate for p in props] == ["append", "sort"]
    assert props[0].slots[0].type == list_of(param("Beta"))
    assert [v.name for v in locals_] == ["W", "Z"]


def test_numbers():
    assert parse_term("-0.5") == Num(Fraction(-1, 2), "real")
    assert parse_term("3") == Num(3)
    assert parse_term("1/3") == Num(Fraction(1, 3), "real")


def test_lists_and_compounds():
    t = parse_term("[1, f(X)]")
    assert isinstance(t, Compound)
    assert Var("X") in t.variables().values()


def test_type_syntax():
    assert parse_type("top") == TOP
    assert parse_type("posreal") == POSREAL
    assert parse_type("real(o(0),pinf)") == POSREAL
    assert parse_type("int") == INT
    assert parse_type("list(Beta)") == list_of(param("Beta"))


def test_error_reports_position():
    with pytest.raises(ParseError) as exc:
        parse_goal("neg([X],\n  (p(X,,Y))).")
    assert exc.value.line == 2 and exc.value.column == 8  # the second comma, 1-based


def test_unknown_type_name():
    with pytest.raises(ParseError, match="unknown type"):
        parse_type("complex")


def test_comments_are_ignored():
    conj, _ = parse_goal("% leading\nneg([X], (p(X))). % trailing")
    assert conj[0].pred == "p"


def test_model_file():
    m = parse_model((DATA / "svt_model.pl").read_text())
    assert m.int_range == (-2, 30)
    assert m.extensions[("b", 1)] == {(1,), (4,), (5,), (25,)}


def test_model_arity_mismatch():
    with pytest.raises(ParseError, match="arity"):
        parse_model("extension p/2 = {(1)}.")
