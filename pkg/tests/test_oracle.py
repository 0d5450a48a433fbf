from __future__ import annotations

from fractions import Fraction

import pytest

from negsimp.engine import simplify
from negsimp.errors import MissingCarrier, NegSimpError
from negsimp.formula import FALSE, Eq, NegEq, NegGoal, TypeConstraint, init_neg
from negsimp.lattice import INT, POSINT, POSREAL, REAL, interval, list_of
from negsimp.oracle import FiniteModel, GTerm, audit_property, check_equivalence, evaluate, int_model
from negsimp.properties import chan_property, es, eu, i, integer_arithmetic, misc, o
from negsimp.lattice import NEGINT
from negsimp.terms import Atom, Compound, Num, Var


def test_eval_negated_add_with_bound():
    # not exists z:int.(add(2,3,z), z > 10): z is 5, so the negation holds
    z = Var("Z", INT)
    g = init_neg([Atom("add", (Num(2), Num(3), z)), Atom("lt", (Num(10), z))], [z])
    assert evaluate((g,), {}, int_model(-20, 20)) is True


def test_eval_false():
    assert evaluate(FALSE, {}, int_model(0, 1)) is False
    assert evaluate((FALSE,), {}, int_model(0, 1)) is False


def test_eval_svt_goal_matches_its_three_disjuncts():
    x = Var("X", interval("int", 0, 20))
    y = Var("Y", POSINT)
    z = Var("Z", POSINT)
    x1 = Var("X1", interval("int", 0, 20))
    m = int_model(-25, 25, extensions={("b", 1): {(2,), (3,), (16,)}})
    goal = (init_neg([Atom("sq", (x, y)), Atom("b", (x,))], [x]),)
    d1 = (NegGoal((z,), ((0, Atom("sq", (z, y))),), (0,)),)
    d2 = (Atom("sq", (z, y)), NegEq((x1,), (x1,), (z,)))
    d3 = (Atom("sq", (z, y)), Eq(x1, z), init_neg([Atom("b", (x1,))], []))
    for yv in range(1, 21):
        lhs = evaluate(goal, {"Y": yv}, m)
        rhs = any(evaluate(d, {"Y": yv}, m) for d in (d1, d2, d3))
        assert lhs == rhs, yv


def test_eval_type_constraint_and_neg_eq():
    m = int_model(-3, 3)
    v = Var("V", INT)
    assert evaluate((TypeConstraint(v, interval("int", 0, 2)),), {"V": 1}, m)
    assert not evaluate((TypeConstraint(v, interval("int", 0, 2)),), {"V": 3}, m)
    w = Var("W", interval("int", 0, 1))
    lit = NegEq((w,), (w,), (v,))
    assert evaluate((lit,), {"V": 2}, m)
    assert not evaluate((lit,), {"V": 1}, m)


def test_eval_unknown_predicate_raises():
    with pytest.raises(NegSimpError):
        evaluate((Atom("mystery", (Num(1),)),), {}, int_model(0, 1))


def test_eval_lists_and_compounds():
    m = FiniteModel(carriers={"top": [GTerm("s", (1,)), 1]})
    x, y = Var("X"), Var("Y")
    assert evaluate((Atom("=", (x, Compound("s", (y,)))),), {"X": GTerm("s", (1,))}, m)
    assert not evaluate((Atom("=", (x, Compound("s", (y,)))),), {"X": 1}, m)
    lst = Compound(".", (Num(1), Compound("[]")))
    assert evaluate((Eq(Var("L", list_of(INT)), lst),), {"L": (1,)}, m)


def test_check_equivalence_identity():
    x = Var("X", interval("int", -3, 3))
    g = (init_neg([Atom("sq", (x, Var("Y", interval("int", 0, 9))))], [x]),)
    v = check_equivalence(g, [g], int_model(-3, 9))
    assert v.passed and v.exhaustive and v.checked == 10


def test_check_equivalence_f0(f0_goal):
    conj, locals_ = f0_goal
    f = simplify(conj, locals_)
    m = FiniteModel(carriers={"real": list(range(-30, 31))})
    ys = [k * k for k in range(31)] + [Fraction(1, 4), Fraction(9, 4)]
    v = check_equivalence((init_neg(conj, locals_),), f.conjunctions, m, global_carriers={"Y": ys})
    assert v.passed
    assert v.checked == 32  # y = 0 is not a positive real


def test_corrupted_frontier_yields_counterexample(f0_goal):
    conj, locals_ = f0_goal
    f = simplify(conj, locals_)
    m = FiniteModel(carriers={"real": list(range(-30, 31))})
    ys = [k * k for k in range(1, 31)]
    # drop the disjunct with two large roots: every y > 400 loses its witness
    broken = f.conjunctions[1:]
    v = check_equivalence((init_neg(conj, locals_),), broken, m, global_carriers={"Y": ys})
    assert not v.passed
    assert v.counterexample["Y"] == 441
    assert v.counterexample["<before>"] is True


def test_missing_carrier():
    far = Var("Y", interval("int", 100, 200))
    g = (init_neg([Atom("sq", (Var("X", INT), far))], [Var("X", INT)]),)
    with pytest.raises(MissingCarrier):
        check_equivalence(g, [g], int_model(-8, 8))
    with pytest.raises(MissingCarrier):
        audit_property(eu("sq", [i(interval("int", 50, 60)), o({1: INT})]), int_model(-8, 8))


def test_int_carrier_exactness():
    m = int_model(-8, 8)
    assert m.values(interval("int", 0, 3)) == ([0, 1, 2, 3], True)
    vals, exact = m.values(INT)
    assert len(vals) == 17 and not exact
    vals, exact = m.values(REAL)
    assert not exact


# -- audits -----------------------------------------------------------------


def test_audit_sq_es_over_posint():
    p = es("sq", [o({1: NEGINT, 2: POSINT}), i(POSINT)], (1, 2))
    v = audit_property(p, int_model(-10, 10))
    assert v.passed and not v.warnings and v.checked == 10


def test_audit_truncated_add_is_boundary_warning():
    p = eu("add", [i(INT), i(INT), o({1: INT})])
    v = audit_property(p, int_model(-2, 2))
    assert v.passed
    assert not v.violations
    assert ({1: 2, 2: 2}, "solution outside the carrier") in v.warnings


def test_audit_misc_lt():
    p = integer_arithmetic()[-1]
    assert p.kind == "misc"
    v = audit_property(p, int_model(-3, 3))
    assert v.passed and v.checked == 49


def test_audit_detects_wrong_misc():
    wrong = misc(Atom("lt", (Var("X", INT), Var("Y", INT))), Atom("lt", (Var("Y", INT), Var("X", INT))))
    v = audit_property(wrong, int_model(-3, 3))
    assert not v.passed
    assert v.counterexample == {1: -3, 2: -3}


def test_audit_detects_wrong_eu():
    # sq has two real roots, so claiming exactly one over all reals is false
    wrong = eu("sq", [o({1: REAL}), i(interval("int", 1, 9))])
    v = audit_property(wrong, int_model(-10, 10))
    assert not v.passed
    assert v.counterexample == {2: 1}


def test_audit_chan_property():
    p = chan_property("=s/1", 2)
    dom = [GTerm("s", (k,)) for k in range(-10, 11)] + list(range(-10, 11))
    v = audit_property(p, int_model(-10, 10), domain={1: dom})
    assert v.passed and v.checked == 42


def test_missing_irrational_witness_is_inconclusive():
    # sq(Z,Y) with Z a positive real holds for every Y >= 1, but the search
    # only finds rational roots, so Y = 2 and Y = 3 cannot be confirmed
    y = Var("Y", interval("int", 1, 4))
    z = Var("Z", POSREAL)
    v = check_equivalence((Atom("sq", (z, y)),), [()], int_model(-5, 5), globals_=[y])
    assert v.passed and not v.exhaustive
    assert [w["Y"] for w in v.warnings] == [2, 3]
