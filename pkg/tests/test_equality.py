from __future__ import annotations

from negsimp.equality import simplify_conj, simplify_eq
from negsimp.formula import FALSE, Eq, NegEq, TypeConstraint
from negsimp.lattice import INT, NEGREAL, NONNEGREAL, POSINT, REAL, TOP, interval
from negsimp.terms import Atom, Compound, NameSupply, Num, Var


def fresh(supply, prefix, t):
    return supply.fresh(prefix, t)


def test_disequality_on_bounded_local_narrows_fresh_var():
    s = NameSupply({"X"})
    x1 = s.copy(Var("X", interval("real", -20, 20)))
    z1 = fresh(s, "Z", NEGREAL)
    out = simplify_conj((NegEq((x1,), (x1,), (z1,)), Atom("p", (z1,))), s)
    (p,) = out
    assert p.args[0].name == z1.name
    assert p.args[0].type == interval("real", float("-inf"), -20, hi_closed=False)


def test_disequality_with_nonneg_local_leaves_negreal():
    s = NameSupply({"U", "V"})
    u1 = s.copy(Var("U", NONNEGREAL))
    v1 = fresh(s, "V", REAL)
    (p,) = simplify_conj((NegEq((u1,), (u1,), (v1,)), Atom("p", (v1,))), s)
    assert p.args[0].type == NEGREAL


def test_positive_equality_binds_fresh_var_and_meets_types():
    s = NameSupply({"X"})
    x1 = s.copy(Var("X", interval("real", -20, 20)))
    z1 = fresh(s, "Z", NEGREAL)
    out = simplify_conj((Eq(x1, z1), Atom("p", (x1,))), s)
    (p,) = out
    assert p.args[0].type == interval("real", -20, 0, hi_closed=False)


def test_non_fresh_var_gets_a_type_constraint():
    s = NameSupply({"X"})
    x = Var("X", REAL)
    out = simplify_conj((TypeConstraint(x, NONNEGREAL),), s)
    assert out == (TypeConstraint(x, NONNEGREAL),)
    assert str(out[0]) == "X::real(0,pinf)"


def test_type_constraint_already_implied_is_dropped():
    x = Var("X", POSINT)
    assert simplify_conj((TypeConstraint(x, INT),), NameSupply({"X"})) == ()


def test_disjoint_types_make_equality_false():
    s = NameSupply()
    assert simplify_conj((Eq(Var("A", POSINT), Num(-1)),), s) is None
    assert simplify_eq(Eq(Num(1), Num(2)), s) == [FALSE]


def test_structural_equality_decomposes_and_clashes():
    s = NameSupply({"A", "B"})
    a, b = Var("A"), Var("B")
    assert simplify_eq(Eq(Compound("f", (a,)), Compound("f", (b,))), s) != [FALSE]
    assert simplify_eq(Eq(Compound("f", (a,)), Compound("g", (b,))), s) == [FALSE]


def test_disequality_clash_is_true():
    s = NameSupply()
    w = fresh(s, "W", TOP)
    assert simplify_conj((NegEq((w,), (Compound("f", (w,)),), (Num(3),)),), s) == ()


def test_ground_disequality():
    s = NameSupply()
    assert simplify_conj((NegEq((), (Num(1),), (Num(1),)),), s) is None
    assert simplify_conj((NegEq((), (Num(1),), (Num(2),)),), s) == ()


def test_false_absorbs():
    assert simplify_conj((Atom("p", ()), FALSE), NameSupply()) is None


def test_duplicates_removed():
    p = Atom("p", (Var("X"),))
    assert simplify_conj((p, p), NameSupply({"X"})) == (p,)
