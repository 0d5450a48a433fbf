from __future__ import annotations

import pytest

from conftest import chain
from negsimp.errors import (
    DuplicateLocal,
    InvalidProperty,
    OverlappingDomains,
    PositionOutOfDomain,
    UnknownNode,
)
from negsimp.formula import FALSE, Digraph, Eq, NegEq, TypeConstraint, init_neg, is_negation_free
from negsimp.lattice import INT, NEGINT, POSINT, REAL, TOP, interval, list_of
from negsimp.properties import (
    ExistenceProperty,
    PropertyStore,
    chan_property,
    default_store,
    es,
    eu,
    exists,
    i,
    misc,
    o,
    validate,
)
from negsimp.terms import Atom, Compound, NameSupply, Num, Var, Vector, juxtapose, make_list, project, type_of


# -- terms ---------------------------------------------------------------------

def test_vector_algebra():
    v = Vector({1: Var("A"), 3: Num(2)})
    assert project(v, [3]) == Vector({3: Num(2)})
    assert juxtapose(project(v, [1]), project(v, [3])) == v
    with pytest.raises(PositionOutOfDomain):
        project(v, [2])
    with pytest.raises(OverlappingDomains):
        juxtapose(v, {1: Num(0)})
    with pytest.raises(PositionOutOfDomain):
        Vector({0: Num(1)})


def test_atom_vector_and_with_args():
    a = Atom("add", (Var("X"), Var("Y"), Num(1)))
    assert a.vector()[3] == Num(1)
    assert a.with_args({2: Var("T")}).args == (Var("X"), Var("T"), Num(1))


def test_types_of_terms():
    assert type_of(Num(3)) == interval("int", 3, 3)
    assert type_of(make_list([Num(1), Num(2)])) == list_of(interval("int", 1, 2))
    assert type_of(Compound("f", (Num(1),))) == TOP


def test_name_supply():
    s = NameSupply({"Z1", "U"})
    z = s.fresh("Z", POSINT)
    assert z.name == "Z2" and z.type == POSINT
    u = s.copy(Var("U", INT))
    assert u.name == "U1" and u.type == INT
    assert s.is_fresh("Z2") and not s.is_fresh("U")


def test_var_printing():
    assert str(Var("X")) == "X"
    assert str(Var("x")) == "x:top"
    assert str(Var("X", POSINT)) == "X:int(1,pinf)"


# -- formulas ------------------------------------------------------------------

def test_chain_digraph():
    atoms, locals_ = chain(3)
    g = init_neg(atoms, locals_).graph
    # atoms p(X3,X4)=0, p(X2,X3)=1, p(X1,X2)=2; X1 is global
    assert g.neighbours("X3") == {0, 1}
    assert g.neighbours(2) == {"X2"}
    assert g.link(1, {"X2"}) and not g.link(0, {"X2"})
    h = g.delete({2, "X2"})
    assert h.nodes() == {0, 1, "X3", "X4"}
    assert h.neighbours(1) == {"X3"}
    with pytest.raises(UnknownNode):
        g.delete({7})


def test_f0_digraph(f0_goal):
    g = init_neg(*f0_goal).graph
    assert g.edges() == {(0, "X"), (1, "X"), (1, "U")}


def test_duplicate_locals():
    x = Var("X", INT)
    assert init_neg([Atom("p", (x,))], [x, x]).locals == (x,)
    with pytest.raises(DuplicateLocal):
        init_neg([Atom("p", (x,))], [x, Var("X", REAL)])


def test_literal_printing():
    a, b = Var("A"), Var("B", POSINT)
    assert str(Eq(a, b)) == "A = B:int(1,pinf)"
    assert str(NegEq((b,), (b,), (a,))) == "neg_eq(A, B:int(1,pinf), [B:int(1,pinf)])"
    assert str(TypeConstraint(a, INT)) == "A::int"
    assert str(FALSE) == "false"


def test_negation_free():
    x = Var("X")
    assert is_negation_free((Atom("p", (x,)), Eq(x, Num(1))))
    assert not is_negation_free((init_neg([Atom("p", (x,))], [x]),))


def test_subst_leaves_locals_alone():
    x, y = Var("X"), Var("Y")
    g = init_neg([Atom("p", (x, y))], [x])
    h = g.subst({"X": Num(1), "Y": Num(2)})
    assert h.conjunction() == [Atom("p", (x, Num(2)))]


# -- properties ----------------------------------------------------------------

def test_property_shape(sq_es):
    assert sq_es.arity == 2
    assert [pos for pos, _ in sq_es.inputs] == [2]
    assert [pos for pos, _ in sq_es.outputs] == [1]
    assert str(sq_es) == "es(sq(o([(1,int(minf,-1)),(2,int(1,pinf))]),i(int(1,pinf))),[1,2])"


@pytest.mark.parametrize("build", [
    lambda: eu("p", [i(TOP), o({1: TOP, 2: TOP})]),           # domain differs from I
    lambda: es("p", [i(TOP), o({1: TOP})], ()),               # empty I
    lambda: eu("p", [i(interval("int", 1, 0)), o({1: TOP})]),  # bot input
    lambda: exists("p", [i(TOP), o({1: TOP, 2: TOP})]),
    lambda: misc(Atom("lt", (Var("X"), Var("X"))), Atom("ge", (Var("X"), Var("X")))),
    lambda: misc(Atom("lt", (Var("X"), Var("Y"))), Atom("ge", (Var("X"), Var("Z")))),
])
def test_invalid_properties(build):
    with pytest.raises(InvalidProperty):
        validate(build())
    with pytest.raises(InvalidProperty):
        PropertyStore([build()])


def test_store_lookup_order_and_arity():
    store = default_store()
    kinds = [p.kind for p in store.lookup("sq", 2, ("eu", "es"))]
    assert kinds == ["eu", "eu", "es"]
    with pytest.raises(InvalidProperty):
        store.declare(eu("sq", [i(TOP), i(TOP), o({1: TOP})]))


def test_chan_property_generated_on_demand():
    store = PropertyStore([], chan=True)
    (p,) = store.lookup("=s/1", 2, ("es",))
    assert p == chan_property("=s/1", 2)
    assert PropertyStore([], chan=False).lookup("=s/1", 2, ("es",)) == []


def test_store_counts():
    store = default_store()
    assert store.count("add") == 3
    assert len(store) == sum(1 for _ in store)
