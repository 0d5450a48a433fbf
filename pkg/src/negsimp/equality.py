"""Typed simplification of equations, disequations and type constraints.

Variables issued by the engine's ``NameSupply`` are existential at the level
of the conjunction that holds them, so their types may be narrowed in place
and they may be eliminated.  Variables of the original goal are never
retyped; restrictions on them are kept as ``TypeConstraint`` literals.
"""
from __future__ import annotations

from typing import Optional

from .formula import FALSE, Eq, NegEq, NegGoal, TypeConstraint, _GroundCheck
from .lattice import difference, intersect, is_empty, may_intersect, member, subtype
from .terms import Compound, NameSupply, Num, Var, type_of


def _clash(a, b) -> bool:
    """Can ``a = b`` be refuted without knowing any variable's value?"""
    if isinstance(a, Num) and isinstance(b, Num):
        return a.value != b.value
    if isinstance(a, Num) and isinstance(b, Compound) or isinstance(a, Compound) and isinstance(b, Num):
        return True
    if isinstance(a, Compound) and isinstance(b, Compound):
        if a.functor != b.functor or len(a.args) != len(b.args):
            return True
        return any(_clash(x, y) for x, y in zip(a.args, b.args))
    return not may_intersect(type_of(a), type_of(b))


def _occurs(v: Var, t) -> bool:
    return v.name in t.variables() and not (isinstance(t, Var) and t.name == v.name)


class _Result:
    """Outcome of simplifying one literal."""

    __slots__ = ("lits", "theta")

    def __init__(self, lits=None, theta=None):
        self.lits = lits  # replacement literals, or None for "unchanged"
        self.theta = theta or {}


_FALSE = _Result([FALSE])
_DROP = _Result([])
_KEEP = _Result(None)


def _narrow(v: Var, t, supply: NameSupply) -> _Result:
    """Restrict variable ``v`` to type ``t`` (already a subset of v.type or not)."""
    meet = intersect(v.type, t)
    if is_empty(meet):
        return _FALSE
    if meet == v.type or subtype(v.type, meet):
        return _DROP
    if supply.is_fresh(v.name):
        return _Result([], {v.name: v.retyped(meet)})
    return _Result([TypeConstraint(v, meet)])


def _eq(lit: Eq, supply: NameSupply) -> _Result:
    a, b = lit.lhs, lit.rhs
    if a == b:
        return _DROP
    if isinstance(a, Compound) and isinstance(b, Compound):
        if a.functor != b.functor or len(a.args) != len(b.args):
            return _FALSE
        return _Result([Eq(x, y) for x, y in zip(a.args, b.args)])
    if _clash(a, b):
        return _FALSE
    if isinstance(a, Var) and isinstance(b, Var):
        meet = intersect(a.type, b.type)
        if is_empty(meet):
            return _FALSE
        # eliminate a fresh variable, preferring the left one
        for gone, kept in ((a, b), (b, a)):
            if supply.is_fresh(gone.name):
                if supply.is_fresh(kept.name):
                    nk = kept.retyped(meet)
                    return _Result([], {gone.name: nk, kept.name: nk})
                extra = [] if subtype(kept.type, meet) else [TypeConstraint(kept, meet)]
                return _Result(extra, {gone.name: kept})
        return _KEEP
    var, term = (a, b) if isinstance(a, Var) else (b, a)
    if not isinstance(var, Var):
        return _KEEP
    if not supply.is_fresh(var.name) or _occurs(var, term):
        return _KEEP
    tt = type_of(term)
    if isinstance(term, Num):
        if not member(term.value, var.type):
            return _FALSE
        return _Result([], {var.name: term})
    if subtype(tt, var.type):
        return _Result([], {var.name: term})
    return _KEEP


def _neg_eq(lit: NegEq, supply: NameSupply) -> _Result:
    pairs = []
    changed = False
    stack = list(zip(lit.lhs, lit.rhs))
    while stack:
        a, b = stack.pop(0)
        if a == b:
            changed = True
            continue
        if isinstance(a, Compound) and isinstance(b, Compound) and a.functor == b.functor and len(a.args) == len(b.args):
            stack[0:0] = list(zip(a.args, b.args))
            changed = True
            continue
        if _clash(a, b):
            return _DROP
        pairs.append((a, b))
    if not pairs:
        return _FALSE
    occurring = set()
    for a, b in pairs:
        occurring |= set(a.variables()) | set(b.variables())
    bound = tuple(v for v in lit.bound if v.name in occurring)
    if len(bound) != len(lit.bound):
        changed = True
    bnames = {v.name for v in bound}

    if len(pairs) == 1:
        a, b = pairs[0]
        for w, other in ((a, b), (b, a)):
            if isinstance(w, Var) and w.name in bnames and not (set(other.variables()) & bnames):
                bw = next(v for v in bound if v.name == w.name)
                if len(bound) != 1:
                    break
                if isinstance(other, Var):
                    diff = difference(other.type, bw.type)
                    if diff is None:
                        break
                    return _narrow(other, diff, supply)
                if isinstance(other, Num):
                    return _FALSE if member(other.value, bw.type) else _DROP
                if bw.type.kind == "top":
                    return _FALSE
                break
        if not bnames:
            for v, c in ((a, b), (b, a)):
                if isinstance(v, Var) and isinstance(c, Num):
                    diff = difference(v.type, type_of(c))
                    if diff is not None:
                        return _narrow(v, diff, supply)
    if changed:
        return _Result([NegEq(bound, tuple(a for a, _ in pairs), tuple(b for _, b in pairs))])
    return _KEEP


def _type_constraint(lit: TypeConstraint, supply: NameSupply) -> _Result:
    return _narrow(lit.var, lit.type, supply)


def _ground(lit: _GroundCheck, supply: NameSupply) -> _Result:
    t = type_of(lit.term)
    if isinstance(lit.term, Num):
        return _DROP if member(lit.term.value, lit.type) else _FALSE
    if subtype(t, lit.type):
        return _DROP
    if not may_intersect(t, lit.type):
        return _FALSE
    return _KEEP


def simplify_literal(lit, supply: NameSupply) -> _Result:
    if lit is FALSE:
        return _FALSE
    if isinstance(lit, Eq):
        return _eq(lit, supply)
    if isinstance(lit, NegEq):
        return _neg_eq(lit, supply)
    if isinstance(lit, TypeConstraint):
        return _type_constraint(lit, supply)
    if isinstance(lit, _GroundCheck):
        return _ground(lit, supply)
    if isinstance(lit, NegGoal) and not lit.atoms:
        return _FALSE
    return _KEEP


def simplify_conj(conj, supply: NameSupply) -> Optional[tuple]:
    """Simplify literals to a fixpoint; ``None`` means the conjunction is false."""
    conj = list(conj)
    i = 0
    while i < len(conj):
        res = simplify_literal(conj[i], supply)
        if res.lits is not None and any(l is FALSE for l in res.lits):
            return None
        if res.lits is None or (res.lits == [conj[i]] and not res.theta):
            i += 1
            continue
        conj[i : i + 1] = res.lits
        if res.theta:
            conj = [l.subst(res.theta) for l in conj]
            i = 0
    # merge duplicate literals, keeping first occurrence
    out, seen = [], set()
    for lit in conj:
        key = str(lit)
        if key in seen:
            continue
        seen.add(key)
        out.append(lit)
    return tuple(out)


def simplify_eq(lit, supply: NameSupply) -> list:
    """Simplify one equation or disequation; ``[FALSE]`` when it fails."""
    res = simplify_conj([lit], supply)
    return [FALSE] if res is None else list(res)
