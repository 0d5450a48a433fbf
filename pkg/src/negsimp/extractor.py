"""Extractability test and local-variable introduction for one atom."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional

from .errors import TheoremViolation, TypeLatticeError
from .lattice import (
    TOP,
    collect_bindings,
    instantiate,
    intersect,
    is_empty,
    may_intersect,
    subtype,
)
from .properties import ExistenceProperty, In, Out
from .terms import Atom, NameSupply, Var, Vector, type_of


@dataclass(frozen=True)
class SqvtResult:
    """Result of a successful extraction test.

    ``copies`` maps each relevant index ``j`` to a typed fresh copy of ``xvec``.
    ``tvec`` holds the fresh intermediate variables that replaced ``svec``.
    """

    atom: Atom
    xvec: Vector
    copies: tuple  # ((j, Vector), ...) in ascending j
    svec: Vector
    tvec: Vector
    rvec: Vector
    wvec: tuple  # local Vars, discovery order
    J: tuple
    thetas: dict = field(default_factory=dict, compare=False)

    @property
    def x_cs(self) -> list:
        return [c for _, c in self.copies]


@dataclass
class Stats:
    sqvt_calls: int = 0
    slot_visits: int = 0
    max_visits_per_call: int = 0
    extractions: int = 0

    def snapshot(self) -> dict:
        return {
            "sqvt_calls": self.sqvt_calls,
            "slot_visits": self.slot_visits,
            "max_visits_per_call": self.max_visits_per_call,
            "extractions": self.extractions,
        }


# switched on by the test suite; costs one extra pass per call
CHECK_THEOREMS = False
THEOREM_CHECKS = 0


def _bindings(p: ExistenceProperty, g: Atom) -> dict:
    acc: dict = {}
    for pos, slot in enumerate(p.slots, 1):
        actual = type_of(g.args[pos - 1])
        if isinstance(slot, In):
            collect_bindings(actual, slot.type, acc)
    return acc


def input_ok(p: ExistenceProperty, g: Atom, locals_: set) -> bool:
    """The admission condition on input arguments: typed and local-free."""
    if p.predicate != g.pred or p.arity != g.arity:
        return False
    bind = _bindings(p, g)
    for pos, slot in p.inputs:
        arg = g.args[pos - 1]
        if set(arg.variables()) & locals_:
            return False
        if not subtype(type_of(arg), instantiate(slot.type, bind)):
            return False
    return True


def _theta_vec(p: ExistenceProperty, j: int, bind: dict) -> dict:
    return {pos: instantiate(slot.theta(j), bind) for pos, slot in p.outputs}


def sqvt(
    p: ExistenceProperty,
    g: Atom,
    locals_: Iterable[str],
    supply: NameSupply,
    stats: Optional[Stats] = None,
) -> Optional[SqvtResult]:
    """Return the extraction of ``g`` under ``p`` or ``None``.

    ``locals_`` are variable names.  Fresh variables come from ``supply``.
    """
    locals_ = set(locals_)
    res = _sqvt(p, g, locals_, supply, stats)
    if CHECK_THEOREMS:
        check_theorems(p, g, locals_, res)
    return res


def _sqvt(p, g, locals_, supply, stats):
    visits = 0
    if stats is not None:
        stats.sqvt_calls += 1
    try:
        if p.predicate != g.pred or p.arity != g.arity:
            return None
        bind = _bindings(p, g)
        for pos, slot in p.inputs:
            visits += 1
            arg = g.args[pos - 1]
            if set(arg.variables()) & locals_:
                return None
            if not subtype(type_of(arg), instantiate(slot.type, bind)):
                return None
        outputs = p.outputs
        thetas = {j: _theta_vec(p, j, bind) for j in p.indices}
        arg_types = {}
        for pos, _ in outputs:
            visits += 1
            arg_types[pos] = type_of(g.args[pos - 1])
        J = tuple(
            j for j in p.indices if all(may_intersect(arg_types[pos], thetas[j][pos]) for pos, _ in outputs)
        )

        rvec: dict = {}
        svec: dict = {}
        tvec: dict = {}
        placed: set = set()
        for pos, _ in outputs:
            visits += 1
            arg = g.args[pos - 1]
            keep = (
                isinstance(arg, Var)
                and arg.name in locals_
                and arg.name not in placed
                and all(subtype(thetas[j][pos], arg.type) for j in J)
            )
            if keep:
                rvec[pos] = arg
                placed.add(arg.name)
            else:
                svec[pos] = arg
                tvec[pos] = supply.fresh("T", TOP)

        wvec: list = []
        seen: set = set()
        for arg in svec.values():
            for name, v in arg.variables().items():
                if name in locals_ and name not in placed and name not in seen:
                    seen.add(name)
                    wvec.append(v)

        atom = g.with_args(tvec)
        xvec = Vector({pos: atom.args[pos - 1] for pos, _ in outputs})
        copies = []
        for j in J:
            copy = {}
            for pos, _ in outputs:
                if pos in rvec:
                    copy[pos] = supply.copy(rvec[pos], thetas[j][pos])
                else:
                    copy[pos] = supply.fresh("Z", thetas[j][pos])
            copies.append((j, Vector(copy)))
        return SqvtResult(
            atom, xvec, tuple(copies), Vector(svec), Vector(tvec), Vector(rvec), tuple(wvec), J, thetas
        )
    finally:
        if stats is not None:
            stats.slot_visits += visits
            stats.max_visits_per_call = max(stats.max_visits_per_call, visits)


def check_theorems(p: ExistenceProperty, g: Atom, locals_: set, res: Optional[SqvtResult]) -> None:
    """Assert the extractor postconditions on one call; raise TheoremViolation."""
    global THEOREM_CHECKS
    THEOREM_CHECKS += 1

    def fail(msg):
        raise TheoremViolation(f"{msg} [{p} on {g}]")

    ok = input_ok(p, g, locals_)
    if ok != (res is not None):
        fail("a) result presence disagrees with the input condition")
    if res is None:
        return
    out_pos = {pos for pos, _ in p.outputs}
    if set(res.svec) | set(res.rvec) != out_pos or set(res.svec) & set(res.rvec):
        fail("s and r do not partition the output positions")
    if set(res.tvec) != set(res.svec):
        fail("dom(t) differs from dom(s)")
    rnames = [v.name for v in res.rvec.values()]
    if len(set(rnames)) != len(rnames) or not all(n in locals_ for n in rnames):
        fail("r is not a list of distinct locals")
    # b) maximality
    for pos in res.svec:
        arg = g.args[pos - 1]
        if isinstance(arg, Var) and arg.name in locals_ and arg.name not in rnames:
            if all(subtype(res.thetas[j][pos], arg.type) for j in res.J):
                fail(f"b) position {pos} could have joined r")
    # c) G' = G[s/t]
    for pos, arg in enumerate(g.args, 1):
        want = res.tvec[pos] if pos in res.tvec else arg
        if res.atom.args[pos - 1] != want:
            fail(f"c) argument {pos} of G' is wrong")
    # d) x is the output vector of G'
    if dict(res.xvec) != {pos: res.atom.args[pos - 1] for pos in out_pos}:
        fail("d) x is not the output vector of G'")
    # e) one fresh, correctly typed copy per relevant index
    if len(res.copies) != len(res.J) or [j for j, _ in res.copies] != list(res.J):
        fail("e) copies do not match J")
    used = set(g.variables()) | {v.name for v in res.tvec.values()}
    names: set = set()
    for j, copy in res.copies:
        if set(copy) != out_pos:
            fail("e) copy domain differs from the output positions")
        for pos, v in copy.items():
            if not isinstance(v, Var) or v.name in used or v.name in names:
                fail("e) copy is not alpha-fresh")
            names.add(v.name)
            if v.type != res.thetas[j][pos]:
                fail(f"e) copy for index {j} has the wrong type at {pos}")
    # relevance
    for j in res.thetas:
        rel = True
        for pos in out_pos:
            try:
                rel = rel and not is_empty(intersect(type_of(g.args[pos - 1]), res.thetas[j][pos]))
            except TypeLatticeError:
                pass
        if rel != (j in res.J):
            fail(f"relevance of index {j} is wrong")
