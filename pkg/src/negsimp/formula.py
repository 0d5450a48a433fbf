"""Goal formulas: conjunctions of literals, negative goals and their digraph.

A goal formula is a plain tuple of literals.  Literals are ``Atom`` (positive),
``NegGoal``, ``NegEq``, ``Eq``, ``TypeConstraint`` and ``FALSE``.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Iterable, Mapping, Sequence

from .errors import DuplicateLocal, UnknownNode
from .lattice import NType, equiv, format_type
from .terms import Atom, Term, Var


class _False:
    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def variables(self):
        return {}

    def subst(self, theta):
        return self

    def __str__(self):
        return "false"

    __repr__ = __str__


FALSE = _False()


@dataclass(frozen=True)
class Eq:
    """Positive equation ``lhs = rhs`` that could not be solved away."""

    lhs: Term
    rhs: Term

    def variables(self):
        out = self.lhs.variables()
        for k, v in self.rhs.variables().items():
            out.setdefault(k, v)
        return out

    def subst(self, theta):
        return Eq(self.lhs.subst(theta), self.rhs.subst(theta))

    def __str__(self):
        return f"{self.lhs} = {self.rhs}"


def _drop(theta: Mapping, names) -> Mapping:
    names = set(names)
    if not names & set(theta):
        return theta
    return {k: v for k, v in theta.items() if k not in names}


@dataclass(frozen=True)
class NegEq:
    """Typed disequality ``not exists bound.(lhs = rhs)`` over term vectors."""

    bound: tuple
    lhs: tuple
    rhs: tuple

    def variables(self):
        out: dict = {}
        bound = {v.name for v in self.bound}
        for t in self.lhs + self.rhs:
            for k, v in t.variables().items():
                if k not in bound:
                    out.setdefault(k, v)
        return out

    def subst(self, theta):
        theta = _drop(theta, (v.name for v in self.bound))
        return NegEq(self.bound, tuple(t.subst(theta) for t in self.lhs), tuple(t.subst(theta) for t in self.rhs))

    def __str__(self):
        def side(ts):
            return str(ts[0]) if len(ts) == 1 else "[" + ",".join(map(str, ts)) + "]"

        return f"neg_eq({side(self.rhs)}, {side(self.lhs)}, [{','.join(map(str, self.bound))}])"


@dataclass(frozen=True)
class TypeConstraint:
    var: Var
    type: NType

    def variables(self):
        return {self.var.name: self.var}

    def subst(self, theta):
        t = theta.get(self.var.name, self.var)
        if isinstance(t, Var):
            return TypeConstraint(t, self.type)
        # a constant: keep as an equation-free check via Eq-less literal
        return _GroundCheck(t, self.type)

    def __str__(self):
        return f"{self.var.name}::{format_type(self.type)}"


@dataclass(frozen=True)
class _GroundCheck:
    term: Term
    type: NType

    def variables(self):
        return self.term.variables()

    def subst(self, theta):
        return _GroundCheck(self.term.subst(theta), self.type)

    def __str__(self):
        return f"{self.term}::{format_type(self.type)}"


# ---------------------------------------------------------------------------
# digraph


class Digraph:
    """Bipartite graph linking atom nodes (ints) with local variable nodes (names)."""

    def __init__(self, atom_nodes: Iterable[int] = (), var_nodes: Iterable[str] = (), edges=()):
        self.atoms: dict = {n: set() for n in atom_nodes}
        self.vars: dict = {v: set() for v in var_nodes}
        for a, v in edges:
            self.atoms[a].add(v)
            self.vars[v].add(a)

    @classmethod
    def build(cls, atoms: Sequence[tuple], locals_: Iterable[Var]) -> "Digraph":
        names = [v.name for v in locals_]
        lset = set(names)
        edges = [(i, n) for i, a in atoms for n in a.variables() if n in lset]
        return cls((i for i, _ in atoms), names, edges)

    def nodes(self) -> set:
        return set(self.atoms) | set(self.vars)

    def is_empty(self) -> bool:
        return not self.atoms and not self.vars

    def link(self, node, names) -> bool:
        if node in self.atoms:
            return bool(self.atoms[node] & set(names))
        if node in self.vars:
            return bool(self.vars[node] & set(names))
        raise UnknownNode(node)

    def neighbours(self, node) -> set:
        if node in self.atoms:
            return set(self.atoms[node])
        if node in self.vars:
            return set(self.vars[node])
        raise UnknownNode(node)

    def delete(self, nodes) -> "Digraph":
        nodes = set(nodes)
        unknown = nodes - self.nodes()
        if unknown:
            raise UnknownNode(sorted(map(str, unknown)))
        g = Digraph()
        g.atoms = {a: vs - nodes for a, vs in self.atoms.items() if a not in nodes}
        g.vars = {v: as_ - nodes for v, as_ in self.vars.items() if v not in nodes}
        return g

    def edges(self) -> set:
        return {(a, v) for a, vs in self.atoms.items() for v in vs}

    def __eq__(self, other):
        return (
            isinstance(other, Digraph)
            and set(self.atoms) == set(other.atoms)
            and set(self.vars) == set(other.vars)
            and self.edges() == other.edges()
        )


def digraph_delete(nodes, g: Digraph) -> Digraph:
    return g.delete(nodes)


def digraph_link(node, names, g: Digraph) -> bool:
    return g.link(node, names)


# ---------------------------------------------------------------------------
# negative goals


@dataclass(frozen=True)
class NegGoal:
    """``not exists locals.(conjunction of atoms)`` with its checklist.

    ``atoms`` is a tuple of ``(node_id, Atom)``; ``checklist`` lists node ids
    still to be tested, in FIFO order.  ``extra`` marks the residual goal an
    exists-sometimes rewrite produces; such goals are never rewritten with an
    exists-sometimes property again (that would reproduce them verbatim).
    """

    locals: tuple
    atoms: tuple
    checklist: tuple
    extra: bool = False
    graph: Digraph = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if self.graph is None:
            object.__setattr__(self, "graph", Digraph.build(self.atoms, self.locals))

    @property
    def local_names(self) -> set:
        return {v.name for v in self.locals}

    def atom(self, node: int) -> Atom:
        for i, a in self.atoms:
            if i == node:
                return a
        raise UnknownNode(node)

    def conjunction(self) -> list:
        return [a for _, a in self.atoms]

    def variables(self):
        out: dict = {}
        loc = self.local_names
        for _, a in self.atoms:
            for k, v in a.variables().items():
                if k not in loc:
                    out.setdefault(k, v)
        return out

    def subst(self, theta):
        theta = _drop(theta, self.local_names)
        if not theta:
            return self
        return replace(self, atoms=tuple((i, a.subst(theta)) for i, a in self.atoms), graph=None)

    def with_checklist(self, checklist) -> "NegGoal":
        return replace(self, checklist=tuple(checklist))

    @property
    def converged(self) -> bool:
        return bool(self.atoms) and not self.checklist

    def __str__(self):
        conj = ", ".join(str(a) for _, a in self.atoms)
        return f"neg([{','.join(map(str, self.locals))}], ({conj}))"


def init_neg(conj: Sequence[Atom], locals_: Iterable[Var]) -> NegGoal:
    seen: dict = {}
    for v in locals_:
        prev = seen.get(v.name)
        if prev is not None and not equiv(prev.type, v.type):
            raise DuplicateLocal(f"local {v.name} declared with conflicting types")
        seen.setdefault(v.name, v)
    atoms = tuple(enumerate(conj))
    return NegGoal(tuple(seen.values()), atoms, tuple(i for i, _ in atoms))


def conj_variables(conj: Iterable) -> dict:
    out: dict = {}
    for lit in conj:
        for k, v in lit.variables().items():
            out.setdefault(k, v)
    return out


def subst_conj(conj: Iterable, theta: Mapping) -> tuple:
    return tuple(lit.subst(theta) for lit in conj)


def format_conj(conj: Sequence) -> str:
    if not conj:
        return "true"
    return ", ".join(str(lit) for lit in conj)


def is_negation_free(conj: Sequence) -> bool:
    return not any(isinstance(lit, NegGoal) for lit in conj)
