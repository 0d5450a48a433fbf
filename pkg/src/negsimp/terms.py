"""Typed terms, atoms, position-indexed vectors and substitution."""
from __future__ import annotations

import re
from collections.abc import Mapping
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator

from .errors import OverlappingDomains, PositionOutOfDomain
from .lattice import BOT, TOP, Iv, NType, as_number, format_number, format_type, join, list_of, numeric

NIL = "[]"
CONS = "."


class Term:
    """Base class; every term is immutable."""

    def variables(self) -> dict:
        out: dict = {}
        self._collect(out)
        return out

    def _collect(self, out: dict) -> None:
        pass

    def subst(self, theta: Mapping) -> "Term":
        return self


@dataclass(frozen=True)
class Var(Term):
    """A variable.  Identity is the name; the type is an attribute."""

    name: str
    type: NType = field(default=TOP, compare=False)

    def _collect(self, out):
        out.setdefault(self.name, self)

    def subst(self, theta):
        return theta.get(self.name, self)

    def retyped(self, t: NType) -> "Var":
        return Var(self.name, t)

    def __str__(self):
        if self.type.kind == "top" and (self.name[0].isupper() or self.name[0] == "_"):
            return self.name
        return f"{self.name}:{format_type(self.type)}"


@dataclass(frozen=True)
class Num(Term):
    """A numeric constant; ``base`` is 'int' or 'real' (inferred if omitted)."""

    value: object
    base: str = ""

    def __post_init__(self):
        v = as_number(self.value)
        object.__setattr__(self, "value", v)
        if not self.base:
            object.__setattr__(self, "base", "int" if isinstance(v, int) else "real")

    def __str__(self):
        s = format_number(self.value)
        if self.base == "real" and isinstance(self.value, int):
            s += ".0"
        return s


@dataclass(frozen=True)
class Compound(Term):
    functor: str
    args: tuple = ()

    def _collect(self, out):
        for a in self.args:
            a._collect(out)

    def subst(self, theta):
        if not theta:
            return self
        return Compound(self.functor, tuple(a.subst(theta) for a in self.args))

    def is_list(self) -> bool:
        return (self.functor == NIL and not self.args) or (self.functor == CONS and len(self.args) == 2)

    def __str__(self):
        if self.is_list():
            items, tail = [], self
            while isinstance(tail, Compound) and tail.functor == CONS and len(tail.args) == 2:
                items.append(str(tail.args[0]))
                tail = tail.args[1]
            if isinstance(tail, Compound) and tail.functor == NIL and not tail.args:
                return "[" + ",".join(items) + "]"
            return "[" + ",".join(items) + "|" + str(tail) + "]"
        if not self.args:
            return self.functor
        return f"{self.functor}({','.join(str(a) for a in self.args)})"


def make_list(items: Iterable[Term], tail: Term | None = None) -> Term:
    out = tail if tail is not None else Compound(NIL)
    for t in reversed(list(items)):
        out = Compound(CONS, (t, out))
    return out


@dataclass(frozen=True)
class Atom:
    pred: str
    args: tuple = ()

    @property
    def arity(self) -> int:
        return len(self.args)

    def variables(self) -> dict:
        out: dict = {}
        for a in self.args:
            a._collect(out)
        return out

    def subst(self, theta: Mapping) -> "Atom":
        if not theta:
            return self
        return Atom(self.pred, tuple(a.subst(theta) for a in self.args))

    def vector(self) -> "Vector":
        return Vector({i + 1: a for i, a in enumerate(self.args)})

    def with_args(self, vec: Mapping) -> "Atom":
        args = list(self.args)
        for p, t in vec.items():
            args[p - 1] = t
        return Atom(self.pred, tuple(args))

    def __str__(self):
        if self.pred == "=" and len(self.args) == 2:
            return f"{self.args[0]} = {self.args[1]}"
        if not self.args:
            return self.pred
        return f"{self.pred}({','.join(str(a) for a in self.args)})"


class Vector(Mapping):
    """A partial map from argument positions (1-based) to terms."""

    __slots__ = ("_m",)

    def __init__(self, items=()):
        m = dict(items)
        for k in m:
            if not isinstance(k, int) or k < 1:
                raise PositionOutOfDomain(f"bad position {k!r}")
        self._m = dict(sorted(m.items()))

    def __getitem__(self, k):
        return self._m[k]

    def __iter__(self) -> Iterator[int]:
        return iter(self._m)

    def __len__(self):
        return len(self._m)

    def __eq__(self, other):
        if isinstance(other, Mapping):
            return self._m == dict(other)
        return NotImplemented

    def __hash__(self):
        return hash(tuple(self._m.items()))

    def __repr__(self):
        return "{" + ", ".join(f"{k}↦{v}" for k, v in self._m.items()) + "}"

    def dom(self) -> frozenset:
        return frozenset(self._m)

    def values_list(self) -> list:
        return list(self._m.values())

    def variables(self) -> dict:
        out: dict = {}
        for t in self._m.values():
            t._collect(out)
        return out

    def subst(self, theta) -> "Vector":
        return Vector({k: v.subst(theta) for k, v in self._m.items()})


EPSILON = Vector()


def project(vec: Mapping, positions) -> Vector:
    positions = set(positions)
    missing = positions - set(vec)
    if missing:
        raise PositionOutOfDomain(f"positions {sorted(missing)} not in domain")
    return Vector({p: vec[p] for p in positions})


def juxtapose(a: Mapping, b: Mapping) -> Vector:
    overlap = set(a) & set(b)
    if overlap:
        raise OverlappingDomains(f"positions {sorted(overlap)} in both vectors")
    return Vector({**dict(a), **dict(b)})


def all_diff(vec: Mapping) -> bool:
    vals = list(vec.values())
    return len(set(vals)) == len(vals)


def term_vars(e) -> dict:
    """Free variables of a term, atom, vector or literal, as name -> Var."""
    return e.variables()


def apply(theta: Mapping, e):
    """Simultaneous substitution of ``theta`` (name -> Term) into ``e``."""
    return e.subst(theta)


def type_of(t: Term) -> NType:
    if isinstance(t, Var):
        return t.type
    if isinstance(t, Num):
        return numeric(t.base, [Iv(t.value, True, t.value, True)])
    if isinstance(t, Compound):
        if t.functor == NIL and not t.args:
            return list_of(BOT)
        if t.functor == CONS and len(t.args) == 2:
            tail = type_of(t.args[1])
            elem = tail.elem if tail.kind == "list" else TOP
            return list_of(join(type_of(t.args[0]), elem))
        # Herbrand terms other than lists denote ground terms, i.e. top
        return TOP
    raise TypeError(f"not a term: {t!r}")


def term_size(t) -> int:
    if isinstance(t, Compound):
        return 1 + sum(term_size(a) for a in t.args)
    if isinstance(t, Atom):
        return 1 + sum(term_size(a) for a in t.args)
    return 1


_TRAILING_DIGITS = re.compile(r"\d+$")


class NameSupply:
    """Issues variable names never used before in one engine run.

    ``fresh('Z')`` gives ``Z1, Z2, ...``; ``copy(var)`` derives the name from
    the variable being renamed (``U`` -> ``U1``, ``X2`` -> ``X2_1``).
    """

    def __init__(self, taken: Iterable[str] = ()):
        self.taken = set(taken)
        self.issued: set = set()
        self._counters: dict = {}

    def reserve(self, names: Iterable[str]) -> None:
        self.taken.update(names)

    def _next(self, base: str) -> str:
        sep = "_" if _TRAILING_DIGITS.search(base) else ""
        n = self._counters.get(base, 0)
        while True:
            n += 1
            name = f"{base}{sep}{n}"
            if name not in self.taken:
                break
        self._counters[base] = n
        self.taken.add(name)
        self.issued.add(name)
        return name

    def fresh(self, prefix: str = "Z", type: NType = TOP) -> Var:
        return Var(self._next(prefix), type)

    def copy(self, var: Var, type: NType | None = None, prefix: str | None = None) -> Var:
        return Var(self._next(prefix or var.name), var.type if type is None else type)

    def is_fresh(self, name: str) -> bool:
        return name in self.issued


_default_supply = NameSupply()


def freshvar(t: NType = TOP, prefix: str = "Z", supply: NameSupply | None = None) -> Var:
    return (supply or _default_supply).fresh(prefix, t)


def num(v, base: str = "") -> Num:
    if isinstance(v, str):
        if not base and "." in v:
            base = "real"
        v = Fraction(v)
    return Num(v, base)
