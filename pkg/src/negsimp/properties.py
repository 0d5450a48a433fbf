"""Typed existence properties and the store that indexes them."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional

from .errors import InvalidProperty, TypeLatticeError
from .lattice import (
    INT,
    NEGINT,
    NEGREAL,
    NONNEGINT,
    NONNEGREAL,
    POSINT,
    POSREAL,
    REAL,
    TOP,
    NType,
    format_type,
    intersect,
    is_empty,
    normalize,
    params_of,
)
from .terms import Atom, Var

KINDS = ("eu", "es", "exists", "misc")


@dataclass(frozen=True)
class In:
    type: NType


@dataclass(frozen=True)
class Out:
    """Output parameter: index -> output subtype."""

    thetas: tuple  # sorted ((index, NType), ...)

    @classmethod
    def of(cls, mapping) -> "Out":
        return cls(tuple(sorted((int(k), normalize(v)) for k, v in dict(mapping).items())))

    def theta(self, k) -> NType:
        for i, t in self.thetas:
            if i == k:
                return t
        raise KeyError(k)

    @property
    def domain(self) -> frozenset:
        return frozenset(i for i, _ in self.thetas)


@dataclass(frozen=True)
class ExistenceProperty:
    """One declared property of ``predicate``.

    ``slots`` is total on positions 1..arity.  For ``misc`` properties
    ``template`` is ``p(u1..un)`` over variables typed by the input slots and
    ``replacement`` is the atom ``q(...)`` over the same variables.
    """

    kind: str
    predicate: str
    slots: tuple
    indices: tuple = ()
    template: Optional[Atom] = None
    replacement: Optional[Atom] = None
    source: str = field(default="", compare=False)

    @property
    def arity(self) -> int:
        return len(self.slots)

    @property
    def inputs(self) -> list:
        return [(p, s) for p, s in enumerate(self.slots, 1) if isinstance(s, In)]

    @property
    def outputs(self) -> list:
        return [(p, s) for p, s in enumerate(self.slots, 1) if isinstance(s, Out)]

    def __str__(self):
        def slot(s):
            if isinstance(s, In):
                return f"i({format_type(s.type)})"
            return "o([" + ",".join(f"({k},{format_type(t)})" for k, t in s.thetas) + "])"

        if self.kind == "misc":
            return f"misc({self.template},{self.replacement})"
        sig = f"{self.predicate}({','.join(slot(s) for s in self.slots)})"
        if self.kind == "exists":
            return f"exists({sig})"
        return f"{self.kind}({sig},[{','.join(map(str, self.indices))}])"


def validate(p: ExistenceProperty) -> None:
    if p.kind not in KINDS:
        raise InvalidProperty(f"unknown kind {p.kind!r}")
    if not p.slots:
        raise InvalidProperty("a property needs at least one slot")
    for pos, s in enumerate(p.slots, 1):
        if isinstance(s, In):
            if is_empty(s.type):
                raise InvalidProperty(f"input slot {pos} has type bot")
        elif isinstance(s, Out):
            for k, t in s.thetas:
                if is_empty(t):
                    raise InvalidProperty(f"output subtype {k} at slot {pos} is bot")
        else:
            raise InvalidProperty(f"bad slot {s!r}")
    if p.kind in ("eu", "es"):
        idx = frozenset(p.indices)
        if not idx:
            raise InvalidProperty("index set I must be nonempty")
        for pos, s in p.outputs:
            if s.domain != idx:
                raise InvalidProperty(f"output slot {pos} has indices {sorted(s.domain)}, expected {sorted(idx)}")
    if p.kind == "exists":
        for pos, s in p.outputs:
            if len(s.thetas) != 1:
                raise InvalidProperty("exists properties carry a single output type per slot")
    if p.kind == "misc":
        if p.outputs:
            raise InvalidProperty("misc properties have no output parameters")
        if p.template is None or p.replacement is None:
            raise InvalidProperty("misc property needs p(u) and q(u)")
        tv = p.template.variables()
        if len(tv) != len(p.template.args) or not all(isinstance(a, Var) for a in p.template.args):
            raise InvalidProperty("misc template arguments must be distinct variables")
        if set(p.replacement.variables()) - set(tv):
            raise InvalidProperty("replacement mentions variables absent from the template")
    # distinct parameters must never meet: check pairwise across slot types
    types = [s.type for _, s in p.inputs] + [t for _, s in p.outputs for _, t in s.thetas]
    names = set().union(*(params_of(t) for t in types)) if types else set()
    if len(names) > 1:
        for a in types:
            for b in types:
                if a.kind == "list" and b.kind == "list":
                    try:
                        intersect(a, b)
                    except TypeLatticeError as exc:
                        raise InvalidProperty(f"mismatched type parameters: {exc}") from None


class PropertyStore:
    """Append-only store; lookups return properties in declaration order."""

    def __init__(self, properties: Iterable[ExistenceProperty] = (), chan: bool = False):
        self._props: list = []
        self._arity: dict = {}
        self.chan = chan
        for p in properties:
            self.declare(p)

    def declare(self, p: ExistenceProperty) -> None:
        validate(p)
        known = self._arity.get(p.predicate)
        if known is not None and known != p.arity:
            raise InvalidProperty(f"{p.predicate} declared with arity {known} and {p.arity}")
        self._arity[p.predicate] = p.arity
        self._props.append(p)

    def lookup(self, predicate: str, arity: int, kinds=KINDS) -> list:
        kinds = set(kinds)
        out = [p for p in self._props if p.predicate == predicate and p.arity == arity and p.kind in kinds]
        if self.chan and "es" in kinds and predicate.startswith("=") and predicate != "=":
            out.append(chan_property(predicate, arity))
        return out

    def count(self, predicate: str) -> int:
        return sum(1 for p in self._props if p.predicate == predicate)

    def __iter__(self):
        return iter(self._props)

    def __len__(self):
        return len(self._props)


# ---------------------------------------------------------------------------
# builders


def eu(predicate: str, slots, indices=(1,)) -> ExistenceProperty:
    return ExistenceProperty("eu", predicate, tuple(slots), tuple(sorted(indices)))


def es(predicate: str, slots, indices=(1,)) -> ExistenceProperty:
    return ExistenceProperty("es", predicate, tuple(slots), tuple(sorted(indices)))


def exists(predicate: str, slots) -> ExistenceProperty:
    return ExistenceProperty("exists", predicate, tuple(slots), (1,))


def misc(template: Atom, replacement: Atom) -> ExistenceProperty:
    slots = tuple(In(a.type) for a in template.args)
    return ExistenceProperty("misc", template.pred, slots, (), template, replacement)


def i(t) -> In:
    return In(normalize(t))


def o(mapping) -> Out:
    if isinstance(mapping, (NType,)) or not hasattr(mapping, "items"):
        mapping = {1: mapping}
    return Out.of(mapping)


def chan_predicate(functor: str, n: int) -> str:
    return f"={functor}/{n}"


def chan_property(predicate: str, arity: int) -> ExistenceProperty:
    """Chan's rule for ``x = f(y1..yn)`` as an exists-sometimes property.

    The pseudo predicate ``=f/n`` takes ``x`` then ``y1..yn``.
    """
    return es(predicate, [i(TOP)] + [o({1: TOP})] * (arity - 1), (1,))


def arithmetic_seeds() -> list:
    """Properties of the built-in real arithmetic constraints."""
    return [
        # add(x,y,z) means x + y = z; one eu property per output direction
        eu("add", [o({1: REAL}), i(REAL), i(REAL)]),
        eu("add", [i(REAL), o({1: REAL}), i(REAL)]),
        eu("add", [i(REAL), i(REAL), o({1: REAL})]),
        # sq(x,y) means y = x*x
        eu("sq", [i(REAL), o({1: NONNEGREAL})]),
        eu("sq", [o({1: NEGREAL, 2: POSREAL}), i(POSREAL)], (1, 2)),
        es("sq", [o({1: NEGINT, 2: POSINT}), i(POSINT)], (1, 2)),
        misc(Atom("lt", (Var("X", INT), Var("Y", INT))), Atom("ge", (Var("X", INT), Var("Y", INT)))),
    ]


def integer_arithmetic() -> list:
    """The same constraints restricted to the integers."""
    return [
        eu("add", [o({1: INT}), i(INT), i(INT)]),
        eu("add", [i(INT), o({1: INT}), i(INT)]),
        eu("add", [i(INT), i(INT), o({1: INT})]),
        eu("sq", [i(INT), o({1: NONNEGINT})]),
        es("sq", [o({1: NEGINT, 2: POSINT}), i(POSINT)], (1, 2)),
        misc(Atom("lt", (Var("X", INT), Var("Y", INT))), Atom("ge", (Var("X", INT), Var("Y", INT)))),
    ]


def default_store(chan: bool = True) -> PropertyStore:
    return PropertyStore(arithmetic_seeds(), chan=chan)
