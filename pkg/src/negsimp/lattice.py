"""A decidable type lattice: top, bot, unions of int/real intervals, lists and
opaque type parameters.

Surface expressions (``TypeExpr``) are what the parser produces; ``NType`` is
the canonical normal form every other module works with.  Integers are a
subset of the reals, so ``int(0,3)`` is a subtype of ``real(0,3)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Iterable, NamedTuple, Optional, Union

from .errors import DomainMismatch, IllFormedType, TypeLatticeError

INF = math.inf
NUMERIC = ("int", "real")

Number = Union[int, Fraction]


def as_number(v) -> Number:
    if isinstance(v, bool):
        raise TypeError("booleans are not numbers")
    if isinstance(v, int):
        return v
    if isinstance(v, float):
        if math.isinf(v):
            return v
        v = Fraction(str(v))
    f = Fraction(v)
    return int(f) if f.denominator == 1 else f


class Iv(NamedTuple):
    """One interval; infinite ends are always open."""

    lo: object
    lo_closed: bool
    hi: object
    hi_closed: bool

    def contains(self, v) -> bool:
        if v < self.lo or v > self.hi:
            return False
        if v == self.lo and not self.lo_closed:
            return False
        if v == self.hi and not self.hi_closed:
            return False
        return True


FULL = Iv(-INF, False, INF, False)


# ---------------------------------------------------------------------------
# surface syntax


@dataclass(frozen=True)
class Bound:
    value: object  # Number or +/-INF
    closed: bool = True

    def __post_init__(self):
        if isinstance(self.value, float) and math.isinf(self.value) and self.closed:
            object.__setattr__(self, "closed", False)


MINF = Bound(-INF, False)
PINF = Bound(INF, False)


class TypeExpr:
    pass


@dataclass(frozen=True)
class Top(TypeExpr):
    pass


@dataclass(frozen=True)
class Bot(TypeExpr):
    pass


@dataclass(frozen=True)
class Interval(TypeExpr):
    base: str
    lo: Bound = MINF
    hi: Bound = PINF


@dataclass(frozen=True)
class ListT(TypeExpr):
    elem: TypeExpr


@dataclass(frozen=True)
class And(TypeExpr):
    left: TypeExpr
    right: TypeExpr


@dataclass(frozen=True)
class Not(TypeExpr):
    arg: TypeExpr


@dataclass(frozen=True)
class Param(TypeExpr):
    name: str


# ---------------------------------------------------------------------------
# normal form


@dataclass(frozen=True)
class NType:
    kind: str  # top | bot | int | real | list | param
    ivs: tuple = ()
    elem: Optional["NType"] = None
    name: Optional[str] = None

    @property
    def is_numeric(self) -> bool:
        return self.kind in NUMERIC

    def __str__(self):
        return format_type(self)

    def __repr__(self):
        return f"NType<{format_type(self)}>"


TOP = NType("top")
BOT = NType("bot")
INT = NType("int", (FULL,))
REAL = NType("real", (FULL,))


def _num(v):
    return v if isinstance(v, float) else as_number(v)


def _norm_real(ivs: Iterable[Iv]) -> tuple:
    keep = []
    for iv in ivs:
        lo, hi = _num(iv.lo), _num(iv.hi)
        lc = iv.lo_closed and lo != -INF
        hc = iv.hi_closed and hi != INF
        if lo > hi or (lo == hi and not (lc and hc)):
            continue
        keep.append(Iv(lo, lc, hi, hc))
    keep.sort(key=lambda iv: (iv.lo, not iv.lo_closed))
    out: list = []
    for iv in keep:
        if out:
            last = out[-1]
            touch = iv.lo < last.hi or (iv.lo == last.hi and (iv.lo_closed or last.hi_closed))
            if touch:
                if iv.hi > last.hi or (iv.hi == last.hi and iv.hi_closed):
                    out[-1] = Iv(last.lo, last.lo_closed, iv.hi, iv.hi_closed)
                continue
        out.append(iv)
    return tuple(out)


def _int_lo(v, closed):
    if v == -INF:
        return -INF
    return math.ceil(v) if closed else math.floor(v) + 1


def _int_hi(v, closed):
    if v == INF:
        return INF
    return math.floor(v) if closed else math.ceil(v) - 1


def _norm_int(ivs: Iterable[Iv]) -> tuple:
    keep = []
    for iv in ivs:
        if iv.lo == INF or iv.hi == -INF:
            continue
        lo = _int_lo(_num(iv.lo), iv.lo_closed)
        hi = _int_hi(_num(iv.hi), iv.hi_closed)
        if lo > hi:
            continue
        keep.append((lo, hi))
    keep.sort()
    out: list = []
    for lo, hi in keep:
        if out and lo <= out[-1][1] + 1:
            if hi > out[-1][1]:
                out[-1] = (out[-1][0], hi)
            continue
        out.append((lo, hi))
    return tuple(Iv(lo, lo != -INF, hi, hi != INF) for lo, hi in out)


def numeric(base: str, ivs: Iterable[Iv]) -> NType:
    if base not in NUMERIC:
        raise IllFormedType(f"unknown numeric base {base!r}")
    norm = _norm_int(ivs) if base == "int" else _norm_real(ivs)
    return NType(base, norm) if norm else BOT


def interval(base: str, lo=-INF, hi=INF, lo_closed=True, hi_closed=True) -> NType:
    """Convenience constructor: ``interval('real', 0, INF, lo_closed=False)``."""
    return numeric(base, [Iv(lo, lo_closed, hi, hi_closed)])


def singleton(v) -> NType:
    v = as_number(v)
    base = "int" if isinstance(v, int) else "real"
    return numeric(base, [Iv(v, True, v, True)])


def list_of(elem: NType) -> NType:
    return NType("list", elem=elem)


def param(name: str) -> NType:
    return NType("param", name=name)


POSREAL = interval("real", 0, INF, lo_closed=False)
NEGREAL = interval("real", -INF, 0, hi_closed=False)
NONNEGREAL = interval("real", 0, INF)
POSINT = interval("int", 1, INF)
NEGINT = interval("int", -INF, -1)
NONNEGINT = interval("int", 0, INF)

ALIASES = {
    "top": TOP,
    "bot": BOT,
    "int": INT,
    "real": REAL,
    "posreal": POSREAL,
    "negreal": NEGREAL,
    "nonnegreal": NONNEGREAL,
    "posint": POSINT,
    "negint": NEGINT,
    "nonnegint": NONNEGINT,
}


def _bound_value(b: Bound, base: str):
    v = b.value
    if isinstance(v, float) and math.isinf(v):
        return v
    v = as_number(v)
    if base == "int" and not isinstance(v, int):
        raise IllFormedType(f"non-integer bound {v} in an int interval")
    return v


def normalize(t) -> NType:
    """Canonical form of a surface type (idempotent on ``NType``)."""
    if isinstance(t, NType):
        return t
    if isinstance(t, Top):
        return TOP
    if isinstance(t, Bot):
        return BOT
    if isinstance(t, Param):
        return param(t.name)
    if isinstance(t, Interval):
        lo = _bound_value(t.lo, t.base)
        hi = _bound_value(t.hi, t.base)
        return numeric(t.base, [Iv(lo, t.lo.closed, hi, t.hi.closed)])
    if isinstance(t, ListT):
        return list_of(normalize(t.elem))
    if isinstance(t, And):
        left = normalize(t.left)
        if isinstance(t.right, Not):
            diff = difference(left, normalize(t.right.arg))
            if diff is None:
                raise IllFormedType("difference is not expressible in this lattice")
            return diff
        return intersect(left, normalize(t.right))
    if isinstance(t, Not):
        raise IllFormedType("not(...) may only appear as the right operand of 'and'")
    raise IllFormedType(f"not a type expression: {t!r}")


# ---------------------------------------------------------------------------
# lattice operations


def _iv_meet(a: Iv, b: Iv) -> Iv:
    if a.lo > b.lo or (a.lo == b.lo and not a.lo_closed):
        lo, lc = a.lo, a.lo_closed
    else:
        lo, lc = b.lo, b.lo_closed
    if a.hi < b.hi or (a.hi == b.hi and not a.hi_closed):
        hi, hc = a.hi, a.hi_closed
    else:
        hi, hc = b.hi, b.hi_closed
    return Iv(lo, lc, hi, hc)


def intersect(a: NType, b: NType) -> NType:
    if a.kind == "bot" or b.kind == "bot":
        return BOT
    if a.kind == "top":
        return b
    if b.kind == "top":
        return a
    if a.kind == "param" or b.kind == "param":
        if a == b:
            return a
        raise TypeLatticeError(f"cannot intersect {format_type(a)} with {format_type(b)}")
    if a.is_numeric and b.is_numeric:
        base = "int" if "int" in (a.kind, b.kind) else "real"
        return numeric(base, [_iv_meet(x, y) for x in a.ivs for y in b.ivs])
    if a.kind == "list" and b.kind == "list":
        return list_of(intersect(a.elem, b.elem))
    return BOT


def is_empty(a: NType) -> bool:
    return a.kind == "bot"


def subtype(a: NType, b: NType) -> bool:
    if a.kind == "bot" or b.kind == "top":
        return True
    if b.kind == "bot" or a.kind == "top":
        return False
    if a.kind == "param" or b.kind == "param":
        return a == b
    if a.kind == "list":
        return b.kind == "list" and subtype(a.elem, b.elem)
    if a.is_numeric and b.is_numeric:
        if a.kind == "real" and b.kind == "int":
            # only a real type made of integer points can sit inside int
            if not all(iv.lo == iv.hi and isinstance(iv.lo, int) for iv in a.ivs):
                return False
            return all(any(iv.contains(p.lo) for iv in b.ivs) for p in a.ivs)
        return intersect(a, b) == a
    return False


def equiv(a: NType, b: NType) -> bool:
    return a == b or (subtype(a, b) and subtype(b, a))


def may_intersect(a: NType, b: NType) -> bool:
    """Non-empty intersection; unresolved type parameters count as overlapping."""
    try:
        return not is_empty(intersect(a, b))
    except TypeLatticeError:
        return True


def _complement(ivs: tuple, base: str) -> list:
    out = []
    lo, lc = -INF, False
    for iv in ivs:
        out.append(Iv(lo, lc, iv.lo, not iv.lo_closed))
        lo, lc = iv.hi, not iv.hi_closed
    out.append(Iv(lo, lc, INF, False))
    # open ends on int bases are tightened by _norm_int
    return out


def complement_within(a: NType) -> list:
    return _complement(a.ivs, a.kind)


def difference(a: NType, b: NType) -> Optional[NType]:
    """``a`` minus ``b`` when the lattice can express it, else ``None``."""
    if b.kind == "bot" or a.kind == "bot":
        return a
    try:
        if is_empty(intersect(a, b)):
            return a
    except TypeLatticeError:
        return None
    if subtype(a, b):
        return BOT
    if a.is_numeric and b.is_numeric:
        if a.kind == "real" and b.kind == "int":
            return None
        return numeric(a.kind, [_iv_meet(x, y) for x in a.ivs for y in _complement(b.ivs, b.kind)])
    if a.kind == "list" and b.kind == "list":
        return None
    return None


def join(a: NType, b: NType) -> NType:
    """Least upper bound where expressible, otherwise a sound over-approximation."""
    if a.kind == "bot":
        return b
    if b.kind == "bot":
        return a
    if a.kind == "top" or b.kind == "top":
        return TOP
    if a.is_numeric and b.is_numeric:
        base = "int" if a.kind == b.kind == "int" else "real"
        return numeric(base, list(a.ivs) + list(b.ivs))
    if a.kind == "list" and b.kind == "list":
        return list_of(join(a.elem, b.elem))
    if a == b:
        return a
    return TOP


def member(v, t: NType) -> bool:
    """Is the ground value ``v`` in the denotation of ``t``?

    Numbers are ``int``/``Fraction``; lists are Python tuples or lists.
    """
    if t.kind == "top" or t.kind == "param":
        return True
    if t.kind == "bot":
        return False
    if t.is_numeric:
        if isinstance(v, bool) or not isinstance(v, (int, Fraction, Rational, float)):
            return False
        v = as_number(v)
        if t.kind == "int" and not isinstance(v, int):
            return False
        return any(iv.contains(v) for iv in t.ivs)
    if t.kind == "list":
        return isinstance(v, (tuple, list)) and all(member(x, t.elem) for x in v)
    return False


def vec_subtype(a: dict, b: dict) -> bool:
    if set(a) != set(b):
        raise DomainMismatch(f"{sorted(a)} vs {sorted(b)}")
    return all(subtype(a[k], b[k]) for k in a)


def vec_intersects(a: dict, b: dict) -> bool:
    if set(a) != set(b):
        raise DomainMismatch(f"{sorted(a)} vs {sorted(b)}")
    return all(not is_empty(intersect(a[k], b[k])) for k in a)


# ---------------------------------------------------------------------------
# type parameters


def params_of(t: NType) -> set:
    if t.kind == "param":
        return {t.name}
    if t.kind == "list":
        return params_of(t.elem)
    return set()


def collect_bindings(actual: NType, pattern: NType, acc: dict) -> None:
    """Accumulate, per parameter of ``pattern``, the join of the matching actuals."""
    if pattern.kind == "param":
        acc[pattern.name] = join(acc.get(pattern.name, BOT), actual)
    elif pattern.kind == "list" and actual.kind == "list":
        collect_bindings(actual.elem, pattern.elem, acc)


def instantiate(t: NType, bindings: dict) -> NType:
    if t.kind == "param":
        bound = bindings.get(t.name)
        return t if bound is None or bound.kind == "bot" else bound
    if t.kind == "list":
        return list_of(instantiate(t.elem, bindings))
    return t


# ---------------------------------------------------------------------------
# printing


def format_number(v) -> str:
    if v == INF:
        return "pinf"
    if v == -INF:
        return "minf"
    v = as_number(v)
    if isinstance(v, int):
        return str(v)
    d = v.denominator
    while d % 2 == 0:
        d //= 2
    while d % 5 == 0:
        d //= 5
    if d == 1:
        return str(float(v)) if abs(v) < 10**15 else f"{v.numerator}/{v.denominator}"
    return f"{v.numerator}/{v.denominator}"


def _fmt_bound(v, closed) -> str:
    s = format_number(v)
    return s if closed or s in ("pinf", "minf") else f"o({s})"


def _fmt_iv(base: str, iv: Iv) -> str:
    if iv.lo == -INF and iv.hi == INF:
        return base
    return f"{base}({_fmt_bound(iv.lo, iv.lo_closed)},{_fmt_bound(iv.hi, iv.hi_closed)})"


def format_type(t: NType) -> str:
    if t.kind in ("top", "bot"):
        return t.kind
    if t.kind == "param":
        return t.name
    if t.kind == "list":
        return f"list({format_type(t.elem)})"
    first, last = t.ivs[0], t.ivs[-1]
    text = _fmt_iv(t.kind, Iv(first.lo, first.lo_closed, last.hi, last.hi_closed))
    for a, b in zip(t.ivs, t.ivs[1:]):
        if t.kind == "int":
            gap = Iv(a.hi + 1, True, b.lo - 1, True)
        else:
            gap = Iv(a.hi, not a.hi_closed, b.lo, not b.lo_closed)
        text += f" and not({_fmt_iv(t.kind, gap)})"
    return text
