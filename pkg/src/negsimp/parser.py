"""Readers for goals, property declarations and finite models.

Identifiers follow Prolog: a name starting with an upper-case letter or ``_``
is a variable; ``name:type`` is a typed variable whatever its case.
"""
from __future__ import annotations

import re
from fractions import Fraction
from typing import Optional

from .errors import NegSimpError, ParseError
from .lattice import (
    ALIASES,
    And,
    Bot,
    Bound,
    Interval,
    ListT,
    MINF,
    Not,
    Param,
    PINF,
    Top,
    normalize,
)
from .oracle import BUILTINS, FiniteModel, GTerm
from .properties import ExistenceProperty, In, Out, es, eu, exists, misc
from .terms import Atom, Compound, Num, Var, make_list, num

_TOKEN = re.compile(
    r"""
    (?P<ws>\s+|%[^\n]*)
  | (?P<num>\d+\.\d+|\d+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<punct><~>|\.\.|[()\[\],:|=.{}/;-])
    """,
    re.VERBOSE,
)


class _Tok:
    __slots__ = ("kind", "text", "pos")

    def __init__(self, kind, text, pos):
        self.kind, self.text, self.pos = kind, text, pos

    def __repr__(self):
        return f"{self.kind}:{self.text}@{self.pos}"


def tokenize(text: str) -> list:
    out, pos = [], 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", text, pos)
        if m.lastgroup != "ws":
            out.append(_Tok(m.lastgroup, m.group(), pos))
        pos = m.end()
    out.append(_Tok("eof", "", len(text)))
    return out


def _is_var_name(name: str) -> bool:
    return name[0].isupper() or name[0] == "_"


class Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = tokenize(text)
        self.i = 0

    # -- token helpers -------------------------------------------------------

    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def peek(self, k=1) -> _Tok:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def error(self, msg, tok=None):
        tok = tok or self.tok
        shown = tok.text or "end of input"
        return ParseError(f"{msg}, found {shown!r}", self.text, tok.pos)

    def accept(self, text) -> bool:
        if self.tok.text == text and self.tok.kind != "eof":
            self.i += 1
            return True
        return False

    def expect(self, text) -> _Tok:
        if self.tok.text != text or self.tok.kind == "eof":
            raise self.error(f"expected {text!r}")
        t = self.tok
        self.i += 1
        return t

    def ident(self) -> str:
        if self.tok.kind != "ident":
            raise self.error("expected a name")
        t = self.tok.text
        self.i += 1
        return t

    def at_end(self) -> bool:
        return self.tok.kind == "eof"

    # -- numbers and types ---------------------------------------------------

    def number(self):
        """Returns ``(value, is_real)``; accepts ``-``, decimals and ``p/q``."""
        neg = self.accept("-")
        if self.tok.kind != "num":
            raise self.error("expected a number")
        text = self.tok.text
        self.i += 1
        real = "." in text
        v = Fraction(text)
        if self.tok.text == "/" and self.peek().kind == "num":
            self.i += 1
            v = v / Fraction(self.tok.text)
            self.i += 1
            real = True
        v = -v if neg else v
        return (int(v) if v.denominator == 1 else v), real

    def bound(self) -> Bound:
        if self.tok.text in ("minf", "pinf"):
            name = self.ident()
            return MINF if name == "minf" else PINF
        if self.tok.text == "o" and self.peek().text == "(":
            self.i += 2
            if self.tok.text in ("minf", "pinf"):
                b = self.bound()
            else:
                b = Bound(self.number()[0], closed=False)
            self.expect(")")
            return b
        return Bound(self.number()[0])

    def type_expr(self):
        left = self.type_primary()
        while self.tok.text == "and":
            self.i += 1
            if self.tok.text == "not" and self.peek().text == "(":
                self.i += 2
                arg = self.type_expr()
                self.expect(")")
                left = And(left, Not(arg))
            else:
                left = And(left, self.type_primary())
        return left

    def type_primary(self):
        tok = self.tok
        if tok.text == "(":
            self.i += 1
            t = self.type_expr()
            self.expect(")")
            return t
        name = self.ident()
        if name in ("int", "real") and self.tok.text == "(":
            self.i += 1
            lo = self.bound()
            self.expect(",")
            hi = self.bound()
            self.expect(")")
            return Interval(name, lo, hi)
        if name == "list" and self.tok.text == "(":
            self.i += 1
            elem = self.type_expr()
            self.expect(")")
            return ListT(elem)
        if name == "and" and self.tok.text == "(":
            # prefix form and(T1, not(T2)) as in the interactive session
            self.i += 1
            a = self.type_expr()
            self.expect(",")
            if self.tok.text == "not" and self.peek().text == "(":
                self.i += 2
                b = Not(self.type_expr())
                self.expect(")")
            else:
                b = self.type_expr()
            self.expect(")")
            return And(a, b)
        if name == "top":
            return Top()
        if name == "bot":
            return Bot()
        if name in ALIASES:
            return ALIASES[name]
        if _is_var_name(name):
            return Param(name)
        raise ParseError(f"unknown type {name!r}", self.text, tok.pos)

    def ntype(self):
        tok = self.tok
        try:
            return normalize(self.type_expr())
        except NegSimpError as exc:
            raise ParseError(str(exc), self.text, tok.pos) from None

    # -- terms ---------------------------------------------------------------

    def term(self):
        tok = self.tok
        if tok.text == "-" or tok.kind == "num":
            v, real = self.number()
            return Num(v, "real" if real else "int")
        if tok.text == "[":
            return self.list_term()
        if tok.kind != "ident":
            raise self.error("expected a term")
        name = self.ident()
        if self.tok.text == ":":
            self.i += 1
            return Var(name, self.ntype())
        if self.tok.text == "(":
            self.i += 1
            args = self.args(")")
            return Compound(name, tuple(args))
        if _is_var_name(name):
            return Var(name)
        return Compound(name)

    def list_term(self):
        self.expect("[")
        if self.accept("]"):
            return Compound("[]")
        items = [self.term()]
        while self.accept(","):
            items.append(self.term())
        tail = self.term() if self.accept("|") else None
        self.expect("]")
        return make_list(items, tail)

    def args(self, close: str) -> list:
        out = []
        if self.accept(close):
            return out
        out.append(self.term())
        while self.accept(","):
            out.append(self.term())
        self.expect(close)
        return out

    def atom(self) -> Atom:
        start = self.tok
        t = self.term()
        if self.accept("="):
            return Atom("=", (t, self.term()))
        if isinstance(t, Compound) and not t.is_list():
            return Atom(t.functor, t.args)
        raise self.error("expected an atom", start)

    def conjunction(self) -> list:
        if self.accept("("):
            if self.accept(")"):
                return []
            out = self.conjunction_items()
            self.expect(")")
            return out
        return self.conjunction_items()

    def conjunction_items(self) -> list:
        out = [self.atom()]
        while self.tok.text == "," and self.peek().text not in ("[",):
            self.i += 1
            out.append(self.atom())
        return out

    def var_list(self) -> list:
        self.expect("[")
        out = []
        if self.accept("]"):
            return out
        while True:
            t = self.term()
            if not isinstance(t, Var):
                raise self.error("expected a variable in the local list")
            out.append(t)
            if self.accept("]"):
                return out
            self.expect(",")

    def goal(self):
        """``neg([locals], (conj))`` or ``neg((conj), [locals])``."""
        tok = self.tok
        if self.ident() != "neg":
            raise ParseError("a goal must start with neg(", self.text, tok.pos)
        self.expect("(")
        if self.tok.text == "[":
            locals_ = self.var_list()
            self.expect(",")
            conj = self.conjunction()
        else:
            conj = self.conjunction()
            self.expect(",")
            locals_ = self.var_list()
        self.expect(")")
        return _unify_var_types(conj, locals_, self.text)


def _unify_var_types(conj, locals_, text=""):
    """Give every occurrence of a variable the type it is annotated with."""
    types: dict = {}

    def note(v: Var):
        if v.type.kind == "top":
            return
        prev = types.get(v.name)
        if prev is not None and prev != v.type:
            raise ParseError(f"variable {v.name} annotated with two different types", text, 0)
        types[v.name] = v.type

    for a in conj:
        for v in _occurrences(a):
            note(v)
    for v in locals_:
        note(v)
    theta = {n: Var(n, t) for n, t in types.items()}
    conj = [a.subst(theta) for a in conj]
    locals_ = [theta.get(v.name, v) for v in locals_]
    return conj, locals_


def _occurrences(e):
    if isinstance(e, Var):
        yield e
    elif isinstance(e, (Compound, Atom)):
        for a in e.args:
            yield from _occurrences(a)


def _finish(p: Parser):
    p.accept(".")
    if not p.at_end():
        raise p.error("unexpected trailing input")


def parse_type(text: str):
    p = Parser(text)
    t = p.ntype()
    if not p.at_end():
        raise p.error("unexpected trailing input")
    return t


def parse_term(text: str):
    p = Parser(text)
    t = p.term()
    if not p.at_end():
        raise p.error("unexpected trailing input")
    return t


def parse_goal(text: str):
    """Return ``(conjunction, locals)`` for one negative goal."""
    p = Parser(text)
    out = p.goal()
    _finish(p)
    return out


# ---------------------------------------------------------------------------
# properties


def _slot(p: Parser):
    tok = p.tok
    kind = p.ident()
    p.expect("(")
    if kind == "i":
        t = p.ntype()
        p.expect(")")
        return In(t)
    if kind != "o":
        raise ParseError("a parameter is i(Type) or o(...)", p.text, tok.pos)
    if p.accept("["):
        m = {}
        while True:
            p.expect("(")
            k, _ = p.number()
            p.expect(",")
            m[k] = p.ntype()
            p.expect(")")
            if p.accept("]"):
                break
            p.expect(",")
        p.expect(")")
        return Out.of(m)
    t = p.ntype()
    p.expect(")")
    return Out.of({1: t})


def _signature(p: Parser):
    pred = p.ident()
    p.expect("(")
    slots = [_slot(p)]
    while p.accept(","):
        slots.append(_slot(p))
    p.expect(")")
    return pred, slots


def _int_list(p: Parser) -> list:
    p.expect("[")
    out = []
    if p.accept("]"):
        return out
    while True:
        out.append(p.number()[0])
        if p.accept("]"):
            return out
        p.expect(",")


def _property(p: Parser) -> ExistenceProperty:
    tok = p.tok
    kind = p.ident()
    if kind == "declare_existence_property":
        p.expect("(")
        prop = _property(p)
        p.expect(")")
        return prop
    p.expect("(")
    if kind in ("eu", "es"):
        pred, slots = _signature(p)
        p.expect(",")
        idx = _int_list(p)
        p.expect(")")
        return (eu if kind == "eu" else es)(pred, slots, idx)
    if kind == "exists":
        pred, slots = _signature(p)
        p.expect(")")
        return exists(pred, slots)
    if kind == "misc":
        tmpl = p.atom()
        p.expect(",")
        repl = p.atom()
        p.expect(")")
        conj, _ = _unify_var_types([tmpl, repl], [], p.text)
        return misc(conj[0], conj[1])
    raise ParseError(f"unknown property kind {kind!r}", p.text, tok.pos)


def parse_properties(text: str) -> list:
    """Property declarations separated by ``.`` or ``,``."""
    p = Parser(text)
    out = []
    while not p.at_end():
        tok = p.tok
        try:
            out.append(_property(p))
        except ParseError:
            raise
        except NegSimpError as exc:
            raise ParseError(str(exc), text, tok.pos) from None
        if not (p.accept(".") or p.accept(",")) and not p.at_end():
            raise p.error("expected '.' after a declaration")
    return out


def parse_session(text: str):
    """Declarations followed by one goal, as typed at the interactive prompt."""
    p = Parser(text)
    props = []
    while p.tok.text != "neg":
        if p.at_end():
            raise p.error("expected a goal")
        props.append(_property(p))
        if not (p.accept(".") or p.accept(",")):
            raise p.error("expected '.' or ',' after a declaration")
    conj, locals_ = p.goal()
    _finish(p)
    return props, conj, locals_


# ---------------------------------------------------------------------------
# models


def _value(p: Parser):
    tok = p.tok
    if tok.text == "-" or tok.kind == "num":
        return p.number()[0]
    if tok.text == "[":
        p.i += 1
        items = []
        if not p.accept("]"):
            items.append(_value(p))
            while p.accept(","):
                items.append(_value(p))
            p.expect("]")
        return tuple(items)
    name = p.ident()
    if p.accept("("):
        args = [_value(p)]
        while p.accept(","):
            args.append(_value(p))
        p.expect(")")
        return GTerm(name, tuple(args))
    return GTerm(name)


def _value_set(p: Parser, tuple_items=False) -> list:
    p.expect("{")
    out = []
    if p.accept("}"):
        return out
    while True:
        if tuple_items:
            p.expect("(")
            items = [_value(p)]
            while p.accept(","):
                items.append(_value(p))
            p.expect(")")
            out.append(tuple(items))
        else:
            out.append(_value(p))
        if p.accept("}"):
            return out
        p.expect(",")


def parse_model(text: str) -> FiniteModel:
    """``carrier T = {..} .``, ``extension p/n = {(..),..} .``, ``builtin p = sq .``

    ``range lo..hi .`` sets the default integer sample.
    """
    p = Parser(text)
    m = FiniteModel()
    while not p.at_end():
        tok = p.tok
        kw = p.ident()
        if kw == "carrier":
            t = p.ntype()
            p.expect("=")
            m.carriers[str(t)] = _value_set(p)
        elif kw == "extension":
            pred = p.ident()
            p.expect("/")
            n, _ = p.number()
            p.expect("=")
            rows = _value_set(p, tuple_items=True)
            for r in rows:
                if len(r) != n:
                    raise ParseError(f"tuple {r} does not have arity {n}", text, tok.pos)
            m.extensions[(pred, n)] = set(rows)
        elif kw == "builtin":
            pred = p.ident()
            p.expect("=")
            kind_tok = p.tok
            kind = p.ident()
            if kind not in BUILTINS:
                raise ParseError(f"unknown builtin {kind!r}", text, kind_tok.pos)
            m.builtins[pred] = kind
        elif kw == "range":
            lo, _ = p.number()
            p.expect("..")
            hi, _ = p.number()
            m.int_range = (lo, hi)
        else:
            raise ParseError(f"unknown model statement {kw!r}", text, tok.pos)
        p.expect(".")
    return m
