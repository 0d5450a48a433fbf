"""Brute-force evaluation of goal formulas over a finite model.

Built-in arithmetic is solved exactly where the arguments determine the
result (``sq`` both ways, ``add`` from any two arguments); every other
unknown is enumerated over the finite carrier of its type.  A search that
had to enumerate a type its carrier does not cover is flagged as truncated,
so a verdict is either exhaustive or "no counterexample on this carrier".
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Optional

from .errors import MissingCarrier, NegSimpError, UnboundVariable
from .formula import FALSE, Eq, NegEq, NegGoal, TypeConstraint, _GroundCheck, conj_variables
from .lattice import INF, NType, format_type, join, member, normalize
from .properties import ExistenceProperty
from .terms import Atom, Compound, Num, Var, type_of


@dataclass(frozen=True)
class GTerm:
    """A ground non-list compound value."""

    functor: str
    args: tuple = ()

    def __str__(self):
        if not self.args:
            return self.functor
        return f"{self.functor}({','.join(map(str, self.args))})"


BUILTINS = ("sq", "add", "lt", "ge")


@dataclass
class FiniteModel:
    """Carriers per type plus an interpretation for every predicate.

    ``carriers`` maps a printed type (``"int"``, ``"real(0,1)"``, ...) to its
    finite sample.  Types without an entry draw from ``int_range`` (and the
    ``"real"`` carrier for real types).  ``builtins`` maps predicate names to
    one of ``sq``, ``add``, ``lt`` and ``ge``; ``extensions`` maps
    ``(pred, arity)`` to a set of value tuples.
    """

    int_range: tuple = (-10, 10)
    carriers: dict = field(default_factory=dict)
    extensions: dict = field(default_factory=dict)
    builtins: dict = field(default_factory=lambda: {b: b for b in BUILTINS})

    def base_ints(self) -> list:
        if "int" in self.carriers:
            return list(self.carriers["int"])
        lo, hi = self.int_range
        return list(range(lo, hi + 1))

    def values(self, t: NType) -> tuple:
        """``(sample, exact)`` for type ``t``; exact means the sample is all of ``t``."""
        key = format_type(t)
        if t.kind == "bot":
            return [], True
        if key in self.carriers:
            vals = [v for v in self.carriers[key] if member(v, t)]
            return vals, _finite_int_cover(t, vals)
        if t.kind == "int":
            vals = [v for v in self.base_ints() if member(v, t)]
            return vals, _finite_int_cover(t, vals)
        if t.kind == "real":
            pool = self.carriers.get("real", self.base_ints())
            vals = sorted({v for v in pool if member(v, t)})
            points = all(iv.lo == iv.hi for iv in t.ivs)
            return vals, points and len(vals) == len(t.ivs)
        if t.kind in ("top", "param"):
            pool = self.carriers.get("top", self.base_ints())
            return list(pool), False
        if t.kind == "list":
            elems, _ = self.values(t.elem)
            elems = elems[:3]
            out = [()]
            out += [(a,) for a in elems]
            out += [(a, b) for a in elems for b in elems]
            return out, False
        raise MissingCarrier(f"no carrier for {key}")


def _finite_int_cover(t: NType, vals) -> bool:
    if t.kind != "int":
        return False
    total = 0
    for iv in t.ivs:
        if iv.lo == -INF or iv.hi == INF:
            return False
        total += iv.hi - iv.lo + 1
    return total == len(set(vals))


def int_model(lo: int, hi: int, **kw) -> FiniteModel:
    return FiniteModel(int_range=(lo, hi), **kw)


# ---------------------------------------------------------------------------
# values of terms


def _value(t, env):
    """Ground value of ``t`` under ``env`` or ``None`` if some variable is unbound."""
    if isinstance(t, Var):
        return env.get(t.name)
    if isinstance(t, Num):
        return t.value
    if isinstance(t, Compound):
        args = [_value(a, env) for a in t.args]
        if any(a is None for a in args):
            return None
        if t.is_list():
            return () if not t.args else (args[0],) + tuple(args[1])
        return GTerm(t.functor, tuple(args))
    raise TypeError(f"not a term: {t!r}")


def _same(a, b) -> bool:
    if isinstance(a, (int, Fraction)) and isinstance(b, (int, Fraction)):
        return a == b
    return type(a) is type(b) and a == b


def _match(t, v, env) -> Optional[dict]:
    """Extend ``env`` so that ``t`` denotes ``v``; respects variable types."""
    if isinstance(t, Var):
        cur = env.get(t.name)
        if cur is not None:
            return env if _same(cur, v) else None
        if not member(v, t.type) and not (isinstance(v, GTerm) and t.type.kind in ("top", "param")):
            return None
        out = dict(env)
        out[t.name] = v
        return out
    if isinstance(t, Num):
        return env if isinstance(v, (int, Fraction)) and v == t.value else None
    if isinstance(t, Compound):
        if t.is_list():
            if not isinstance(v, tuple):
                return None
            if not t.args:
                return env if v == () else None
            if not v:
                return None
            env = _match(t.args[0], v[0], env)
            return None if env is None else _match(t.args[1], v[1:], env)
        if not isinstance(v, GTerm) or v.functor != t.functor or len(v.args) != len(t.args):
            return None
        for a, x in zip(t.args, v.args):
            env = _match(a, x, env)
            if env is None:
                return None
        return env
    raise TypeError(f"not a term: {t!r}")


def _rational_sqrt(v):
    v = Fraction(v)
    if v < 0:
        return None
    n, d = v.numerator, v.denominator
    rn, rd = math.isqrt(n), math.isqrt(d)
    if rn * rn == n and rd * rd == d:
        r = Fraction(rn, rd)
        return int(r) if r.denominator == 1 else r
    return None


def _num(v) -> bool:
    return isinstance(v, (int, Fraction)) and not isinstance(v, bool)


def _norm(v):
    if isinstance(v, Fraction) and v.denominator == 1:
        return int(v)
    return v


def _real_typed(t) -> bool:
    return isinstance(t, Var) and t.type.kind in ("real", "top", "param")


# ---------------------------------------------------------------------------
# search


class Search:
    """One evaluation context; ``truncated`` records carrier shortfalls."""

    def __init__(self, model: FiniteModel):
        self.model = model
        self.truncated = False

    def exists(self, lits, env) -> bool:
        for _ in self.solve(list(lits), dict(env)):
            return True
        return False

    def solve(self, lits: list, env: dict):
        if not lits:
            yield env
            return
        branch = None
        for i, lit in enumerate(lits):
            res = self._try(lit, env)
            if res is None:
                continue
            if len(res) <= 1:
                if not res:
                    return
                yield from self.solve(lits[:i] + lits[i + 1 :], res[0])
                return
            if branch is None:
                branch = (i, res)
        if branch is not None:
            i, res = branch
            rest = lits[:i] + lits[i + 1 :]
            for e in res:
                yield from self.solve(rest, e)
            return
        var = self._pick(lits, env)
        if var is None:
            raise UnboundVariable("no literal can make progress")
        vals, exact = self.model.values(var.type)
        if not exact:
            self.truncated = True
        for v in vals:
            yield from self.solve(lits, {**env, var.name: v})

    def _pick(self, lits, env) -> Optional[Var]:
        for lit in lits:
            for name, v in lit.variables().items():
                if name not in env:
                    return v
        return None

    def _try(self, lit, env):
        if lit is FALSE:
            return []
        if isinstance(lit, Atom):
            return self._atom(lit, env)
        if isinstance(lit, Eq):
            return self._unify(lit.lhs, lit.rhs, env)
        if isinstance(lit, NegEq):
            if any(n not in env for n in lit.variables()):
                return None
            inner = {k: v for k, v in env.items() if k not in {b.name for b in lit.bound}}
            eqs = [Eq(a, b) for a, b in zip(lit.lhs, lit.rhs)]
            return [] if self.exists(eqs, inner) else [env]
        if isinstance(lit, (TypeConstraint, _GroundCheck)):
            t = lit.var if isinstance(lit, TypeConstraint) else lit.term
            v = _value(t, env)
            if v is None:
                return None
            return [env] if member(v, lit.type) else []
        if isinstance(lit, NegGoal):
            if any(n not in env for n in lit.variables()):
                return None
            inner = {k: v for k, v in env.items() if k not in lit.local_names}
            return [] if self.exists(lit.conjunction(), inner) else [env]
        raise NegSimpError(f"cannot evaluate {lit!r}")

    def _unify(self, a, b, env):
        va, vb = _value(a, env), _value(b, env)
        if va is not None:
            e = _match(b, va, env)
            return [] if e is None else [e]
        if vb is not None:
            e = _match(a, vb, env)
            return [] if e is None else [e]
        return None

    def _atom(self, atom: Atom, env):
        kind = self.model.builtins.get(atom.pred)
        if atom.pred == "=" and atom.arity == 2:
            return self._unify(atom.args[0], atom.args[1], env)
        if kind is None:
            ext = self.model.extensions.get((atom.pred, atom.arity))
            if ext is None:
                raise NegSimpError(f"no interpretation for {atom.pred}/{atom.arity}")
            out = []
            for tup in ext:
                e = env
                for t, v in zip(atom.args, tup):
                    e = _match(t, v, e)
                    if e is None:
                        break
                if e is not None:
                    out.append(e)
            return out
        vals = [_value(a, env) for a in atom.args]
        if any(v is not None and not _num(v) for v in vals):
            return []
        if kind == "sq":
            x, y = atom.args
            vx, vy = vals
            if vx is not None:
                e = _match(y, _norm(Fraction(vx) * vx), env)
                return [] if e is None else [e]
            if vy is not None:
                r = _rational_sqrt(vy)
                if r is None:
                    if Fraction(vy) > 0 and _real_typed(x):
                        self.truncated = True
                    return []
                out = []
                for root in {r, _norm(-Fraction(r))}:
                    e = _match(x, root, env)
                    if e is not None:
                        out.append(e)
                return out
            return None
        if kind == "add":
            known = [v is not None for v in vals]
            if sum(known) < 2:
                return None
            x, y, z = vals
            if z is None:
                pos, v = 2, _norm(Fraction(x) + y)
            elif y is None:
                pos, v = 1, _norm(Fraction(z) - x)
            elif x is None:
                pos, v = 0, _norm(Fraction(z) - y)
            else:
                return [env] if Fraction(x) + y == z else []
            e = _match(atom.args[pos], v, env)
            return [] if e is None else [e]
        if kind in ("lt", "ge"):
            if any(v is None for v in vals):
                return None
            a, b = vals
            ok = a < b if kind == "lt" else a >= b
            return [env] if ok else []
        raise NegSimpError(f"unknown builtin {kind!r}")


def evaluate(formula, asg: Mapping, model: FiniteModel) -> bool:
    """Truth of a conjunction of literals under ``asg``; other variables are existential."""
    if formula is FALSE:
        return False
    if isinstance(formula, (NegGoal, Atom, Eq, NegEq, TypeConstraint)):
        formula = (formula,)
    return Search(model).exists(list(formula), dict(asg))


# ---------------------------------------------------------------------------
# verdicts


@dataclass
class Verdict:
    passed: bool
    counterexample: Optional[dict] = None
    exhaustive: bool = True
    checked: int = 0
    warnings: list = field(default_factory=list)
    violations: list = field(default_factory=list)

    def __bool__(self):
        return self.passed

    def __str__(self):
        if self.passed:
            scope = "exhaustive" if self.exhaustive else "no counterexample on the finite carriers"
            extra = f", {len(self.warnings)} warning(s)" if self.warnings else ""
            return f"pass ({self.checked} assignments, {scope}{extra})"
        ce = ", ".join(f"{k}={v}" for k, v in sorted((self.counterexample or {}).items()))
        return f"counterexample: {ce or '(no globals)'}"


def _as_conj(f) -> tuple:
    if f is FALSE:
        return (FALSE,)
    if isinstance(f, (NegGoal, Atom, Eq, NegEq, TypeConstraint)):
        return (f,)
    return tuple(f)


def check_equivalence(before, after: Iterable, model: FiniteModel, globals_: Optional[Iterable[Var]] = None,
                      global_carriers: Optional[Mapping] = None) -> Verdict:
    """Compare ``before`` with the disjunction ``after`` on every global assignment.

    Globals default to the free variables of ``before``; every other variable
    of an ``after`` conjunction is read existentially.
    """
    before = _as_conj(before)
    after = [_as_conj(c) for c in after]
    if globals_ is None:
        globals_ = list(conj_variables(before).values())
    globals_ = list(globals_)
    global_carriers = dict(global_carriers or {})
    pools = []
    exhaustive = True
    for v in globals_:
        if v.name in global_carriers:
            vals = [x for x in global_carriers[v.name] if member(x, v.type)]
            exhaustive = False
        else:
            vals, exact = model.values(v.type)
            exhaustive = exhaustive and exact
            if not vals and v.type.kind != "bot":
                raise MissingCarrier(f"the model has no values of type {format_type(v.type)} for {v.name}")
        pools.append(vals)
    checked = 0
    warnings = []
    for combo in itertools.product(*pools):
        env = {v.name: x for v, x in zip(globals_, combo)}
        ls, rs = Search(model), Search(model)
        lhs = ls.exists(list(before), env)
        rhs = any(rs.exists(list(c), env) for c in after)
        exhaustive = exhaustive and not (ls.truncated or rs.truncated)
        checked += 1
        if lhs != rhs:
            # a true side has a witness; a false side may only lack one
            if (rs if lhs else ls).truncated:
                warnings.append({**env, "<before>": lhs})
                continue
            env["<before>"] = lhs
            return Verdict(False, env, exhaustive, checked, warnings)
    return Verdict(True, None, exhaustive, checked, warnings)


# ---------------------------------------------------------------------------
# property audits


def _solutions(p: ExistenceProperty, ins: dict, model: FiniteModel):
    """Exact output tuples for fixed inputs, plus whether the search was complete."""
    s = Search(model)
    outs = [pos for pos, _ in p.outputs]
    if p.predicate.startswith("=") and "/" in p.predicate:
        x = ins[1]
        functor = p.predicate[1 : p.predicate.rindex("/")]
        if isinstance(x, GTerm) and x.functor == functor and len(x.args) == p.arity - 1:
            return [dict(zip(outs, x.args))], True
        return [], True
    args = []
    for pos in range(1, p.arity + 1):
        if pos in ins:
            v = ins[pos]
            args.append(Num(v) if _num(v) else Var(f"_I{pos}"))
        else:
            args.append(Var(f"_O{pos}"))
    env = {f"_I{pos}": v for pos, v in ins.items() if not _num(v)}
    atom = Atom(p.predicate, tuple(args))
    sols = [{pos: e[f"_O{pos}"] for pos in outs} for e in s.solve([atom], env)]
    uniq = []
    for sol in sols:
        if sol not in uniq:
            uniq.append(sol)
    return uniq, not s.truncated


def audit_property(p: ExistenceProperty, model: FiniteModel, domain: Optional[Mapping] = None) -> Verdict:
    """Check a declared property against the model's interpretation.

    A requirement that fails only because a solution lies outside the output
    carrier is reported in ``warnings``; genuine failures go to ``violations``.
    ``domain`` optionally overrides the sample for an input position.
    """
    domain = dict(domain or {})
    pools = []
    exhaustive = True
    for pos, s in p.inputs:
        if pos in domain:
            pools.append([v for v in domain[pos] if member(v, s.type)])
            continue
        vals, exact = model.values(s.type)
        if not vals:
            raise MissingCarrier(f"the model has no values of type {format_type(s.type)} for input {pos}")
        exhaustive = exhaustive and exact
        pools.append(vals)
    positions = [pos for pos, _ in p.inputs]
    warnings, violations = [], []
    checked = 0
    for combo in itertools.product(*pools):
        ins = dict(zip(positions, combo))
        checked += 1
        if p.kind == "misc":
            theta = {v.name: Num(x) if _num(x) else x for v, x in zip(p.template.args, combo)}
            s = Search(model)
            holds = s.exists([p.template.subst(theta)], {})
            alt = s.exists([p.replacement.subst(theta)], {})
            if holds == alt:
                violations.append((ins, "not p and q disagree"))
            continue
        sols, complete = _solutions(p, ins, model)
        exhaustive = exhaustive and complete
        problems = _requirements(p, sols)
        if not problems:
            # the true interpretation is fine; is the finite carrier?
            inside = [s for s in sols if _in_carriers(p, s, model)]
            if _requirements(p, inside):
                warnings.append((ins, "solution outside the carrier"))
            continue
        violations.extend((ins, msg) for msg in problems)
    passed = not violations
    ce = dict(violations[0][0]) if violations else None
    return Verdict(passed, ce, exhaustive, checked, warnings, violations)


def _in_carriers(p: ExistenceProperty, sol: dict, model: FiniteModel) -> bool:
    for pos, slot in p.outputs:
        vals, _ = model.values(_join_all(slot))
        if sol[pos] not in vals:
            return False
    return True


def _join_all(slot):
    out = normalize(slot.thetas[0][1])
    for _, t in slot.thetas[1:]:
        out = join(out, t)
    return out


def _requirements(p: ExistenceProperty, sols: list) -> list:
    problems = []
    outs = p.outputs

    def in_subtype(sol, j):
        return all(member(sol[pos], s.theta(j)) for pos, s in outs)

    for sol in sols:
        if not any(in_subtype(sol, j) for j in p.indices):
            problems.append(f"solution {sol} lies in no output subtype")
    for j in p.indices:
        n = sum(1 for sol in sols if in_subtype(sol, j))
        if p.kind == "eu" and n != 1:
            problems.append(f"{n} solutions in subtype {j}, expected exactly one")
        elif p.kind == "es" and n > 1:
            problems.append(f"{n} solutions in subtype {j}, expected at most one")
        elif p.kind == "exists" and n < 1:
            problems.append(f"no solution in subtype {j}")
    return problems
