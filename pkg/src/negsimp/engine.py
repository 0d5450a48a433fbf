"""Derivation steps on negative goals and the driver that reaches a frontier."""
from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from typing import Optional

from .equality import simplify_conj
from .errors import LimitExceeded
from .formula import FALSE, Eq, NegEq, NegGoal, conj_variables, format_conj, init_neg
from .lattice import subtype
from .properties import Out, PropertyStore, chan_predicate, default_store
from .extractor import Stats, sqvt
from .terms import Atom, Compound, NameSupply, Var, type_of


@dataclass
class Frontier:
    """Negation-free conjunctions (residual ``neg`` literals allowed when stuck)."""

    conjunctions: list
    complete: bool = True
    stats: dict = field(default_factory=dict)
    trace: list = field(default_factory=list)

    @property
    def is_false(self) -> bool:
        return all(any(l is FALSE for l in c) for c in self.conjunctions)

    def __iter__(self):
        return iter(self.conjunctions)

    def __len__(self):
        return len(self.conjunctions)

    def format(self) -> str:
        if self.is_false:
            return "no (more) solution."
        return ";\n\n".join(format_conj(c) for c in self.conjunctions) + ";\n\nno (more) solution."


# ---------------------------------------------------------------------------
# equality atoms as pseudo predicates


def flatten(atom: Atom) -> Atom:
    """``x = f(t1..tn)`` becomes ``=f/n(x, t1..tn)`` so Chan's rule can apply."""
    if atom.pred == "=" and atom.arity == 2:
        a, b = atom.args
        if isinstance(b, Compound) and b.args and not isinstance(a, Compound):
            return Atom(chan_predicate(b.functor, len(b.args)), (a,) + b.args)
        if isinstance(a, Compound) and a.args and not isinstance(b, Compound):
            return Atom(chan_predicate(a.functor, len(a.args)), (b,) + a.args)
    return atom


def unflatten(atom: Atom) -> Atom:
    if atom.pred.startswith("=") and "/" in atom.pred:
        functor = atom.pred[1 : atom.pred.rindex("/")]
        return Atom("=", (atom.args[0], Compound(functor, atom.args[1:])))
    return atom


class Engine:
    """Rewrites negative goals using the declared properties.

    One instance owns a fresh-name supply, the test counters and the trace;
    ``simplify`` resets all three so repeated runs print identically.
    """

    def __init__(self, store: Optional[PropertyStore] = None, naive: bool = False,
                 max_steps: int = 10_000, max_children: int = 4096, strict: bool = False):
        if max_steps < 1:
            raise ValueError("max_steps must be at least 1")
        self.store = store if store is not None else default_store()
        self.naive = naive
        self.max_steps = max_steps
        self.max_children = max_children
        self.strict = strict
        self.reset()

    def reset(self, taken=()) -> None:
        self.supply = NameSupply(taken)
        self.stats = Stats()
        self.trace: list = []
        self.steps = 0

    # -- single rules --------------------------------------------------------

    def _et(self, g: NegGoal) -> bool:
        (_, atom), = g.atoms
        loc = g.local_names
        flat = flatten(atom)
        for p in self.store.lookup(flat.pred, flat.arity, ("exists",)):
            ok = True
            seen = set()
            for pos, slot in enumerate(p.slots, 1):
                arg = flat.args[pos - 1]
                if isinstance(slot, Out):
                    if not (isinstance(arg, Var) and arg.name in loc and arg.name not in seen):
                        ok = False
                        break
                    seen.add(arg.name)
                    if not subtype(slot.theta(1), arg.type):
                        ok = False
                        break
                else:
                    if set(arg.variables()) & loc or not subtype(type_of(arg), slot.type):
                        ok = False
                        break
            if ok:
                return True
        return False

    def _rt(self, g: NegGoal) -> Optional[Atom]:
        (_, atom), = g.atoms
        if set(atom.variables()) & g.local_names:
            return None
        for p in self.store.lookup(atom.pred, atom.arity, ("misc",)):
            if all(subtype(type_of(a), s.type) for a, s in zip(atom.args, p.slots)):
                theta = {v.name: a for v, a in zip(p.template.args, atom.args)}
                return p.replacement.subst(theta)
        return None

    def _expand(self, g: NegGoal, node: int, res, es: bool) -> list:
        """Per-copy disjunct lists for an extraction; see ``step``."""
        moved = {v.name for v in res.rvec.values()} | {w.name for w in res.wvec}
        rest = [(i, a) for i, a in g.atoms if i != node]
        pending = [n for n in g.checklist if n != node]
        if self.naive:
            phi = [i for i, _ in rest]
        else:
            phi = pending + [i for i, _ in rest if i not in pending and g.graph.link(i, moved)]
        dgraph = g.graph.delete(moved | {node})
        new_locals = tuple(v for v in g.locals if v.name not in moved)

        per_copy = []
        for j, copy in res.copies:
            wmap = {w.name: self.supply.copy(w) for w in res.wvec}
            xmap = {res.xvec[p].name: copy[p] for p in copy}
            theta = {**wmap, **xmap}
            head = unflatten(res.atom.subst(theta))
            lhs = tuple(res.svec[p].subst(theta) for p in res.svec)
            rhs = tuple(res.tvec[p].subst(theta) for p in res.svec)
            residual = NegGoal(new_locals, tuple((i, a.subst(theta)) for i, a in rest), tuple(phi),
                               graph=dgraph)
            options = []
            if es:
                options.append((NegGoal(tuple(copy.values()), ((0, head),), (0,), extra=True),))
            if res.svec:
                options.append((head, NegEq(tuple(wmap.values()), lhs, rhs)))
            options.append((head,) + tuple(Eq(a, b) for a, b in zip(lhs, rhs)) + (residual,))
            per_copy.append(options)
        return per_copy

    def step(self, ctx: tuple, k: int) -> list:
        """Children of ``ctx`` from rewriting the negative goal at index ``k``."""
        g = ctx[k]
        before, after = ctx[:k], ctx[k + 1 :]
        if not g.atoms:
            self._log("empty", g, 1)
            return [before + (FALSE,) + after]
        if len(g.atoms) == 1 and g.checklist:
            if self._et(g):
                self._log("ET", g, 1)
                return [before + (FALSE,) + after]
            q = self._rt(g)
            if q is not None:
                self._log("RT", g, 1)
                return [before + (q,) + after]
        if not g.checklist:
            return [ctx]
        node = g.checklist[0]
        atom = flatten(g.atom(node))
        loc = g.local_names
        kinds = ("eu",) if g.extra else ("eu", "es")
        for kind in kinds:
            for p in self.store.lookup(atom.pred, atom.arity, (kind,)):
                res = sqvt(p, atom, loc, self.supply, self.stats)
                if res is None:
                    continue
                self.stats.extractions += 1
                if not res.copies:
                    self._log(f"{kind} (no relevant index)", g, 1, node)
                    return [before + after]
                per_copy = self._expand(g, node, res, kind == "es")
                total = 1
                for opts in per_copy:
                    total *= len(opts)
                if total > self.max_children:
                    raise LimitExceeded(f"step would produce {total} children", None)
                children = []
                for combo in itertools.product(*per_copy):
                    parts = tuple(itertools.chain.from_iterable(combo))
                    children.append(before + parts + after)
                self._log(kind, g, len(children), node)
                return children
        self._log("skip", g, 1, node)
        return [before + (g.with_checklist(g.checklist[1:]),) + after]

    def _log(self, rule, g, n, node=None):
        what = f" on {g.atom(node)}" if node is not None else ""
        self.trace.append(f"{len(self.trace) + 1}: {rule}{what} in {g} -> {n} child(ren)")

    # -- driver --------------------------------------------------------------

    def to_frontier(self, conj) -> Frontier:
        """Rewrite until no negative goal has pending atoms (breadth first)."""
        queue = deque([tuple(conj)])
        out: list = []
        complete = True
        while queue:
            cur = simplify_conj(queue.popleft(), self.supply)
            if cur is None:
                continue
            k = next((i for i, l in enumerate(cur) if isinstance(l, NegGoal) and (l.checklist or not l.atoms)), None)
            if k is None:
                out.append(cur)
                continue
            if self.steps >= self.max_steps:
                complete = False
                out.append(cur)
                out.extend(c for c in queue)
                queue.clear()
                break
            self.steps += 1
            queue.extend(self.step(cur, k))
        if not out:
            out = [(FALSE,)]
        frontier = Frontier(out, complete, self.stats.snapshot(), list(self.trace))
        frontier.stats["steps"] = self.steps
        if not complete and self.strict:
            raise LimitExceeded(f"no frontier within {self.max_steps} steps", frontier)
        return frontier

    def simplify(self, conj, locals_) -> Frontier:
        """Simplify ``not exists locals_.(conj)``; the entry point for callers."""
        conj = tuple(conj)
        names = set(conj_variables(conj)) | {v.name for v in locals_}
        self.reset(names)
        return self.to_frontier((init_neg(conj, locals_),))


def simplify(conj, locals_, store: Optional[PropertyStore] = None, **kw) -> Frontier:
    return Engine(store, **kw).simplify(conj, locals_)
