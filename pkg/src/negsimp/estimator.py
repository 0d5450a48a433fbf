"""Estimator-style front end: ``fit`` loads properties, ``transform`` simplifies goals."""
from __future__ import annotations

from typing import Iterable

from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .engine import Engine, Frontier
from .formula import NegGoal
from .parser import parse_goal, parse_properties
from .properties import ExistenceProperty, PropertyStore, arithmetic_seeds
from .terms import Atom, Var


def check_properties(props) -> list:
    """Accept declaration text, a single property or an iterable of either."""
    if props is None:
        return []
    if isinstance(props, str):
        return parse_properties(props)
    if isinstance(props, ExistenceProperty):
        return [props]
    out = []
    for p in props:
        out.extend(check_properties(p))
    return out


def check_goal(goal) -> tuple:
    """Normalise a goal to ``(conjunction, locals)``.

    Accepts goal text, a ``NegGoal`` or a ``(atoms, locals)`` pair.
    """
    if isinstance(goal, str):
        conj, locals_ = parse_goal(goal)
        return tuple(conj), tuple(locals_)
    if isinstance(goal, NegGoal):
        return tuple(goal.conjunction()), tuple(goal.locals)
    try:
        conj, locals_ = goal
    except (TypeError, ValueError):
        raise TypeError(f"cannot read a goal from {type(goal).__name__}") from None
    conj, locals_ = tuple(conj), tuple(locals_)
    for a in conj:
        if not isinstance(a, Atom):
            raise TypeError(f"goal conjunction holds a non-atom: {a!r}")
    for v in locals_:
        if not isinstance(v, Var):
            raise TypeError(f"local list holds a non-variable: {v!r}")
    return conj, locals_


def check_goals(X) -> list:
    if isinstance(X, (str, NegGoal)):
        return [check_goal(X)]
    return [check_goal(g) for g in X]


class NegationSimplifier(TransformerMixin, BaseEstimator):
    """Turns negative goals into equivalent negation-free frontiers.

    Parameters
    ----------
    properties : text, property or iterable, optional
        Extra existence properties declared on top of the seeds.
    include_seeds : bool
        Load the built-in arithmetic properties first.
    chan : bool
        Enable the equality rule for ``x = f(...)`` atoms.
    naive : bool
        Re-test every remaining atom after an extraction instead of only
        the atoms that share a promoted variable.
    max_steps, max_children : int
        Search limits; see ``Engine``.
    strict : bool
        Raise ``LimitExceeded`` instead of returning a partial frontier.
    """

    def __init__(self, properties=None, include_seeds=True, chan=True, naive=False,
                 max_steps=10_000, max_children=4096, strict=False):
        self.properties = properties
        self.include_seeds = include_seeds
        self.chan = chan
        self.naive = naive
        self.max_steps = max_steps
        self.max_children = max_children
        self.strict = strict

    def fit(self, X=None, y=None):
        """Build the property store.  ``X`` and ``y`` are ignored."""
        if int(self.max_steps) < 1:
            raise ValueError("max_steps must be at least 1")
        props = arithmetic_seeds() if self.include_seeds else []
        props += check_properties(self.properties)
        self.store_ = PropertyStore(props, chan=self.chan)
        self.n_properties_ = len(self.store_)
        return self

    def _engine(self) -> Engine:
        return Engine(self.store_, naive=self.naive, max_steps=int(self.max_steps),
                      max_children=int(self.max_children), strict=self.strict)

    def transform(self, X) -> list:
        """One ``Frontier`` per input goal."""
        check_is_fitted(self, "store_")
        engine = self._engine()
        return [engine.simplify(conj, locals_) for conj, locals_ in check_goals(X)]

    def simplify(self, goal) -> Frontier:
        return self.transform([goal])[0]

    def count_tests(self, X: Iterable) -> list:
        """Number of extractability tests spent on each goal."""
        return [f.stats["sqvt_calls"] for f in self.transform(X)]
