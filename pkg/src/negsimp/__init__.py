"""Simplify negative goals with typed existence properties."""
from __future__ import annotations

from .engine import Engine, Frontier, simplify
from .errors import LimitExceeded, NegSimpError, ParseError, TheoremViolation
from .estimator import NegationSimplifier
from .extractor import SqvtResult, Stats, sqvt
from .formula import FALSE, Digraph, Eq, NegEq, NegGoal, TypeConstraint, init_neg
from .lattice import NType, intersect, normalize, subtype
from .oracle import FiniteModel, Verdict, audit_property, check_equivalence, evaluate, int_model
from .parser import parse_goal, parse_model, parse_properties, parse_session, parse_type
from .properties import ExistenceProperty, PropertyStore, default_store
from .terms import Atom, Compound, Num, Var

__all__ = [
    "Atom", "Compound", "Digraph", "Engine", "Eq", "ExistenceProperty", "FALSE", "FiniteModel",
    "Frontier", "LimitExceeded", "NType", "NegEq", "NegGoal", "NegSimpError", "NegationSimplifier",
    "Num", "ParseError", "PropertyStore", "SqvtResult", "Stats", "TheoremViolation", "TypeConstraint",
    "Var", "Verdict", "audit_property", "check_equivalence", "default_store", "evaluate", "init_neg",
    "int_model", "intersect", "normalize", "parse_goal", "parse_model", "parse_properties",
    "parse_session", "parse_type", "simplify", "sqvt", "subtype",
]
