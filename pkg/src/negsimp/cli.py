"""Command line driver.

Exit status: 0 on success, 1 on a parse error, 2 when the step limit is hit,
3 when the oracle finds a counterexample.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Optional

from .engine import Engine, Frontier
from .errors import LimitExceeded, NegSimpError, ParseError
from .formula import FALSE, Eq, NegEq, NegGoal, TypeConstraint, init_neg
from .oracle import check_equivalence
from .parser import parse_model, parse_properties, parse_session
from .properties import default_store
from .terms import Atom

EXIT_OK, EXIT_PARSE, EXIT_LIMIT, EXIT_COUNTEREXAMPLE = 0, 1, 2, 3


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="negsimp",
        description="Simplify a negative goal to a negation-free frontier using typed existence properties.",
    )
    ap.add_argument("--properties", type=Path, help="file of property declarations")
    ap.add_argument("--goal", type=Path, required=True, help="file holding neg([Locals],(Conj)); may start with declarations")
    ap.add_argument("--model", type=Path, help="finite model for --oracle")
    ap.add_argument("--oracle", action="store_true", help="check the frontier against the goal on the model")
    ap.add_argument("--naive", action="store_true", help="re-test all atoms after each extraction")
    ap.add_argument("--trace", action="store_true", help="print every derivation step")
    ap.add_argument("--count-tests", action="store_true", help="print the number of extractability tests")
    ap.add_argument("--max-steps", type=int, default=10_000, metavar="N")
    ap.add_argument("--format", choices=("text", "structured"), default="text")
    return ap


def _literal_record(lit) -> dict:
    if lit is FALSE:
        return {"kind": "false", "text": "false"}
    kind = {Atom: "atom", NegGoal: "neg", NegEq: "neg_eq", Eq: "eq", TypeConstraint: "type"}.get(type(lit), "check")
    rec = {"kind": kind, "text": str(lit)}
    if isinstance(lit, Atom):
        rec["predicate"] = lit.pred
        rec["args"] = [str(a) for a in lit.args]
    return rec


def structured(frontier: Frontier) -> dict:
    return {
        "false": frontier.is_false,
        "complete": frontier.complete,
        "frontier": [] if frontier.is_false else [
            {"literals": [_literal_record(l) for l in conj]} for conj in frontier.conjunctions
        ],
        "stats": frontier.stats,
    }


def run(argv: Optional[list] = None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    if args.max_steps < 1:
        print("error: --max-steps must be at least 1", file=sys.stderr)
        return EXIT_PARSE
    if args.oracle and args.model is None:
        print("error: --oracle needs --model", file=sys.stderr)
        return EXIT_PARSE
    store = default_store()
    try:
        if args.properties is not None:
            for p in parse_properties(args.properties.read_text()):
                store.declare(p)
        props, conj, locals_ = parse_session(args.goal.read_text())
        for p in props:
            store.declare(p)
        model = parse_model(args.model.read_text()) if args.model is not None else None
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except NegSimpError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE

    engine = Engine(store, naive=args.naive, max_steps=args.max_steps, strict=True)
    status = EXIT_OK
    try:
        frontier = engine.simplify(conj, locals_)
    except LimitExceeded as exc:
        frontier = exc.frontier
        status = EXIT_LIMIT
        print(f"% {exc}; frontier is partial", file=out)

    report = structured(frontier)
    if args.oracle and status == EXIT_OK:
        verdict = check_equivalence((init_neg(conj, locals_),), frontier.conjunctions, model)
        report["oracle"] = {"passed": verdict.passed, "exhaustive": verdict.exhaustive,
                            "counterexample": {k: str(v) for k, v in (verdict.counterexample or {}).items()}}
        if not verdict.passed:
            status = EXIT_COUNTEREXAMPLE
    else:
        verdict = None

    if args.format == "structured":
        if args.trace:
            report["trace"] = frontier.trace
        print(json.dumps(report, indent=2), file=out)
        return status
    if args.trace:
        for line in frontier.trace:
            print(f"% {line}", file=out)
    print(frontier.format(), file=out)
    if args.count_tests:
        mode = "naive" if args.naive else "worklist"
        print(f"% sqvt tests: {frontier.stats['sqvt_calls']} ({mode}), steps: {frontier.stats['steps']}", file=out)
    if verdict is not None:
        print(f"% oracle: {verdict}", file=out)
    return status


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
