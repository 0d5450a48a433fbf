from __future__ import annotations

import re

import pytest

import negsimp.extractor as extractor
from negsimp.lattice import NONNEGREAL, POSINT, POSREAL, interval
from negsimp.properties import PropertyStore, es, eu, i, o
from negsimp.lattice import NEGINT, TOP
from negsimp.terms import Atom, Num, Var


@pytest.fixture(autouse=True)
def theorem_checks(monkeypatch):
    """Every sqvt call made by any test re-checks the extractor postconditions."""
    monkeypatch.setattr(extractor, "CHECK_THEOREMS", True)
    yield


@pytest.fixture
def sq_es():
    return es("sq", [o({1: NEGINT, 2: POSINT}), i(POSINT)], (1, 2))


@pytest.fixture
def f0_goal():
    x = Var("X", interval("real", -20, 20))
    y = Var("Y", POSREAL)
    u = Var("U", NONNEGREAL)
    return [Atom("sq", (x, y)), Atom("add", (x, u, Num(-1)))], [x, u]


def chain(n: int):
    """``not exists x2..x(n+1). p(xn,x(n+1)), ..., p(x1,x2)``."""
    xs = [Var(f"X{k}") for k in range(1, n + 2)]
    atoms = [Atom("p", (xs[k - 1], xs[k])) for k in range(n, 0, -1)]
    return atoms, xs[1:]


def chain_store() -> PropertyStore:
    return PropertyStore([eu("p", [i(TOP), o({1: TOP})])])


_FRESH = re.compile(r"\b[A-Z_][A-Za-z_]*?\d+\b")


def canon(conj) -> str:
    """Print a conjunction with fresh (digit-suffixed) names renamed by first use."""
    text = ", ".join(str(l) for l in conj)
    names: dict = {}
    return _FRESH.sub(lambda m: names.setdefault(m.group(0), f"_V{len(names)}"), text)


def canon_frontier(frontier) -> list:
    return [canon(c) for c in frontier]


# -- acceptance summary ---------------------------------------------------------

_CRITERIA: dict = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, title): acceptance criterion the test belongs to")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or (rep.when != "call" and not rep.failed):
        return
    n, title = mark.args
    entry = _CRITERIA.setdefault(n, {"title": title, "failed": [], "ran": 0})
    if rep.when == "call":
        entry["ran"] += 1
    if rep.failed:
        entry["failed"].append(item.name)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_CRITERIA):
        e = _CRITERIA[n]
        status = "FAIL" if e["failed"] or not e["ran"] else "PASS"
        detail = f"  (failed: {', '.join(e['failed'])})" if e["failed"] else ""
        terminalreporter.write_line(f"criterion {n:>2}: {status}  {e['title']}{detail}")
