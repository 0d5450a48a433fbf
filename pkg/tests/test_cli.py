from __future__ import annotations

import io
import json
import subprocess
import sys
from pathlib import Path

import pytest

from conftest import canon
from negsimp.cli import EXIT_COUNTEREXAMPLE, EXIT_LIMIT, EXIT_OK, EXIT_PARSE, run

DATA = Path(__file__).parent / "data"


def call(*argv):
    out = io.StringIO()
    code = run([str(a) for a in argv], out)
    return code, out.getvalue()


def test_session1_text():
    code, out = call("--goal", DATA / "session1.pl")
    assert code == EXIT_OK
    assert "neg_eq(" in out and out.rstrip().endswith("no (more) solution.")


def test_session2_structured():
    code, out = call("--goal", DATA / "session2.pl", "--format", "structured")
    rep = json.loads(out)
    assert code == EXIT_OK and rep["complete"] and not rep["false"]
    (conj,) = rep["frontier"]
    assert [l["kind"] for l in conj["literals"]] == ["atom", "atom", "neg"]
    assert [l["predicate"] for l in conj["literals"][:2]] == ["append", "sort"]


def test_chain_counts():
    code, out = call("--goal", DATA / "chain5.pl", "--properties", DATA / "chain_props.pl", "--count-tests")
    assert code == EXIT_OK
    assert out.splitlines()[0] == "no (more) solution."
    assert "% sqvt tests: 9 (worklist)" in out
    _, out = call("--goal", DATA / "chain5.pl", "--properties", DATA / "chain_props.pl", "--count-tests", "--naive")
    assert "% sqvt tests: 15 (naive)" in out


def test_oracle_pass():
    code, out = call("--goal", DATA / "svt.pl", "--properties", DATA / "svt_props.pl",
                     "--model", DATA / "svt_model.pl", "--oracle")
    assert code == EXIT_OK and "% oracle: pass (30 assignments" in out


def test_parse_error(tmp_path, capsys):
    bad = tmp_path / "bad.pl"
    bad.write_text("neg([X], (p(X,,Y))).")
    code, _ = call("--goal", bad)
    assert code == EXIT_PARSE
    assert "line 1, column 15" in capsys.readouterr().err


def test_step_limit():
    code, out = call("--goal", DATA / "session1.pl", "--max-steps", 1)
    assert code == EXIT_LIMIT and "partial" in out


def test_counterexample_exit(tmp_path):
    # an unsound declaration: not q(X) is claimed equivalent to q(X)
    props = tmp_path / "bad.pl"
    props.write_text("misc(q(X:int), q(X:int)).")
    goal = tmp_path / "g.pl"
    goal.write_text("neg([], (q(A:int(0,2)))).")
    model = tmp_path / "m.pl"
    model.write_text("range 0..2.\nextension q/1 = {(1)}.")
    code, out = call("--goal", goal, "--properties", props, "--model", model, "--oracle")
    assert code == EXIT_COUNTEREXAMPLE and "counterexample: <before>=True, A=0" in out


def test_oracle_requires_model(capsys):
    assert call("--goal", DATA / "svt.pl", "--oracle")[0] == EXIT_PARSE


def test_trace_lines():
    _, out = call("--goal", DATA / "f0.pl", "--trace")
    trace = [l for l in out.splitlines() if l.startswith("% ")]
    assert trace[0].startswith("% 1: eu on sq(")


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "negsimp", "--goal", str(DATA / "f0.pl")],
                          capture_output=True, text=True, timeout=60)
    assert proc.returncode == 0
    stanzas = proc.stdout.strip().split(";\n\n")
    assert len(stanzas) == 5 and stanzas[-1] == "no (more) solution."
