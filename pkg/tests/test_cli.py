"""Tests for the command-line verbs and their exit codes."""

import io
import json

import pytest

from main import EXIT_CHECK_FAILED, EXIT_INVARIANT, EXIT_MALFORMED, EXIT_OK, run

DOT = "[[1],[-1]]"
BAR = "[[1,-1]]"
DOT_TENSOR_BAR = "[[1],[-1],[2,-2]]"
DOT_BULLET_BAR = "[[1],[-1,2,-2]]"


def invoke(*argv):
    out = io.StringIO()
    code = run(list(argv), out=out)
    return code, out.getvalue().splitlines()


def test_enum_counts():
    code, lines = invoke("enum", "--order", "2")
    assert code == EXIT_OK
    assert len(lines) == 16
    assert json.loads(lines[-1]) == {"count": 15}


def test_enum_with_predicate_and_classification():
    code, lines = invoke("enum", "--order", "2", "--predicate", "perfect_matching", "--classify")
    assert code == EXIT_OK
    assert json.loads(lines[-1]) == {"count": 3}
    first = json.loads(lines[0])
    assert first["classification"]["perfect_matching"] is True


def test_enum_guards_large_orders():
    code, _ = invoke("enum", "--order", "5")
    assert code == EXIT_MALFORMED
    code, _ = invoke("enum", "--order", "-1")
    assert code == EXIT_MALFORMED


def test_op_mul():
    code, lines = invoke("op", "mul", "--space", "parqsym", "--basis", "M", "--in", DOT, BAR)
    assert code == EXIT_OK
    payload = json.loads(lines[0])
    assert payload["basis"] == "M"
    assert len(payload["terms"]) == 3
    assert {t["coeff"] for t in payload["terms"]} == {"1"}


def test_op_comul_and_counit():
    code, lines = invoke("op", "comul", "--space", "parsym", "--basis", "H", "--in", DOT_BULLET_BAR)
    assert code == EXIT_OK
    assert len(json.loads(lines[0])["terms"]) == 3
    code, lines = invoke("op", "counit", "--space", "parqsym", "--basis", "L", "--in", DOT)
    assert (code, lines) == (EXIT_OK, ["0"])


def test_op_antipode_methods():
    _, takeuchi = invoke("op", "antipode", "--space", "parqsym", "--basis", "M", "--in", DOT_TENSOR_BAR)
    _, explicit = invoke(
        "op", "antipode", "--space", "parqsym", "--basis", "M", "--method", "explicit", "--in", DOT_TENSOR_BAR
    )
    assert takeuchi == explicit
    assert len(json.loads(takeuchi[0])["terms"]) == 2


def test_op_on_compositions():
    code, lines = invoke("op", "mul", "--space", "qsym", "--basis", "natural", "--in", "[1]", "[1]")
    assert code == EXIT_OK
    terms = {tuple(t["key"]): t["coeff"] for t in json.loads(lines[0])["terms"]}
    assert terms == {(1, 1): "2", (2,): "1"}


def test_op_input_errors():
    code, _ = invoke("op", "mul", "--space", "parqsym", "--basis", "M", "--in", DOT)
    assert code == EXIT_MALFORMED
    code, _ = invoke("op", "comul", "--space", "parqsym", "--basis", "M", "--in", "[[1],")
    assert code == EXIT_MALFORMED
    code, _ = invoke("op", "comul", "--space", "parqsym", "--basis", "H", "--in", DOT)
    assert code == EXIT_MALFORMED
    code, _ = invoke("op", "comul", "--space", "galaxy", "--basis", "M", "--in", DOT)
    assert code == EXIT_MALFORMED


def test_q_minus_one_is_an_invariant_violation():
    code, _ = invoke("op", "comul", "--space", "parqsym", "--basis", "ETAQ", "--q", "-1", "--in", DOT)
    assert code == EXIT_INVARIANT
    code, _ = invoke("check", "--suite", "bases", "--max-order", "1", "--q", "-1")
    assert code == EXIT_INVARIANT


def test_convert():
    code, lines = invoke("convert", "--from", "M", "--to", "ETAQ", "--q", "1", "--in", DOT_TENSOR_BAR)
    assert code == EXIT_OK
    payload = json.loads(lines[0])
    assert payload["q"] == "1"
    assert sorted(t["coeff"] for t in payload["terms"]) == ["-1/4", "1/4"]
    code, _ = invoke("convert", "--from", "M", "--to", "H", "--in", DOT)
    assert code == EXIT_MALFORMED


def test_pair():
    code, lines = invoke("pair", "--left", DOT_TENSOR_BAR, "--right", DOT_TENSOR_BAR)
    assert (code, lines) == (EXIT_OK, ["1"])
    code, lines = invoke("pair", "--left", "[2, 1]", "--right", "[2, 1]")
    assert (code, lines) == (EXIT_OK, ["1"])


def test_map():
    code, lines = invoke("map", "--name", "psi-pq", "--in", DOT_BULLET_BAR)
    assert code == EXIT_OK
    payload = json.loads(lines[0])
    assert payload["space"] == "qsym"
    assert payload["terms"] == [{"coeff": "1", "key": [2]}]


def test_render():
    code, lines = invoke("render", "--in", DOT_BULLET_BAR)
    assert code == EXIT_OK
    assert lines == ["top    a b", "bottom b b"]


@pytest.mark.parametrize("suite", ["hopf", "duality", "subalgebras"])
def test_check_passes(suite):
    code, lines = invoke("check", "--suite", suite, "--max-order", "2", "--sample-size", "0")
    assert code == EXIT_OK
    report = json.loads(lines[0])
    assert report["status"] == "pass"
    assert report["suite"] == suite


def test_check_exit_code_for_failures(monkeypatch):
    from models.schemas import CheckParameters, CheckReport

    failing = CheckReport(
        suite="hopf",
        parameters=CheckParameters(max_order=0),
        status="fail",
        counterexamples=[{"inputs": ["M∅"], "term": "x", "detail": ""}],
    )
    monkeypatch.setattr("main.run_suite", lambda *args, **kwargs: failing)
    code, _ = invoke("check", "--suite", "hopf", "--max-order", "0")
    assert code == EXIT_CHECK_FAILED


def test_unknown_verb():
    assert invoke("frobnicate")[0] == EXIT_MALFORMED
