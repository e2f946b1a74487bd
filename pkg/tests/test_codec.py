"""Tests for the text and JSON wire formats."""

import json
from fractions import Fraction

import pytest

from services.algebra import Basis, Element, Space, Tensor
from services.codec import (
    as_element,
    dump_element,
    dump_tensor,
    load_document,
    parse_diagram,
    read_text,
)
from services.diagram import EMPTY, bullet, canonicalize, tensor
from services.errors import DiagramError, MalformedInputError, MetadataMismatchError
from services.parqsym import comul_M


def test_parse_diagram_forms(dot, bar):
    assert parse_diagram("[[1],[-1]]") == dot
    assert parse_diagram('{"order": 1, "blocks": [[-1, 1]]}') == bar
    assert parse_diagram("[[2,-1],[-2],[1]]") == canonicalize(2, [[1], [2, -1], [-2]])
    assert parse_diagram('{"order": 0, "blocks": []}') == EMPTY


def test_parse_diagram_rejects():
    with pytest.raises(MalformedInputError):
        parse_diagram("[[1],")
    with pytest.raises(DiagramError):
        parse_diagram("[[1],[1,-1]]")
    with pytest.raises(MalformedInputError):
        parse_diagram('{"order": -1, "blocks": []}')
    with pytest.raises(MalformedInputError):
        parse_diagram("[1, 2]")


def test_element_json(dot, bar):
    x = Element(Space.PARQSYM, Basis.M, {tensor(dot, bar): Fraction(1, 2), dot: Fraction(-3)})
    text = dump_element(x)
    payload = json.loads(text)
    assert payload["space"] == "parqsym"
    assert payload["basis"] == "M"
    assert "q" not in payload
    assert [t["coeff"] for t in payload["terms"]] == ["-3", "1/2"]
    assert payload["terms"][0]["key"] == {"order": 1, "blocks": [[1], [-1]]}
    assert load_document(text) == x


def test_q_elements_keep_their_parameter(dot):
    x = Element.basis_element(Space.PARSYM, Basis.KQ, dot, Fraction(2, 3))
    payload = json.loads(dump_element(x))
    assert payload["q"] == "2/3"
    assert load_document(dump_element(x)) == x


def test_tensor_json(dot, bar):
    t = comul_M(bullet(dot, bar))
    payload = json.loads(dump_tensor(t))
    assert payload["arity"] == 2
    assert len(payload["terms"]) == 2
    assert load_document(dump_tensor(t)) == t
    assert isinstance(load_document(dump_tensor(t)), Tensor)


def test_composition_elements():
    x = Element(Space.QSYM, Basis.NATURAL, {(2, 1): 1, (): Fraction(1, 2)})
    assert load_document(dump_element(x)) == x
    assert load_document("[2, 1]") == (2, 1)
    with pytest.raises(MalformedInputError):
        load_document("[2, 0]")


def test_bad_documents():
    with pytest.raises(MalformedInputError):
        load_document('{"space": "parqsym", "basis": "Z", "terms": []}')
    with pytest.raises(MalformedInputError):
        load_document('{"space": "parqsym", "basis": "M", "terms": [{"coeff": "1/0", "key": {"order": 1, "blocks": [[1], [-1]]}}]}')
    with pytest.raises(MalformedInputError):
        load_document('"dot"')
    with pytest.raises(MalformedInputError):
        load_document('{"space": "qsym", "basis": "natural", "terms": [{"coeff": "1", "key": {"order": 0, "blocks": []}}]}')


def test_as_element(dot):
    assert as_element(dot, Space.PARQSYM, Basis.L) == Element.basis_element(Space.PARQSYM, Basis.L, dot)
    assert as_element((), Space.PARSYM, Basis.H) == Element.basis_element(Space.PARSYM, Basis.H, EMPTY)
    assert as_element(EMPTY, Space.NSYM, Basis.NATURAL) == Element(Space.NSYM, Basis.NATURAL, {(): 1})
    with pytest.raises(MalformedInputError):
        as_element((2,), Space.PARSYM, Basis.H)
    with pytest.raises(MalformedInputError):
        as_element(dot, Space.QSYM, Basis.NATURAL)
    with pytest.raises(MalformedInputError):
        as_element(comul_M(dot), Space.PARQSYM, Basis.M)
    with pytest.raises(MetadataMismatchError):
        as_element(dot, Space.PARQSYM, Basis.M, "2")


def test_read_text(tmp_path):
    path = tmp_path / "d.json"
    path.write_text("[[1,-1]]", encoding="utf-8")
    assert read_text(str(path)) == "[[1,-1]]"
    assert read_text("[[1],[-1]]") == "[[1],[-1]]"
