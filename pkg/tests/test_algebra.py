"""Tests for exact elements, tensors and the Takeuchi antipode."""

from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from services.algebra import (
    Basis,
    Element,
    Space,
    Tensor,
    convolve_identity,
    convolve_identity_right,
    element_sum,
    make_q,
    parse_scalar,
    reduced_coproduct,
    scale,
    takeuchi_antipode,
    takeuchi_terms,
)
from services.diagram import EMPTY, bullet, diagrams_up_to, tensor
from services.errors import InvariantViolation, MalformedInputError, MetadataMismatchError
from services.parqsym import m_handle
from services.parsym import h_handle


def M(d):
    return Element.basis_element(Space.PARQSYM, Basis.M, d)


def H(d):
    return Element.basis_element(Space.PARSYM, Basis.H, d)


def test_add_and_scale(dot):
    assert M(dot) + M(dot) == Element(Space.PARQSYM, Basis.M, {dot: 2})
    assert scale(0, M(dot)).is_zero()
    assert (M(dot) - M(dot)).is_zero()
    assert str(M(dot) - M(dot)) == "0"


def test_add_rejects_mixed_parents(dot):
    with pytest.raises(MetadataMismatchError):
        M(dot) + Element.basis_element(Space.PARQSYM, Basis.L, dot)
    with pytest.raises(MetadataMismatchError):
        Element.basis_element(Space.PARSYM, Basis.KQ, dot, 1) + Element.basis_element(Space.PARSYM, Basis.KQ, dot, 2)


def test_element_sum_needs_items():
    with pytest.raises(MalformedInputError):
        element_sum([])


@given(st.fractions(), st.fractions())
def test_scale_distributes(a, b):
    x = Element(Space.PARQSYM, Basis.M, {EMPTY: Fraction(3, 2)})
    assert scale(a, x) + scale(b, x) == scale(a + b, x)


def test_scalars():
    assert parse_scalar("3/6") == Fraction(1, 2)
    assert parse_scalar(-4) == Fraction(-4)
    for bad in ("1/0", "one", True, 1.5):
        with pytest.raises(MalformedInputError):
            parse_scalar(bad)
    assert make_q("1/2") == Fraction(1, 2)
    with pytest.raises(InvariantViolation):
        make_q(-1)


def test_metadata_rules(dot):
    with pytest.raises(InvariantViolation):
        Element(Space.PARSYM, Basis.KQ, {dot: 1})
    with pytest.raises(InvariantViolation):
        Element(Space.PARQSYM, Basis.ETAQ, {dot: 1}, Fraction(-1))
    with pytest.raises(MetadataMismatchError):
        Element(Space.PARSYM, Basis.H, {dot: 1}, Fraction(2))
    with pytest.raises(MalformedInputError):
        Element(Space.PARQSYM, Basis.H, {dot: 1})
    eta = Element(Space.PARQSYM, Basis.ETA, {dot: 1})
    assert (eta.basis, eta.q) == (Basis.ETAQ, Fraction(1))


def test_tensor_arity(dot):
    with pytest.raises(MalformedInputError):
        Tensor(Space.PARQSYM, Basis.M, {(dot,): Fraction(1)})
    assert Tensor(Space.PARQSYM, Basis.M, {(dot, dot, dot): 1}, arity=3).coefficient((dot, dot, dot)) == 1


def test_reduced_coproduct(dot, bar):
    assert reduced_coproduct(m_handle, M(tensor(dot, bar))) == m_handle.tensor({(dot, bar): Fraction(1)})
    assert reduced_coproduct(m_handle, M(dot)).is_zero()
    assert reduced_coproduct(m_handle, M(EMPTY)).is_zero()


def test_takeuchi_examples(dot, bar):
    assert takeuchi_antipode(m_handle, M(dot)) == -M(dot)
    assert takeuchi_antipode(m_handle, M(tensor(dot, bar))) == M(tensor(bar, dot)) + M(bullet(dot, bar))
    assert takeuchi_antipode(h_handle, H(bullet(dot, bar))) == H(tensor(dot, bar)) - H(bullet(dot, bar))


def test_takeuchi_rejects_foreign_elements(dot):
    with pytest.raises(MetadataMismatchError):
        takeuchi_antipode(m_handle, H(dot))


@pytest.mark.parametrize("handle", [m_handle, h_handle], ids=["M", "H"])
def test_antipode_axioms_up_to_order_two(handle):
    for d in diagrams_up_to(2):
        own = {d: Fraction(1)}
        expected = {handle.unit: Fraction(1)} if d == handle.unit else {}
        antipode = lambda terms: takeuchi_terms(handle, terms)  # noqa: E731
        assert convolve_identity(handle, own, antipode) == expected
        assert convolve_identity_right(handle, own, antipode) == expected
        assert handle.counit(takeuchi_terms(handle, own)) == handle.counit_key(d)
    assert takeuchi_terms(handle, {handle.unit: Fraction(1)}) == {handle.unit: Fraction(1)}
