"""Tests for ParQSym in the M, L and η^(q) bases."""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from services.algebra import Basis, Element, Space, Tensor, map_tensor
from services.diagram import EMPTY, bullet, diagrams_up_to, enumerate_diagrams, length, tensor
from services.errors import DiagramError, InvariantViolation, MalformedInputError
from services.parqsym import (
    PaddedPair,
    WeightFunction,
    antipode_inverse_M_explicit,
    antipode_M_explicit,
    comul_L,
    comul_M,
    deconcat_basis_pair,
    eta_q_to_l,
    eta_q_to_m,
    extend_weight,
    l_to_eta_q,
    l_to_m,
    m_handle,
    m_to_eta_q,
    m_to_l,
    mul_eta,
    mul_eta_q,
    mul_L,
    mul_M,
    mul_M_by_quasi_shuffle,
    parqsym,
    zeta,
)

Q_VALUES = [Fraction(1), Fraction(2), Fraction(-3), Fraction(1, 2)]
SMALL = diagrams_up_to(2)


def M(d):
    return Element.basis_element(Space.PARQSYM, Basis.M, d)


def L(d):
    return Element.basis_element(Space.PARQSYM, Basis.L, d)


def ETA(d, q=1):
    return Element.basis_element(Space.PARQSYM, Basis.ETAQ, d, q)


def test_comul_M(dot, bar, e1):
    dtb = tensor(dot, bar)
    assert comul_M(dtb) == m_handle.tensor({(EMPTY, dtb): 1, (dot, bar): 1, (dtb, EMPTY): 1})
    assert comul_M(e1) == m_handle.tensor({(EMPTY, e1): 1, (e1, EMPTY): 1})
    assert comul_M(EMPTY) == m_handle.tensor({(EMPTY, EMPTY): 1})


def test_mul_M(dot, bar, e1):
    assert mul_M(dot, bar) == M(tensor(dot, bar)) + M(tensor(bar, dot)) + M(bullet(dot, bar))
    assert mul_M(dot, dot) == 2 * M(tensor(dot, dot)) + M(bullet(dot, dot))
    assert mul_M(EMPTY, e1) == M(e1)


def test_padded_pair_rejects_double_empty(dot):
    with pytest.raises(DiagramError):
        PaddedPair((EMPTY,), (EMPTY,))
    with pytest.raises(DiagramError):
        PaddedPair((dot,), ())


def test_mul_L(dot, bar):
    assert mul_L(dot, bar) == L(bullet(dot, bar)) + L(tensor(bar, dot))
    assert l_to_m(mul_L(dot, bar)) == mul_M(dot, bar)
    assert mul_L(EMPTY, dot) == L(dot)


def test_comul_L(dot, bar, e1):
    db = bullet(dot, bar)
    expected = Tensor(Space.PARQSYM, Basis.L, {(EMPTY, db): 1, (dot, bar): 1, (db, EMPTY): 1})
    assert comul_L(db) == expected
    assert comul_L(dot) == Tensor(Space.PARQSYM, Basis.L, {(EMPTY, dot): 1, (dot, EMPTY): 1})
    assert len(comul_L(e1).terms) == 4


def test_mul_eta(dot, bar):
    dtb, dbb, btd, bbd = tensor(dot, bar), bullet(dot, bar), tensor(bar, dot), bullet(bar, dot)
    assert mul_eta(dot, bar) == ETA(dtb) + ETA(dbb) + ETA(btd) - ETA(bbd)
    for q in Q_VALUES:
        expected = Element(Space.PARQSYM, Basis.ETAQ, {dtb: 1, dbb: q, btd: 1, bbd: -1}, q)
        assert mul_eta_q(dot, bar, q) == expected
        assert parqsym.to_m(expected) == {k: (q + 1) ** 2 * c for k, c in mul_M(dot, bar).terms.items()}
    assert mul_eta_q(EMPTY, dot, 2) == ETA(dot, 2)
    with pytest.raises(InvariantViolation):
        mul_eta_q(dot, bar, -1)


def test_conversion_examples(dot, bar):
    dtb, dbb = tensor(dot, bar), bullet(dot, bar)
    assert l_to_m(L(dbb)) == M(dbb) + M(dtb)
    assert m_to_eta_q(M(dtb), 1) == Element(
        Space.PARQSYM, Basis.ETAQ, {dtb: Fraction(1, 4), dbb: Fraction(-1, 4)}, Fraction(1)
    )
    assert eta_q_to_m(ETA(dtb)) == 4 * M(dtb) + 2 * M(dbb)
    assert parqsym.convert(M(dtb), Basis.ETA) == m_to_eta_q(M(dtb), 1)


@pytest.mark.parametrize("q", Q_VALUES)
def test_conversions_are_inverse(q):
    for d in SMALL:
        assert m_to_l(l_to_m(L(d))) == L(d)
        assert l_to_m(m_to_l(M(d))) == M(d)
        assert eta_q_to_m(m_to_eta_q(M(d), q)) == M(d)
        assert m_to_eta_q(eta_q_to_m(ETA(d, q)), q) == ETA(d, q)
        assert eta_q_to_l(l_to_eta_q(L(d), q)) == L(d)
        assert l_to_eta_q(L(d), q) == m_to_eta_q(l_to_m(L(d)), q)
        assert eta_q_to_l(ETA(d, q)) == m_to_l(eta_q_to_m(ETA(d, q)))


def test_explicit_antipode(dot, bar):
    dtb = tensor(dot, bar)
    assert antipode_M_explicit(dot) == -M(dot)
    assert antipode_M_explicit(dtb) == M(tensor(bar, dot)) + M(bullet(dot, bar))
    assert parqsym.antipode(parqsym.antipode(M(dtb)), inverse=True) == M(dtb)
    for d in SMALL:
        assert antipode_M_explicit(d) == parqsym.antipode(M(d))
        assert antipode_inverse_M_explicit(d) == parqsym.antipode(M(d), inverse=True)


def test_antipode_in_other_bases(dot, bar):
    x = L(tensor(dot, bar))
    assert parqsym.antipode(x, method="explicit") == parqsym.antipode(x)
    with pytest.raises(MalformedInputError):
        parqsym.antipode(x, method="guess")


def test_zeta(dot, bar):
    assert zeta(M(bullet(dot, bar))) == 1
    assert zeta(M(tensor(dot, bar))) == 0
    assert zeta(M(EMPTY)) == 1
    assert zeta(L(bullet(dot, bar))) == 1


def test_extend_weight(dot, bar):
    two = WeightFunction.constant(2)
    dtb = tensor(dot, bar)
    assert extend_weight(two, dtb, dtb) == 4
    assert extend_weight(two, dtb, bullet(dot, bar)) == 2
    assert extend_weight(two, EMPTY, EMPTY) == 1
    with pytest.raises(InvariantViolation):
        extend_weight(two, bullet(dot, bar), dtb)


def test_deconcat_basis_reproduces_eta():
    basis = deconcat_basis_pair(WeightFunction.constant(2), 2)
    for d in SMALL:
        assert basis.to_m({d: Fraction(1)}) == parqsym.to_m(ETA(d))
    for q in Q_VALUES:
        basis = deconcat_basis_pair(WeightFunction.constant(q + 1), 2)
        for d in SMALL:
            assert basis.to_m({d: Fraction(1)}) == parqsym.to_m(ETA(d, q))


def test_deconcat_basis_deconcatenates():
    basis = deconcat_basis_pair(WeightFunction(lambda d: d.order + 1, name="order+1"), 3)
    for d in diagrams_up_to(3):
        unit = {d: Fraction(1)}
        assert basis.from_m(basis.to_m(unit)) == unit
        expected = map_tensor(m_handle.coproduct_key(d), basis.forward.__getitem__)
        assert m_handle.coproduct(basis.to_m(unit)) == expected


def test_deconcat_basis_rejects_singular_weight(bar):
    weight = WeightFunction.from_table({bar: 0})
    assert weight.first_zero(2) == bar
    with pytest.raises(InvariantViolation):
        deconcat_basis_pair(weight, 2)


def test_deconcat_basis_stops_at_its_order(dot, bar):
    basis = deconcat_basis_pair(WeightFunction.constant(2), 1)
    assert basis.to_m({dot: Fraction(1)}) == {dot: Fraction(2)}
    with pytest.raises(InvariantViolation, match="up to order 1"):
        basis.to_m({tensor(dot, bar): Fraction(1)})
    with pytest.raises(InvariantViolation, match="up to order 1"):
        basis.from_m({bullet(dot, bar): Fraction(1)})


def test_basis_aware_wrappers(dot, bar):
    assert parqsym.product(L(dot), L(bar)) == L(bullet(dot, bar)) + L(tensor(bar, dot))
    dtb = tensor(dot, bar)
    assert parqsym.coproduct(ETA(dtb)) == Tensor(
        Space.PARQSYM, Basis.ETAQ, {(EMPTY, dtb): 1, (dot, bar): 1, (dtb, EMPTY): 1}, Fraction(1)
    )
    for d in SMALL:
        assert parqsym.counit(L(d)) == (1 if d.is_empty else 0)
        assert parqsym.coproduct(L(d)) == parqsym.coproduct(L(d), fast=False)


def test_primitives_are_the_irreducibles():
    for k in range(1, 4):
        for d in enumerate_diagrams(k):
            assert (not m_handle.reduced_coproduct_key(d)) == (length(d) == 1)


def test_product_is_associative_up_to_order_three():
    for a in diagrams_up_to(3):
        for b in diagrams_up_to(3 - a.order):
            ab = m_handle.product_keys(a, b)
            for c in diagrams_up_to(3 - a.order - b.order):
                lhs = m_handle.product(ab, {c: Fraction(1)})
                rhs = m_handle.product({a: Fraction(1)}, m_handle.product_keys(b, c))
                assert lhs == rhs


@settings(max_examples=100, deadline=None)
@given(st.sampled_from(SMALL), st.sampled_from(SMALL))
def test_products_agree_with_the_m_oracle(a, b):
    assert mul_M(a, b) == mul_M_by_quasi_shuffle(a, b)
    assert zeta(mul_M(a, b)) == zeta(M(a)) * zeta(M(b))
    assert parqsym.product(L(a), L(b)) == parqsym.product(L(a), L(b), fast=False)


@settings(max_examples=100, deadline=None)
@given(st.sampled_from(SMALL), st.sampled_from(SMALL), st.sampled_from(Q_VALUES))
def test_eta_products_agree_with_the_m_oracle(a, b, q):
    x, y = ETA(a, q), ETA(b, q)
    assert parqsym.product(x, y) == parqsym.product(x, y, fast=False)


@settings(max_examples=100, deadline=None)
@given(st.sampled_from(SMALL), st.sampled_from(SMALL))
def test_m_is_a_bialgebra(a, b):
    lhs = m_handle.coproduct(m_handle.product_keys(a, b))
    assert lhs == m_handle.tensor_product(m_handle.coproduct_key(a), m_handle.coproduct_key(b))
