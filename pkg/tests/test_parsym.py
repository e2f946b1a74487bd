"""Tests for ParSym in the H, R and κ^(q) bases."""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from services.algebra import Basis, Element, Space, Tensor, accumulate
from services.diagram import EMPTY, bullet, canonicalize, diagrams_up_to, tensor
from services.errors import InvariantViolation, MetadataMismatchError
from services.parsym import (
    comul_H,
    comul_kappa_line,
    h_handle,
    h_to_kappa,
    h_to_r,
    kappa_line_diagram,
    kappa_to_h,
    kappa_to_r,
    mul_H,
    mul_kappa,
    mul_R,
    parsym,
    r_to_h,
    r_to_kappa,
)

Q_VALUES = [Fraction(1), Fraction(2), Fraction(-3), Fraction(1, 2)]


def H(d):
    return Element.basis_element(Space.PARSYM, Basis.H, d)


def R(d):
    return Element.basis_element(Space.PARSYM, Basis.R, d)


def K(d, q):
    return Element.basis_element(Space.PARSYM, Basis.KQ, d, q)


def test_mul_H(dot, bar, e1):
    assert mul_H(dot, bar) == H(tensor(dot, bar))
    assert mul_H(EMPTY, e1) == H(e1)
    assert mul_H(dot, dot) == H(tensor(dot, dot))


def test_comul_H(dot, bar, e1):
    db = bullet(dot, bar)
    assert comul_H(db) == h_handle.tensor({(EMPTY, db): 1, (dot, bar): 1, (db, EMPTY): 1})
    dd = tensor(dot, dot)
    assert comul_H(dd) == h_handle.tensor({(EMPTY, dd): 1, (dot, dot): 2, (dd, EMPTY): 1})
    terms = comul_H(e1).terms
    assert len(terms) == 4
    assert terms[(dot, canonicalize(3, [[1], [2, -1], [3], [-2, -3]]))] == 1
    assert terms[(canonicalize(3, [[1], [2], [3, -1, -2], [-3]]), dot)] == 1


def test_mul_R(dot, bar):
    assert mul_R(dot, bar) == R(tensor(dot, bar)) + R(bullet(dot, bar))
    assert mul_R(dot, dot) == R(tensor(dot, dot)) + R(bullet(dot, dot))
    assert r_to_h(mul_R(dot, bar)) == mul_H(dot, bar)
    assert mul_R(EMPTY, bar) == R(bar)


def test_mul_kappa(dot, bar):
    assert mul_kappa(dot, bar, 1) == K(tensor(dot, bar), 1)
    lhs = parsym.product(kappa_to_h(K(dot, 1)), kappa_to_h(K(bar, 1)))
    assert lhs == Element(Space.PARSYM, Basis.H, {tensor(dot, bar): Fraction(1, 4)})
    assert lhs == kappa_to_h(mul_kappa(dot, bar, 1))
    assert mul_kappa(EMPTY, dot, 2) == K(dot, 2)


def test_conversion_examples(dot, bar):
    dtb, dbb = tensor(dot, bar), bullet(dot, bar)
    assert r_to_h(R(dtb)) == H(dtb) - H(dbb)
    assert h_to_r(H(dtb)) == R(dtb) + R(dbb)
    expected = Element(Space.PARSYM, Basis.H, {dbb: Fraction(1, 2), dtb: Fraction(-1, 4)})
    assert kappa_to_h(K(dbb, 1)) == expected
    assert parsym.convert(K(dbb, 1), Basis.H) == expected


def test_conversion_errors(dot):
    with pytest.raises(MetadataMismatchError):
        kappa_to_h(K(dot, 2), 3)
    with pytest.raises(InvariantViolation):
        parsym.convert(H(dot), Basis.KQ)
    with pytest.raises(MetadataMismatchError):
        h_to_r(R(dot))


def test_irreducible_r_equals_h(e1, dot, bar):
    assert r_to_h(R(e1)) == H(e1)
    db = bullet(dot, bar)
    assert parsym.coproduct(R(db)).terms == comul_H(db).terms


def test_round_trips():
    for d in diagrams_up_to(3):
        assert r_to_h(h_to_r(H(d))) == H(d)
        assert h_to_r(r_to_h(R(d))) == R(d)
    for q in Q_VALUES:
        for d in diagrams_up_to(2):
            assert kappa_to_h(h_to_kappa(H(d), q)) == H(d)
            assert h_to_kappa(kappa_to_h(K(d, q)), q) == K(d, q)
            assert kappa_to_r(r_to_kappa(R(d), q)) == R(d)
            assert r_to_kappa(R(d), q) == h_to_kappa(r_to_h(R(d)), q)


def test_comul_kappa_line(dot):
    for q in Q_VALUES:
        assert comul_kappa_line(1, q) == Tensor(
            Space.PARSYM, Basis.KQ, {(EMPTY, dot): 1, (dot, EMPTY): 1}, q
        )
    assert comul_kappa_line(2, 1) == parsym.coproduct(K(kappa_line_diagram(2), 1))
    assert comul_kappa_line(3, 2) == parsym.coproduct(K(kappa_line_diagram(3), 2))
    with pytest.raises(InvariantViolation):
        comul_kappa_line(0, 1)


def test_basis_aware_wrappers(dot, bar, e1):
    assert parsym.product(R(dot), R(bar)) == R(tensor(dot, bar)) + R(bullet(dot, bar))
    assert parsym.product(R(dot), R(bar), fast=False) == parsym.product(R(dot), R(bar))
    assert parsym.antipode(H(dot)) == -H(dot)
    assert parsym.antipode(K(dot, 2)) == -K(dot, 2)
    assert parsym.counit(H(e1)) == 0
    assert parsym.counit(H(EMPTY)) == 1
    with pytest.raises(MetadataMismatchError):
        parsym.product(R(dot), H(dot))


def test_antipode_of_bullet(dot, bar):
    assert parsym.antipode(H(bullet(dot, bar))) == H(tensor(dot, bar)) - H(bullet(dot, bar))


def test_h_is_a_bialgebra_up_to_order_three():
    for a in diagrams_up_to(3):
        for b in diagrams_up_to(3 - a.order):
            lhs = comul_H(tensor(a, b)).terms
            assert lhs == h_handle.tensor_product(comul_H(a).terms, comul_H(b).terms)


def test_comul_h_is_coassociative_up_to_order_three():
    for d in diagrams_up_to(3):
        left, right = {}, {}
        for (a, b), c in comul_H(d).terms.items():
            for (x, y), cx in comul_H(a).terms.items():
                accumulate(left, (x, y, b), c * cx)
            for (x, y), cy in comul_H(b).terms.items():
                accumulate(right, (a, x, y), c * cy)
        assert left == right


def test_r_coproduct_recursion():
    nonempty = [d for d in diagrams_up_to(2) if not d.is_empty]
    for a in nonempty:
        for b in nonempty:
            r_a, r_b = parsym.to_h(R(a)), parsym.to_h(R(b))
            r_bullet = parsym.to_h(R(bullet(a, b)))
            product = h_handle.product(r_a, r_b)
            for key, c in r_bullet.items():
                accumulate(product, key, -c)
            assert parsym.to_h(R(tensor(a, b))) == product
            delta = h_handle.tensor_product(h_handle.coproduct(r_a), h_handle.coproduct(r_b))
            for keys, c in h_handle.coproduct(r_bullet).items():
                accumulate(delta, keys, -c)
            assert h_handle.coproduct(parsym.to_h(R(tensor(a, b)))) == delta


@settings(max_examples=100, deadline=None)
@given(st.sampled_from([d for d in diagrams_up_to(2) if not d.is_empty]), st.sampled_from(Q_VALUES))
def test_kappa_product_matches_h(d, q):
    for other in diagrams_up_to(1):
        x, y = K(d, q), K(other, q)
        assert parsym.product(x, y) == parsym.product(x, y, fast=False)
