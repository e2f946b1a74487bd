"""Tests for the pairing and the maps between ParSym, ParQSym and the classical algebras."""

from fractions import Fraction

import pytest

from services.algebra import Basis, Element, Space
from services.classical import (
    nsym,
    nsym_comul,
    nsym_eta_star,
    nsym_mul,
    qsym,
    qsym_comul,
    qsym_mul,
    shuffle_algebra,
    xi_s,
    zeta_qsym,
)
from services.diagram import (
    EMPTY,
    alpha_of,
    bullet,
    canonicalize,
    diagrams_up_to,
    enumerate_diagrams,
    pi_of_composition,
    tensor,
)
from services.errors import MetadataMismatchError
from services.morphisms import (
    eta_parqsym,
    pair,
    pair_tensor,
    phi,
    phi_ps,
    phi_tensor,
    psi_pq,
    psi_pq_tensor,
)
from services.parqsym import comul_M, m_handle, mul_M, parqsym, zeta
from services.parsym import comul_H, h_handle, mul_H, parsym
from services.words import compositions

Q_VALUES = [Fraction(1), Fraction(2), Fraction(-3), Fraction(1, 2)]


def M(d):
    return Element.basis_element(Space.PARQSYM, Basis.M, d)


def H(d):
    return Element.basis_element(Space.PARSYM, Basis.H, d)


def x(*word):
    return shuffle_algebra.element({tuple(word): 1})


def test_pair_examples(dot, bar, e1):
    assert pair(M(e1), H(e1)) == 1
    L = Element.basis_element(Space.PARQSYM, Basis.L, tensor(dot, bar))
    R = Element.basis_element(Space.PARSYM, Basis.R, bullet(dot, bar))
    assert pair(L, R) == 0
    eta = Element.basis_element(Space.PARQSYM, Basis.ETAQ, dot, 2)
    kappa = Element.basis_element(Space.PARSYM, Basis.KQ, dot, 2)
    assert pair(eta, kappa) == 1


def test_pair_errors(dot):
    eta = Element.basis_element(Space.PARQSYM, Basis.ETAQ, dot, 2)
    kappa = Element.basis_element(Space.PARSYM, Basis.KQ, dot, 3)
    with pytest.raises(MetadataMismatchError):
        pair(eta, kappa)
    with pytest.raises(MetadataMismatchError):
        pair(H(dot), M(dot))


@pytest.mark.parametrize("q", Q_VALUES)
def test_dual_bases(q):
    for rho in diagrams_up_to(2):
        for pi in enumerate_diagrams(rho.order):
            delta = 1 if rho == pi else 0
            L = Element.basis_element(Space.PARQSYM, Basis.L, rho)
            R = Element.basis_element(Space.PARSYM, Basis.R, pi)
            assert pair(L, R) == delta
            eta = Element.basis_element(Space.PARQSYM, Basis.ETAQ, rho, q)
            kappa = Element.basis_element(Space.PARSYM, Basis.KQ, pi, q)
            assert pair(eta, kappa) == delta


def test_pairing_is_adjoint():
    diagrams = diagrams_up_to(2)
    for a in diagrams:
        for b in diagrams_up_to(2 - a.order):
            for c in diagrams:
                if c.order != a.order + b.order:
                    continue
                assert pair(mul_M(a, b), H(c)) == pair_tensor(m_handle.tensor({(a, b): 1}), comul_H(c))
                assert pair(M(c), mul_H(a, b)) == pair_tensor(comul_M(c), h_handle.tensor({(a, b): 1}))


def test_psi_pq(dot, bar):
    assert psi_pq(M(bullet(dot, bar))) == qsym.element({(2,): 1})
    assert psi_pq(M(tensor(dot, bar))) == qsym.element({(1, 1): 1})
    assert psi_pq(M(EMPTY)) == qsym.element({(): 1})


def test_phi(dot):
    assert phi(nsym.element({(2,): 1})) == H(canonicalize(2, [[1], [2], [-1, -2]]))
    assert phi(nsym.element({(2, 1): 1})) == H(tensor(pi_of_composition((2,)), dot))
    assert phi(nsym.element({(): 1})) == H(EMPTY)


def test_phi_ps(dot, bar):
    assert phi_ps(M(dot)) == x(1)
    assert phi_ps(M(tensor(dot, bar))) == x(1, 1) - x(2)
    assert phi_ps(M(EMPTY)) == x()
    assert phi_ps(M(bullet(dot, dot))) == 2 * x(2)


def test_eta_parqsym(dot, bar, e1):
    assert eta_parqsym(M(tensor(dot, bar))) == -1
    assert eta_parqsym(M(e1)) == 4
    assert eta_parqsym(M(EMPTY)) == 0


def test_tensor_maps_check_their_inputs(dot):
    with pytest.raises(MetadataMismatchError):
        phi_tensor(comul_M(dot))
    with pytest.raises(MetadataMismatchError):
        psi_pq_tensor(comul_H(dot))


def test_psi_pq_is_a_hopf_map():
    for a in diagrams_up_to(3):
        for b in diagrams_up_to(3 - a.order):
            assert psi_pq(mul_M(a, b)) == qsym_mul(alpha_of(a), alpha_of(b))
            if not a.is_empty and not b.is_empty:
                assert eta_parqsym(mul_M(a, b)) == 0
    for d in diagrams_up_to(3):
        assert psi_pq_tensor(comul_M(d)) == qsym_comul(alpha_of(d))
        assert zeta_qsym(psi_pq(M(d))) == zeta(M(d))


def test_phi_ps_is_a_hopf_map():
    for a in diagrams_up_to(2):
        for b in diagrams_up_to(2):
            image = shuffle_algebra.product(phi_ps(M(a)).terms, phi_ps(M(b)).terms)
            assert phi_ps(mul_M(a, b)).terms == image
    for d in diagrams_up_to(3):
        image = phi_ps(M(d))
        assert xi_s(image) == eta_parqsym(M(d))
        assert all(sum(beta) == d.order for beta in image.terms)
        split = {}
        for (left, right), c in comul_M(d).terms.items():
            for u, cu in phi_ps(M(left)).terms.items():
                for v, cv in phi_ps(M(right)).terms.items():
                    split[(u, v)] = split.get((u, v), 0) + c * cu * cv
        assert {k: v for k, v in split.items() if v} == shuffle_algebra.coproduct(image.terms)


def test_phi_is_a_hopf_map():
    for size in range(4):
        for alpha in compositions(size):
            for other in range(4 - size):
                for beta in compositions(other):
                    lhs = phi(nsym_mul(alpha, beta))
                    assert lhs == parsym.product(phi(nsym.element({alpha: 1})), phi(nsym.element({beta: 1})))
            target = pi_of_composition(alpha)
            assert target.order == size
            assert phi_tensor(nsym_comul(alpha)) == comul_H(target)


def test_triangle_identity():
    for size in range(4):
        for alpha in compositions(size):
            image = phi(nsym.element({alpha: 1}))
            for other in range(4):
                for beta in compositions(other):
                    assert pair(M(pi_of_composition(beta)), image) == (1 if alpha == beta else 0)


@pytest.mark.parametrize("q", Q_VALUES)
def test_phi_sends_dual_eta_to_kappa(q):
    for size in range(4):
        for alpha in compositions(size):
            kappa = Element.basis_element(Space.PARSYM, Basis.KQ, pi_of_composition(alpha), q)
            assert phi(nsym_eta_star(alpha, q)) == h_handle.element(parsym.to_h(kappa))


def test_conversion_keeps_pairing(dot, bar):
    x_ = parqsym.convert(M(tensor(dot, bar)), Basis.L)
    y_ = parsym.convert(H(tensor(dot, bar)), Basis.R)
    assert pair(x_, y_) == 1
