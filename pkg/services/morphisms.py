"""Pairings and morphisms linking ParSym, ParQSym, QSym, NSym and Sh."""

import logging
from fractions import Fraction
from typing import Mapping, Tuple

from services.algebra import (
    Basis,
    Element,
    Space,
    Tensor,
    Terms,
    accumulate,
    map_tensor,
    require_basis,
)
from services.classical import comp_coarsenings, eta_char, lp, qsym, shuffle_algebra, split_along
from services.diagram import alpha_of, pi_of_composition
from services.errors import MetadataMismatchError
from services.parqsym import parqsym
from services.parsym import h_handle, parsym

logger = logging.getLogger(__name__)


def _dot(x: Mapping, y: Mapping) -> Fraction:
    if len(x) > len(y):
        x, y = y, x
    return sum((c * y[k] for k, c in x.items() if k in y), Fraction(0))


def _check_q(x, y) -> None:
    if x.q is not None and y.q is not None and x.q != y.q:
        raise MetadataMismatchError(f"Pairing mixes q = {x.q} with q = {y.q}")


def pair(x: Element, y: Element) -> Fraction:
    """
    ⟨x, y⟩ with ⟨M_ρ, H_π⟩ = δ.

    Args:
        x: ParQSym element (any basis) or QSym element
        y: ParSym element (any basis) or NSym element

    Returns:
        Exact scalar
    """
    _check_q(x, y)
    if x.space is Space.PARQSYM and y.space is Space.PARSYM:
        return _dot(parqsym.to_m(x), parsym.to_h(y))
    if x.space is Space.QSYM and y.space is Space.NSYM:
        return _dot(x.terms, y.terms)
    raise MetadataMismatchError(f"Cannot pair {x.describe()} with {y.describe()}")


def pair_tensor(x: Tensor, y: Tensor) -> Fraction:
    """⟨x1 ⊗ x2, y1 ⊗ y2⟩ = ⟨x1, y1⟩⟨x2, y2⟩ extended bilinearly."""
    _check_q(x, y)
    if not (x.space is Space.PARQSYM and y.space is Space.PARSYM):
        raise MetadataMismatchError(f"Cannot pair tensors of {x.space.value} and {y.space.value}")
    left = map_tensor(x.terms, lambda d: parqsym.to_m(Element(Space.PARQSYM, x.basis, {d: Fraction(1)}, x.q)))
    right = map_tensor(y.terms, lambda d: parsym.to_h(Element(Space.PARSYM, y.basis, {d: Fraction(1)}, y.q)))
    return _dot(left, right)


def psi_pq(x: Element) -> Element:
    """Ψ_PQ(M_ρ) = M_α where α lists the orders of ρ's ⊗-irreducible factors."""
    terms: Terms = {}
    for d, c in parqsym.to_m(x).items():
        accumulate(terms, alpha_of(d), c)
    return qsym.element(terms)


def phi(x: Element) -> Element:
    """Φ(H_α) = H_{π_α}."""
    require_basis(x, Space.NSYM)
    terms: Terms = {}
    for alpha, c in x.terms.items():
        accumulate(terms, pi_of_composition(alpha), c)
    return h_handle.element(terms)


def _phi_ps_key(alpha: Tuple[int, ...]) -> Terms:
    terms: Terms = {}
    for beta in comp_coarsenings(alpha):
        weight = Fraction((-1) ** (len(alpha) - len(beta)))
        for piece in split_along(alpha, beta):
            weight *= lp(piece)
        accumulate(terms, beta, weight)
    return terms


def phi_ps(x: Element) -> Element:
    """Φ_PS(M_ρ) = Σ over coarsenings β of α_ρ of (-1)^(l(α)-l(β)) Π lp(pieces) x_β."""
    terms: Terms = {}
    for d, c in parqsym.to_m(x).items():
        for beta, cb in _phi_ps_key(alpha_of(d)).items():
            accumulate(terms, beta, c * cb)
    return shuffle_algebra.element(terms)


def eta_parqsym(x: Element) -> Fraction:
    """Infinitesimal character η ∘ Ψ_PQ of ParQSym."""
    return eta_char(psi_pq(x))


def phi_tensor(t: Tensor) -> Tensor:
    """Φ ⊗ Φ on a tensor of NSym elements."""
    if t.space is not Space.NSYM:
        raise MetadataMismatchError(f"Φ ⊗ Φ expects NSym tensors, got {t.space.value}")
    terms = map_tensor(t.terms, lambda alpha: {pi_of_composition(alpha): Fraction(1)})
    return h_handle.tensor(terms, t.arity)


def psi_pq_tensor(t: Tensor) -> Tensor:
    """Ψ_PQ ⊗ Ψ_PQ on a tensor of M-basis ParQSym elements."""
    if (t.space, t.basis) != (Space.PARQSYM, Basis.M):
        raise MetadataMismatchError("Ψ_PQ ⊗ Ψ_PQ expects ParQSym tensors in the M basis")
    terms = map_tensor(t.terms, lambda d: {alpha_of(d): Fraction(1)})
    return qsym.tensor(terms, t.arity)


MAPS = {"psi-pq": psi_pq, "phi": phi, "phi-ps": phi_ps}
