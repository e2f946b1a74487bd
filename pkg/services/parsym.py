"""The Hopf algebra ParSym on partition diagrams.

The H basis is the computational anchor: H_a H_b = H_{a⊗b}, and the coproduct
of a ⊗-irreducible H_σ splits σ at each of its • cuts. The R basis and the
κ^(q) basis are reached by triangular sums over coarsenings and refinements.
"""

import logging
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Optional, Tuple

from services.algebra import (
    Basis,
    BialgebraHandle,
    Element,
    ScalarLike,
    Space,
    Tensor,
    Terms,
    accumulate,
    linear_map,
    make_q,
    map_tensor,
    require_basis,
    takeuchi_terms,
)
from services.diagram import (
    EMPTY,
    Diagram,
    bullet,
    bullet_cuts,
    bullet_split,
    coarsenings,
    length,
    pi_of_composition,
    refinements,
    s_set,
    atoms,
    similar_class,
    tensor,
    tensor_factorize,
)
from services.errors import InvariantViolation, MetadataMismatchError
from services.words import compositions

logger = logging.getLogger(__name__)

Pair = Tuple[Diagram, Diagram]


def _irreducible_coproduct(sigma: Diagram) -> Dict[Pair, Fraction]:
    terms: Dict[Pair, Fraction] = {}
    accumulate(terms, (EMPTY, sigma), Fraction(1))
    accumulate(terms, (sigma, EMPTY), Fraction(1))
    for i in sorted(bullet_cuts(sigma)):
        accumulate(terms, bullet_split(sigma, i), Fraction(1))
    return terms


@lru_cache(maxsize=None)
def _comul_h(d: Diagram) -> Dict[Pair, Fraction]:
    result: Dict[Pair, Fraction] = {(EMPTY, EMPTY): Fraction(1)}
    for factor in tensor_factorize(d):
        step: Dict[Pair, Fraction] = {}
        for (a, b), c in result.items():
            for (x, y), cx in _irreducible_coproduct(factor).items():
                accumulate(step, (tensor(a, x), tensor(b, y)), c * cx)
        result = step
    return result


class HBasisHandle(BialgebraHandle):
    """ParSym in the H basis."""

    space = Space.PARSYM
    basis = Basis.H
    unit = EMPTY

    def grade(self, key: Diagram) -> int:
        return key.order

    def product_keys(self, a: Diagram, b: Diagram) -> Terms:
        return {tensor(a, b): Fraction(1)}

    def coproduct_key(self, key: Diagram) -> Dict[Pair, Fraction]:
        return _comul_h(key)


h_handle = HBasisHandle()


def mul_H(d1: Diagram, d2: Diagram) -> Element:
    return h_handle.element({tensor(d1, d2): Fraction(1)})


def comul_H(d: Diagram) -> Tensor:
    """ΔH_d, multiplicative over the ⊗-irreducible factors of d."""
    return h_handle.tensor(_comul_h(d))


def mul_R(d1: Diagram, d2: Diagram) -> Element:
    """R_a R_b = R_{a⊗b} + R_{a•b}; R_∅ is the unit."""
    if d1.is_empty or d2.is_empty:
        return Element(Space.PARSYM, Basis.R, {tensor(d1, d2): Fraction(1)})
    terms: Terms = {}
    accumulate(terms, tensor(d1, d2), Fraction(1))
    accumulate(terms, bullet(d1, d2), Fraction(1))
    return Element(Space.PARSYM, Basis.R, terms)


def mul_kappa(d1: Diagram, d2: Diagram, q: ScalarLike) -> Element:
    return Element(Space.PARSYM, Basis.KQ, {tensor(d1, d2): Fraction(1)}, make_q(q))


def _sign(exponent: int) -> Fraction:
    return Fraction(-1 if exponent % 2 else 1)


@lru_cache(maxsize=None)
def _r_in_h(d: Diagram) -> Dict[Diagram, Fraction]:
    return {s: _sign(length(s) - length(d)) for s in coarsenings(d)}


@lru_cache(maxsize=None)
def _h_in_r(d: Diagram) -> Dict[Diagram, Fraction]:
    return {s: Fraction(1) for s in coarsenings(d)}


@lru_cache(maxsize=None)
def _kappa_in_h(d: Diagram, q: Fraction) -> Dict[Diagram, Fraction]:
    r = q + 1
    return {s: _sign(length(s) - length(d)) * r ** (-length(s)) for s in refinements(d)}


@lru_cache(maxsize=None)
def _h_in_kappa(d: Diagram, q: Fraction) -> Dict[Diagram, Fraction]:
    r = q + 1
    return {s: r ** length(d) for s in refinements(d)}


@lru_cache(maxsize=None)
def _r_in_kappa(d: Diagram, q: Fraction) -> Dict[Diagram, Fraction]:
    if d.is_empty:
        return {EMPTY: Fraction(1)}
    r = q + 1
    own = s_set(d)
    terms: Terms = {}
    for rho in similar_class(d):
        other = s_set(rho)
        exponent = len(other - own) + length(rho) - length(d)
        accumulate(terms, rho, r * _sign(exponent) * q ** len(other & own))
    return terms


@lru_cache(maxsize=None)
def _kappa_in_r(d: Diagram, q: Fraction) -> Dict[Diagram, Fraction]:
    if d.is_empty:
        return {EMPTY: Fraction(1)}
    r = q + 1
    n = len(atoms(d).atoms)
    own = s_set(d)
    terms: Terms = {}
    for rho in similar_class(d):
        other = s_set(rho)
        exponent = len(own - other) + length(rho) - length(d)
        free = (n - 1) - len(own | other)
        accumulate(terms, rho, r ** (-n) * _sign(exponent) * q ** free)
    return terms


def _resolve_q(x: Element, q: Optional[ScalarLike]) -> Fraction:
    if q is None:
        if x.q is None:
            raise InvariantViolation("A q parameter is required")
        return x.q
    value = make_q(q)
    if x.q is not None and x.q != value:
        raise MetadataMismatchError(f"Element has q = {x.q}, operation asked for q = {value}")
    return value


def h_to_r(x: Element) -> Element:
    require_basis(x, Space.PARSYM, Basis.H)
    return Element(Space.PARSYM, Basis.R, linear_map(x.terms, _h_in_r))


def r_to_h(x: Element) -> Element:
    require_basis(x, Space.PARSYM, Basis.R)
    return h_handle.element(linear_map(x.terms, _r_in_h))


def h_to_kappa(x: Element, q: ScalarLike) -> Element:
    require_basis(x, Space.PARSYM, Basis.H)
    q = make_q(q)
    return Element(Space.PARSYM, Basis.KQ, linear_map(x.terms, lambda d: _h_in_kappa(d, q)), q)


def kappa_to_h(x: Element, q: Optional[ScalarLike] = None) -> Element:
    require_basis(x, Space.PARSYM, Basis.KQ)
    q = _resolve_q(x, q)
    return h_handle.element(linear_map(x.terms, lambda d: _kappa_in_h(d, q)))


def r_to_kappa(x: Element, q: ScalarLike) -> Element:
    """R to κ^(q) directly, without passing through H."""
    require_basis(x, Space.PARSYM, Basis.R)
    q = make_q(q)
    return Element(Space.PARSYM, Basis.KQ, linear_map(x.terms, lambda d: _r_in_kappa(d, q)), q)


def kappa_to_r(x: Element, q: Optional[ScalarLike] = None) -> Element:
    """κ^(q) to R directly, without passing through H."""
    require_basis(x, Space.PARSYM, Basis.KQ)
    q = _resolve_q(x, q)
    return Element(Space.PARSYM, Basis.R, linear_map(x.terms, lambda d: _kappa_in_r(d, q)))


def comul_kappa_line(n: int, q: ScalarLike) -> Tensor:
    """
    Closed form of Δκ^(q) for the diagram π_(n) = {1},...,{n},{1',...,n'}.

    Args:
        n: Order, at least 1
        q: Parameter with q + 1 invertible

    Returns:
        Tensor in the κ^(q) basis summing over composition pairs (β, γ) with
        |β| + |γ| = n and |l(β) - l(γ)| <= 1
    """
    if n < 1:
        raise InvariantViolation(f"comul_kappa_line needs n >= 1, got {n}")
    q = make_q(q)
    terms: Dict[Pair, Fraction] = {}
    for size in range(n + 1):
        for beta in compositions(size):
            for gamma in compositions(n - size):
                lb, lg = len(beta), len(gamma)
                if abs(lb - lg) > 1:
                    continue
                coeff = (-q) ** (max(lb, lg) - 1) * (q - 1) ** (1 if lb == lg else 0)
                accumulate(terms, (pi_of_composition(beta), pi_of_composition(gamma)), coeff)
    return Tensor(Space.PARSYM, Basis.KQ, terms, q)


def kappa_line_diagram(n: int) -> Diagram:
    return pi_of_composition((n,))


class ParSym:
    """Basis-aware structure maps on ParSym, computed through the H basis."""

    def __init__(self):
        self.handle = h_handle

    def to_h(self, x: Element) -> Terms:
        require_basis(x, Space.PARSYM)
        if x.basis is Basis.H:
            return dict(x.terms)
        if x.basis is Basis.R:
            return linear_map(x.terms, _r_in_h)
        return linear_map(x.terms, lambda d: _kappa_in_h(d, x.q))

    def _from_h_key(self, basis: Basis, q: Optional[Fraction]):
        if basis is Basis.H:
            return lambda d: {d: Fraction(1)}
        if basis is Basis.R:
            return _h_in_r
        if basis is Basis.KQ:
            if q is None:
                raise InvariantViolation("Converting to KQ requires a q parameter")
            return lambda d: _h_in_kappa(d, q)
        raise MetadataMismatchError(f"{basis.value} is not a ParSym basis")

    def from_h(self, terms: Terms, basis: Basis, q: Optional[Fraction] = None) -> Element:
        q = make_q(q) if q is not None else None
        return Element(Space.PARSYM, basis, linear_map(terms, self._from_h_key(basis, q)), q)

    def convert(self, x: Element, basis: Basis, q: Optional[ScalarLike] = None) -> Element:
        """Re-express x in another ParSym basis."""
        if basis is Basis.KQ and q is None:
            q = x.q
        target_q = make_q(q) if basis is Basis.KQ and q is not None else None
        return self.from_h(self.to_h(x), basis, target_q)

    def product(self, x: Element, y: Element, fast: bool = True) -> Element:
        x.require_parent(y)
        require_basis(x, Space.PARSYM)
        if fast and x.basis is not Basis.R:
            # H and κ^(q) both multiply by ⊗ on keys
            terms: Terms = {}
            for a, ca in x.terms.items():
                for b, cb in y.terms.items():
                    accumulate(terms, tensor(a, b), ca * cb)
            return x.with_terms(terms)
        if fast:
            terms = {}
            for a, ca in x.terms.items():
                for b, cb in y.terms.items():
                    for key, c in mul_R(a, b).terms.items():
                        accumulate(terms, key, ca * cb * c)
            return x.with_terms(terms)
        product = self.handle.product(self.to_h(x), self.to_h(y))
        return self.from_h(product, x.basis, x.q)

    def coproduct(self, x: Element) -> Tensor:
        require_basis(x, Space.PARSYM)
        terms = self.handle.coproduct(self.to_h(x))
        back = map_tensor(terms, self._from_h_key(x.basis, x.q))
        return Tensor(Space.PARSYM, x.basis, back, x.q)

    def antipode(self, x: Element) -> Element:
        """Takeuchi antipode on the H handle, converted back to x's basis."""
        require_basis(x, Space.PARSYM)
        return self.from_h(takeuchi_terms(self.handle, self.to_h(x)), x.basis, x.q)

    def counit(self, x: Element) -> Fraction:
        return self.handle.counit(self.to_h(x))


parsym = ParSym()
