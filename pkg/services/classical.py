"""Compositions and the classical Hopf algebras QSym, NSym and the shuffle algebra Sh.

QSym is used in its monomial basis M_α, NSym in its complete homogeneous
basis H_α and Sh in its word basis x_α; each is a ``BialgebraHandle`` whose
keys are compositions (tuples of positive integers).
"""

import itertools
import logging
import operator
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterable, List, Sequence, Tuple

from services.algebra import (
    Basis,
    BialgebraHandle,
    Element,
    Space,
    Tensor,
    Terms,
    accumulate,
    make_q,
    require_basis,
    ScalarLike,
)
from services.errors import InvariantViolation, MalformedInputError
from services.words import compositions, deconcatenations, quasi_shuffles, shuffles

logger = logging.getLogger(__name__)

Composition = Tuple[int, ...]


def make_composition(parts: Iterable[int]) -> Composition:
    """Validate a sequence of positive integers."""
    result = tuple(parts)
    for p in result:
        if isinstance(p, bool) or not isinstance(p, int) or p < 1:
            raise MalformedInputError(f"Composition parts must be positive integers, got {p!r}")
    return result


def concat(alpha: Composition, beta: Composition) -> Composition:
    return tuple(alpha) + tuple(beta)


def near_concat(alpha: Composition, beta: Composition) -> Composition:
    """(α1, ..., αn + β1, β2, ..., βm); both arguments must be non-empty."""
    if not alpha or not beta:
        raise MalformedInputError("near_concat needs two non-empty compositions")
    return tuple(alpha[:-1]) + (alpha[-1] + beta[0],) + tuple(beta[1:])


def _partial_sums(alpha: Composition) -> List[int]:
    return list(itertools.accumulate(alpha))


def comp_refines(alpha: Composition, beta: Composition) -> bool:
    """True when α refines β (β is obtained by adding adjacent parts of α)."""
    if sum(alpha) != sum(beta):
        return False
    return set(_partial_sums(beta)) <= set(_partial_sums(alpha))


def lp(alpha: Composition) -> int:
    """Last part; lp(()) = 0."""
    return alpha[-1] if alpha else 0


def split_along(alpha: Composition, beta: Composition) -> List[Composition]:
    """
    Cut α into consecutive pieces whose sums are the parts of β.

    Raises:
        InvariantViolation: If α does not refine β
    """
    if not comp_refines(alpha, beta):
        raise InvariantViolation(f"{alpha} does not refine {beta}")
    pieces: List[Composition] = []
    current: List[int] = []
    targets = iter(beta)
    target = next(targets, None)
    for part in alpha:
        current.append(part)
        if sum(current) == target:
            pieces.append(tuple(current))
            current = []
            target = next(targets, None)
    return pieces


def comp_coarsenings(alpha: Composition) -> List[Composition]:
    """All β that α refines, sorted."""
    if not alpha:
        return [()]
    found = []
    inner = range(1, len(alpha))
    for size in range(len(alpha)):
        for kept in itertools.combinations(inner, size):
            bounds = (0,) + kept + (len(alpha),)
            found.append(tuple(sum(alpha[a:b]) for a, b in zip(bounds, bounds[1:])))
    return sorted(found)


def comp_refinements(alpha: Composition) -> List[Composition]:
    """All β refining α, sorted."""
    pieces = [compositions(p) for p in alpha]
    return sorted(tuple(itertools.chain.from_iterable(choice)) for choice in itertools.product(*pieces))


@lru_cache(maxsize=None)
def _quasi_shuffle(alpha: Composition, beta: Composition) -> Dict[Composition, Fraction]:
    terms: Terms = {}
    for word in quasi_shuffles(alpha, beta, operator.add):
        accumulate(terms, word, Fraction(1))
    return terms


@lru_cache(maxsize=None)
def _shuffle(alpha: Composition, beta: Composition) -> Dict[Composition, Fraction]:
    terms: Terms = {}
    for word in shuffles(alpha, beta):
        accumulate(terms, word, Fraction(1))
    return terms


def _deconcatenation(alpha: Composition) -> Dict[Tuple[Composition, Composition], Fraction]:
    return {pair: Fraction(1) for pair in deconcatenations(alpha)}


@lru_cache(maxsize=None)
def _nsym_coproduct(alpha: Composition) -> Dict[Tuple[Composition, Composition], Fraction]:
    result: Dict[Tuple[Composition, Composition], Fraction] = {((), ()): Fraction(1)}
    for n in alpha:
        line = {((i,) if i else (), (n - i,) if n - i else ()): Fraction(1) for i in range(n + 1)}
        step: Dict[Tuple[Composition, Composition], Fraction] = {}
        for (a, b), c in result.items():
            for (x, y), cx in line.items():
                accumulate(step, (a + x, b + y), c * cx)
        result = step
    return result


class _CompositionHandle(BialgebraHandle):
    basis = Basis.NATURAL
    unit: Composition = ()

    def grade(self, key: Composition) -> int:
        return sum(key)


class QSymHandle(_CompositionHandle):
    """QSym in the monomial basis: quasi-shuffle product, deconcatenation coproduct."""

    space = Space.QSYM

    def product_keys(self, a: Composition, b: Composition) -> Terms:
        return _quasi_shuffle(a, b)

    def coproduct_key(self, key: Composition):
        return _deconcatenation(key)


class NSymHandle(_CompositionHandle):
    """NSym in the complete homogeneous basis: concatenation, ΔH_n = Σ H_i ⊗ H_{n-i}."""

    space = Space.NSYM

    def product_keys(self, a: Composition, b: Composition) -> Terms:
        return {a + b: Fraction(1)}

    def coproduct_key(self, key: Composition):
        return _nsym_coproduct(key)


class ShHandle(_CompositionHandle):
    """The shuffle algebra on positive-integer letters."""

    space = Space.SH

    def product_keys(self, a: Composition, b: Composition) -> Terms:
        return _shuffle(a, b)

    def coproduct_key(self, key: Composition):
        return _deconcatenation(key)


qsym = QSymHandle()
nsym = NSymHandle()
shuffle_algebra = ShHandle()

HANDLES = {Space.QSYM: qsym, Space.NSYM: nsym, Space.SH: shuffle_algebra}


def handle_for(space: Space) -> BialgebraHandle:
    try:
        return HANDLES[space]
    except KeyError:
        raise MalformedInputError(f"{space.value} is not a composition-indexed space") from None


def qsym_mul(alpha: Composition, beta: Composition) -> Element:
    return qsym.element(_quasi_shuffle(tuple(alpha), tuple(beta)))


def qsym_comul(alpha: Composition) -> Tensor:
    return qsym.tensor(_deconcatenation(tuple(alpha)))


def nsym_mul(alpha: Composition, beta: Composition) -> Element:
    return nsym.element({concat(alpha, beta): Fraction(1)})


def nsym_comul(alpha: Composition) -> Tensor:
    return nsym.tensor(_nsym_coproduct(tuple(alpha)))


def sh_mul(alpha: Composition, beta: Composition) -> Element:
    return shuffle_algebra.element(_shuffle(tuple(alpha), tuple(beta)))


def sh_comul(alpha: Composition) -> Tensor:
    return shuffle_algebra.tensor(_deconcatenation(tuple(alpha)))


def xi_s(x: Element) -> Fraction:
    """Infinitesimal character of Sh picking out the one-letter words."""
    require_basis(x, Space.SH)
    return sum((c for key, c in x.terms.items() if len(key) == 1), Fraction(0))


def zeta_qsym(x: Element) -> Fraction:
    """ζ(M_α) = 1 when α = (n) or α = ()."""
    require_basis(x, Space.QSYM)
    return sum((c for key, c in x.terms.items() if len(key) <= 1), Fraction(0))


def eta_char(x: Element) -> Fraction:
    """η(M_α) = (-1)^(l(α)-1) lp(α), with η(M_()) = 0."""
    require_basis(x, Space.QSYM)
    total = Fraction(0)
    for key, c in x.terms.items():
        if key:
            total += c * (-1) ** (len(key) - 1) * lp(key)
    return total


def nsym_eta_star(alpha: Composition, q: ScalarLike) -> Element:
    """Dual enriched basis element η*^(q)_α expanded in H."""
    q = make_q(q)
    r = q + 1
    alpha = make_composition(alpha)
    terms: Terms = {}
    for beta in comp_refinements(alpha):
        accumulate(terms, beta, Fraction((-1) ** (len(beta) - len(alpha))) * r ** (-len(beta)))
    return nsym.element(terms)
