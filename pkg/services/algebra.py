"""Exact scalars, finite linear combinations and the generic Takeuchi antipode.

Coefficients are ``fractions.Fraction`` throughout. Raw term dictionaries
(``Terms``) map a basis key to its coefficient and are the working currency of
the Hopf-algebra handles; ``Element`` and ``Tensor`` wrap them with their
space/basis/q metadata for the public API.
"""

import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Callable, Dict, Hashable, Iterable, Mapping, Optional, Tuple, Union

from services.diagram import Diagram
from services.errors import InvariantViolation, MalformedInputError, MetadataMismatchError

logger = logging.getLogger(__name__)

Scalar = Fraction
Key = Hashable
Terms = Dict[Key, Fraction]
ScalarLike = Union[Fraction, int, str]


class Space(str, Enum):
    PARSYM = "parsym"
    PARQSYM = "parqsym"
    QSYM = "qsym"
    NSYM = "nsym"
    SH = "sh"


class Basis(str, Enum):
    H = "H"
    R = "R"
    KQ = "KQ"
    M = "M"
    L = "L"
    ETA = "ETA"
    ETAQ = "ETAQ"
    NATURAL = "natural"


LEGAL_BASES: Dict[Space, Tuple[Basis, ...]] = {
    Space.PARSYM: (Basis.H, Basis.R, Basis.KQ),
    Space.PARQSYM: (Basis.M, Basis.L, Basis.ETA, Basis.ETAQ),
    Space.QSYM: (Basis.NATURAL,),
    Space.NSYM: (Basis.NATURAL,),
    Space.SH: (Basis.NATURAL,),
}

Q_BASES = (Basis.KQ, Basis.ETAQ)


def parse_scalar(value: ScalarLike) -> Fraction:
    """Read an exact rational from an int, Fraction or 'p/q' text."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise MalformedInputError(f"Not a scalar: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as e:
            raise MalformedInputError(f"Not a rational number: {value!r}") from e
    raise MalformedInputError(f"Not a scalar: {value!r}")


def format_scalar(value: Fraction) -> str:
    return str(value)


def make_q(value: ScalarLike) -> Fraction:
    """Validate a q parameter; r = q + 1 must be invertible."""
    q = parse_scalar(value)
    if q == -1:
        raise InvariantViolation("q = -1 is not allowed (q + 1 must be invertible)")
    return q


def accumulate(terms: Terms, key: Key, coeff: Fraction) -> None:
    """Add coeff to terms[key] in place, dropping the key when it cancels."""
    if not coeff:
        return
    total = terms.get(key, 0) + coeff
    if total:
        terms[key] = total
    else:
        terms.pop(key, None)


def clean(terms: Mapping[Key, Fraction]) -> Terms:
    return {k: Fraction(v) for k, v in terms.items() if v}


def linear_map(terms: Mapping[Key, Fraction], image: Callable[[Key], Mapping[Key, Fraction]]) -> Terms:
    """Extend a key-level map linearly."""
    result: Terms = {}
    for key, coeff in terms.items():
        for target, c in image(key).items():
            accumulate(result, target, coeff * c)
    return result


def grade_of(key: Key) -> int:
    if isinstance(key, Diagram):
        return key.order
    if isinstance(key, tuple):
        if all(isinstance(k, int) for k in key):
            return sum(key)
        return sum(grade_of(k) for k in key)
    raise MalformedInputError(f"Unknown basis key {key!r}")


def key_text(key: Key) -> str:
    if isinstance(key, Diagram):
        return str(key)
    return "(" + ",".join(str(p) for p in key) + ")"


def key_sort_key(key: Key) -> Tuple[int, str]:
    """Deterministic ordering of keys by (grade, canonical text)."""
    return (grade_of(key), key_text(key))


def _check_metadata(space: Space, basis: Basis, q: Optional[Fraction]) -> Tuple[Basis, Optional[Fraction]]:
    if basis not in LEGAL_BASES[space]:
        raise MalformedInputError(f"Basis {basis.value} is not a basis of {space.value}")
    if basis is Basis.ETA:
        # η is η^(q) at q = 1
        if q is not None and q != 1:
            raise MetadataMismatchError(f"The ETA basis has q = 1, got q = {q}")
        return Basis.ETAQ, Fraction(1)
    if basis in Q_BASES:
        if q is None:
            raise InvariantViolation(f"Basis {basis.value} requires a q parameter")
        return basis, make_q(q)
    if q is not None:
        raise MetadataMismatchError(f"Basis {basis.value} does not take a q parameter")
    return basis, None


@dataclass(frozen=True)
class Element:
    """A finite linear combination of basis keys of one space and basis."""

    space: Space
    basis: Basis
    terms: Mapping[Key, Fraction] = field(default_factory=dict)
    q: Optional[Fraction] = None

    def __post_init__(self):
        basis, q = _check_metadata(self.space, self.basis, self.q)
        object.__setattr__(self, "basis", basis)
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "terms", clean(self.terms))

    @classmethod
    def basis_element(cls, space: Space, basis: Basis, key: Key, q: Optional[ScalarLike] = None) -> "Element":
        return cls(space, basis, {key: Fraction(1)}, None if q is None else parse_scalar(q))

    def with_terms(self, terms: Mapping[Key, Fraction]) -> "Element":
        return Element(self.space, self.basis, terms, self.q)

    def same_parent(self, other: "Element") -> bool:
        return (self.space, self.basis, self.q) == (other.space, other.basis, other.q)

    def require_parent(self, other: "Element") -> None:
        if not self.same_parent(other):
            raise MetadataMismatchError(
                f"Cannot combine {self.describe()} with {other.describe()}"
            )

    def describe(self) -> str:
        suffix = f", q={self.q}" if self.q is not None else ""
        return f"{self.space.value}/{self.basis.value}{suffix}"

    def is_zero(self) -> bool:
        return not self.terms

    def coefficient(self, key: Key) -> Fraction:
        return self.terms.get(key, Fraction(0))

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda kv: key_sort_key(kv[0]))

    def __add__(self, other: "Element") -> "Element":
        return add(self, other)

    def __sub__(self, other: "Element") -> "Element":
        return add(self, scale(-1, other))

    def __neg__(self) -> "Element":
        return scale(-1, self)

    def __rmul__(self, c: ScalarLike) -> "Element":
        return scale(c, self)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(f"{c}*{self.basis.value}{key_text(k)}" for k, c in self.sorted_terms())


@dataclass(frozen=True)
class Tensor:
    """An element of a tensor power; keys are tuples of basis keys."""

    space: Space
    basis: Basis
    terms: Mapping[Tuple[Key, ...], Fraction] = field(default_factory=dict)
    q: Optional[Fraction] = None
    arity: int = 2

    def __post_init__(self):
        basis, q = _check_metadata(self.space, self.basis, self.q)
        object.__setattr__(self, "basis", basis)
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "terms", clean(self.terms))
        for keys in self.terms:
            if len(keys) != self.arity:
                raise MalformedInputError(f"Tensor term {keys!r} does not have arity {self.arity}")

    def is_zero(self) -> bool:
        return not self.terms

    def coefficient(self, keys: Tuple[Key, ...]) -> Fraction:
        return self.terms.get(keys, Fraction(0))

    def sorted_terms(self):
        return sorted(
            self.terms.items(),
            key=lambda kv: (sum(grade_of(k) for k in kv[0]), tuple(key_sort_key(k) for k in kv[0])),
        )

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        b = self.basis.value
        return " + ".join(
            f"{c}*" + " ⊗ ".join(f"{b}{key_text(k)}" for k in keys) for keys, c in self.sorted_terms()
        )


def require_basis(x: Element, space: Space, *bases: Basis) -> None:
    """Raise MetadataMismatchError unless x lives in space with one of the bases."""
    if x.space is not space or (bases and x.basis not in bases):
        wanted = "/".join(b.value for b in bases) or "any basis"
        raise MetadataMismatchError(f"Expected {space.value} in {wanted}, got {x.describe()}")


def add(x: Element, y: Element) -> Element:
    """Coefficient-wise sum of two elements of the same parent."""
    x.require_parent(y)
    terms = dict(x.terms)
    for key, coeff in y.terms.items():
        accumulate(terms, key, coeff)
    return x.with_terms(terms)


def scale(c: ScalarLike, x: Element) -> Element:
    factor = parse_scalar(c)
    return x.with_terms({k: factor * v for k, v in x.terms.items()})


def element_sum(elements: Iterable[Element]) -> Element:
    items = list(elements)
    if not items:
        raise MalformedInputError("Cannot sum an empty list of elements")
    total = items[0]
    for item in items[1:]:
        total = add(total, item)
    return total


class BialgebraHandle(ABC):
    """A connected graded bialgebra given on a basis of keys.

    Subclasses supply the grading, the unit key and the structure maps on
    basis keys; the linear extensions and the Takeuchi machinery live here.
    """

    space: Space
    basis: Basis
    unit: Key
    q: Optional[Fraction] = None

    @abstractmethod
    def grade(self, key: Key) -> int:
        """Degree of a basis key."""

    @abstractmethod
    def product_keys(self, a: Key, b: Key) -> Terms:
        """Product of two basis keys."""

    @abstractmethod
    def coproduct_key(self, key: Key) -> Dict[Tuple[Key, Key], Fraction]:
        """Coproduct of a basis key as pairs of keys."""

    def counit_key(self, key: Key) -> Fraction:
        return Fraction(1) if key == self.unit else Fraction(0)

    def product(self, x: Mapping[Key, Fraction], y: Mapping[Key, Fraction]) -> Terms:
        result: Terms = {}
        for a, ca in x.items():
            for b, cb in y.items():
                for key, c in self.product_keys(a, b).items():
                    accumulate(result, key, ca * cb * c)
        return result

    def multiply_many(self, keys: Tuple[Key, ...]) -> Terms:
        result: Terms = {self.unit: Fraction(1)}
        for key in keys:
            result = self.product(result, {key: Fraction(1)})
        return result

    def coproduct(self, x: Mapping[Key, Fraction]) -> Dict[Tuple[Key, Key], Fraction]:
        return linear_map(x, self.coproduct_key)

    def counit(self, x: Mapping[Key, Fraction]) -> Fraction:
        return sum((c * self.counit_key(k) for k, c in x.items()), Fraction(0))

    def project_key(self, key: Key) -> Terms:
        """(id - uε) on a basis key."""
        result: Terms = {key: Fraction(1)}
        accumulate(result, self.unit, -self.counit_key(key))
        return result

    def reduced_coproduct_key(self, key: Key) -> Dict[Tuple[Key, Key], Fraction]:
        result: Dict[Tuple[Key, Key], Fraction] = {}
        for (a, b), c in self.coproduct_key(key).items():
            for a2, ca in self.project_key(a).items():
                for b2, cb in self.project_key(b).items():
                    accumulate(result, (a2, b2), c * ca * cb)
        return result

    def tensor_product(
        self,
        x: Mapping[Tuple[Key, ...], Fraction],
        y: Mapping[Tuple[Key, ...], Fraction],
    ) -> Dict[Tuple[Key, ...], Fraction]:
        """Componentwise product in a tensor power of the algebra."""
        result: Dict[Tuple[Key, ...], Fraction] = {}
        for keys_x, cx in x.items():
            for keys_y, cy in y.items():
                partial: Dict[Tuple[Key, ...], Fraction] = {(): cx * cy}
                for a, b in zip(keys_x, keys_y):
                    step: Dict[Tuple[Key, ...], Fraction] = {}
                    for prefix, c in partial.items():
                        for key, ck in self.product_keys(a, b).items():
                            accumulate(step, prefix + (key,), c * ck)
                    partial = step
                for keys, c in partial.items():
                    accumulate(result, keys, c)
        return result

    def element(self, terms: Mapping[Key, Fraction]) -> Element:
        return Element(self.space, self.basis, terms, self.q)

    def tensor(self, terms: Mapping[Tuple[Key, ...], Fraction], arity: int = 2) -> Tensor:
        return Tensor(self.space, self.basis, terms, self.q, arity)

    def require_own(self, x: Element) -> None:
        if (x.space, x.basis, x.q) != (self.space, self.basis, self.q):
            raise MetadataMismatchError(
                f"Element in {x.describe()} given to the {self.space.value}/{self.basis.value} handle"
            )


def reduced_coproduct(h: BialgebraHandle, x: Element) -> Tensor:
    """(id - uε) ⊗ (id - uε) applied to Δx."""
    h.require_own(x)
    return h.tensor(linear_map(x.terms, h.reduced_coproduct_key))


def takeuchi_terms(h: BialgebraHandle, x: Mapping[Key, Fraction]) -> Terms:
    """S(x) = Σ_k (-1)^k m^(k-1) (id - uε)^⊗k Δ^(k-1) x on raw terms."""
    result: Terms = {}
    accumulate(result, h.unit, h.counit(x))

    projected = linear_map(x, h.project_key)
    bound = max((h.grade(k) for k in projected), default=0) + 1
    layer: Dict[Tuple[Key, ...], Fraction] = {(k,): c for k, c in projected.items()}
    k = 1
    while layer:
        if k > bound:
            raise InvariantViolation(
                f"Takeuchi series did not terminate within {bound} iterations; grading is not connected"
            )
        sign = -1 if k % 2 else 1
        for keys, c in layer.items():
            for key, ck in h.multiply_many(keys).items():
                accumulate(result, key, sign * c * ck)
        following: Dict[Tuple[Key, ...], Fraction] = {}
        for keys, c in layer.items():
            for (a, b), cab in h.reduced_coproduct_key(keys[-1]).items():
                accumulate(following, keys[:-1] + (a, b), c * cab)
        layer = following
        k += 1
    logger.debug(f"Takeuchi series for {h.space.value} stopped after {k - 1} layers")
    return result


def takeuchi_antipode(h: BialgebraHandle, x: Element) -> Element:
    """Antipode of x by Takeuchi's formula on the handle's basis."""
    h.require_own(x)
    return h.element(takeuchi_terms(h, x.terms))


def convolve_identity(h: BialgebraHandle, x: Mapping[Key, Fraction], left: Callable[[Mapping[Key, Fraction]], Terms]) -> Terms:
    """m (f ⊗ id) Δ x for a linear map f given on raw terms."""
    result: Terms = {}
    for (a, b), c in h.coproduct(x).items():
        for key, ck in h.product(left({a: Fraction(1)}), {b: Fraction(1)}).items():
            accumulate(result, key, c * ck)
    return result


def convolve_identity_right(h: BialgebraHandle, x: Mapping[Key, Fraction], right: Callable[[Mapping[Key, Fraction]], Terms]) -> Terms:
    """m (id ⊗ f) Δ x."""
    result: Terms = {}
    for (a, b), c in h.coproduct(x).items():
        for key, ck in h.product({a: Fraction(1)}, right({b: Fraction(1)})).items():
            accumulate(result, key, c * ck)
    return result


def map_tensor(
    terms: Mapping[Tuple[Key, ...], Fraction], image: Callable[[Key], Mapping[Key, Fraction]]
) -> Dict[Tuple[Key, ...], Fraction]:
    """Apply a key-level linear map to every tensor component."""
    result: Dict[Tuple[Key, ...], Fraction] = {}
    for keys, coeff in terms.items():
        partial: Dict[Tuple[Key, ...], Fraction] = {(): coeff}
        for key in keys:
            step: Dict[Tuple[Key, ...], Fraction] = {}
            for prefix, c in partial.items():
                for target, ct in image(key).items():
                    accumulate(step, prefix + (target,), c * ct)
            partial = step
        for k, c in partial.items():
            accumulate(result, k, c)
    return result
