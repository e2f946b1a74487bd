"""Partition diagrams with the horizontal (⊗) and bottom-join (•) products.

A diagram of order k is a set partition of the 2k nodes {1..k, 1'..k'}.
Top node c is stored as the integer c and bottom node c' as -c, so a block
is a tuple of non-zero integers and a diagram a tuple of blocks.
"""

import itertools
import logging
import string
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import Callable, Dict, FrozenSet, Iterable, List, Sequence, Tuple

from sympy.utilities.iterables import multiset_partitions

from models.schemas import Classification
from services.errors import DiagramError

logger = logging.getLogger(__name__)

Block = Tuple[int, ...]


class Row(str, Enum):
    """Row of a node; top sorts before bottom within a column."""

    TOP = "top"
    BOTTOM = "bottom"


class Connective(str, Enum):
    """Join used between two consecutive atoms."""

    TENSOR = "tensor"
    BULLET = "bullet"


def make_node(column: int, row: Row) -> int:
    """Encode a node as a signed integer."""
    if column < 1:
        raise DiagramError(f"Node column must be positive, got {column}")
    return column if row is Row.TOP else -column


def node_column(node: int) -> int:
    return abs(node)


def node_row(node: int) -> Row:
    return Row.TOP if node > 0 else Row.BOTTOM


def node_key(node: int) -> Tuple[int, int]:
    """Sort key ordering nodes by (column, top before bottom)."""
    return (abs(node), 0 if node > 0 else 1)


@dataclass(frozen=True)
class Diagram:
    """A partition diagram in canonical form.

    Nodes inside a block are sorted by ``node_key`` and blocks are sorted by
    their least node. Build instances with ``canonicalize``.
    """

    order: int
    blocks: Tuple[Block, ...]

    @property
    def is_empty(self) -> bool:
        return self.order == 0

    def sort_key(self) -> Tuple:
        return (self.order, tuple(tuple(node_key(n) for n in b) for b in self.blocks))

    def block_index(self, node: int) -> int:
        for index, block in enumerate(self.blocks):
            if node in block:
                return index
        raise DiagramError(f"Node {node} is not in diagram {self}")

    def __str__(self) -> str:
        return "[" + ",".join("[" + ",".join(str(n) for n in b) + "]" for b in self.blocks) + "]"


EMPTY = Diagram(0, ())


def _make(order: int, blocks: Iterable[Iterable[int]]) -> Diagram:
    """Sort trusted blocks into canonical form without validation."""
    sorted_blocks = [tuple(sorted(b, key=node_key)) for b in blocks]
    sorted_blocks.sort(key=lambda b: node_key(b[0]))
    return Diagram(order, tuple(sorted_blocks))


def canonicalize(order: int, blocks: Iterable[Iterable[int]]) -> Diagram:
    """
    Validate a block list and return the canonical diagram.

    Args:
        order: Number of columns k
        blocks: Node sets, bottom nodes given as negative columns

    Returns:
        Canonical Diagram

    Raises:
        DiagramError: On overlapping blocks, missing nodes, empty blocks or
            columns outside 1..order
    """
    if isinstance(order, bool) or not isinstance(order, int) or order < 0:
        raise DiagramError(f"Diagram order must be a non-negative integer, got {order!r}")

    seen = set()
    collected = []
    for raw in blocks:
        block = list(raw)
        if not block:
            raise DiagramError("Diagram blocks must be non-empty")
        for node in block:
            if isinstance(node, bool) or not isinstance(node, int):
                raise DiagramError(f"Node {node!r} is not an integer")
            if node == 0 or abs(node) > order:
                raise DiagramError(f"Node {node} out of range for order {order}")
            if node in seen:
                raise DiagramError(f"Node {node} appears in more than one block")
            seen.add(node)
        collected.append(block)

    missing = [n for c in range(1, order + 1) for n in (c, -c) if n not in seen]
    if missing:
        raise DiagramError(f"Blocks do not cover nodes {missing} of an order-{order} diagram")

    return _make(order, collected)


def tensor(d1: Diagram, d2: Diagram) -> Diagram:
    """Place d2 to the right of d1."""
    if d1.is_empty:
        return d2
    if d2.is_empty:
        return d1
    shift = d1.order
    shifted = [tuple(n + shift if n > 0 else n - shift for n in b) for b in d2.blocks]
    # d1's blocks stay sorted and all precede the shifted ones
    return Diagram(d1.order + d2.order, d1.blocks + tuple(shifted))


def bullet(d1: Diagram, d2: Diagram) -> Diagram:
    """
    Juxtapose and join the bottom-right node of d1 with the bottom-left node of d2.

    ∅ is a unit on either side, so the mixed laws (a⊗b)•c = a⊗(b•c) and
    (a•b)⊗c = a•(b⊗c) only hold for non-empty b.
    """
    if d1.is_empty:
        return d2
    if d2.is_empty:
        return d1
    joined = tensor(d1, d2)
    left = joined.block_index(-d1.order)
    right = joined.block_index(-(d1.order + 1))
    blocks = [b for i, b in enumerate(joined.blocks) if i not in (left, right)]
    blocks.append(joined.blocks[left] + joined.blocks[right])
    return _make(joined.order, blocks)


@lru_cache(maxsize=None)
def _crossings(d: Diagram) -> Dict[int, Tuple[int, ...]]:
    """Map each cut position 1..k-1 to the indexes of blocks spanning it."""
    crossing: Dict[int, List[int]] = {i: [] for i in range(1, d.order)}
    for index, block in enumerate(d.blocks):
        columns = [abs(n) for n in block]
        for i in range(min(columns), max(columns)):
            crossing[i].append(index)
    return {i: tuple(v) for i, v in crossing.items()}


def tensor_cuts(d: Diagram) -> FrozenSet[int]:
    """Positions i where no block joins columns 1..i to columns i+1..k."""
    return frozenset(i for i, spanning in _crossings(d).items() if not spanning)


def bullet_cuts(d: Diagram) -> FrozenSet[int]:
    """Positions i crossed by a single block that holds bottom nodes i and i+1."""
    cuts = set()
    for i, spanning in _crossings(d).items():
        if len(spanning) == 1:
            block = d.blocks[spanning[0]]
            if -i in block and -(i + 1) in block:
                cuts.add(i)
    return frozenset(cuts)


def _split(d: Diagram, cuts: Sequence[int]) -> List[Diagram]:
    """Cut d into column segments at the given sorted positions and relabel each."""
    bounds = [0] + list(cuts) + [d.order]
    pieces = []
    for lo, hi in zip(bounds, bounds[1:]):
        segment = []
        for block in d.blocks:
            part = [n - lo if n > 0 else n + lo for n in block if lo < abs(n) <= hi]
            if part:
                segment.append(part)
        pieces.append(_make(hi - lo, segment))
    return pieces


@lru_cache(maxsize=None)
def _tensor_factors(d: Diagram) -> Tuple[Diagram, ...]:
    if d.is_empty:
        return ()
    return tuple(_split(d, sorted(tensor_cuts(d))))


def tensor_factorize(d: Diagram) -> List[Diagram]:
    """Maximal factorization into non-empty ⊗-irreducible diagrams (empty for ∅)."""
    return list(_tensor_factors(d))


def bullet_split(d: Diagram, i: int) -> Tuple[Diagram, Diagram]:
    """
    Undo a • join at cut position i.

    Args:
        d: Diagram to split
        i: A position in bullet_cuts(d)

    Returns:
        (left, right) with bullet(left, right) == d

    Raises:
        DiagramError: If i is not a • cut of d
    """
    if i not in bullet_cuts(d):
        raise DiagramError(f"Position {i} is not a bullet cut of {d}")
    left, right = _split(d, [i])
    return left, right


@dataclass(frozen=True)
class AtomDecomposition:
    """A diagram written as atoms joined left to right by connectives."""

    atoms: Tuple[Diagram, ...]
    connectives: Tuple[Connective, ...]

    @property
    def s_set(self) -> FrozenSet[int]:
        """1-based positions of the ⊗ connectives."""
        return frozenset(i + 1 for i, c in enumerate(self.connectives) if c is Connective.TENSOR)

    @property
    def length(self) -> int:
        return 1 + len(self.s_set) if self.atoms else 0


@lru_cache(maxsize=None)
def atoms(d: Diagram) -> AtomDecomposition:
    """Unique decomposition of d into atoms (⊗- and •-irreducible diagrams)."""
    found: List[Diagram] = []
    connectives: List[Connective] = []
    for factor in _tensor_factors(d):
        if found:
            connectives.append(Connective.TENSOR)
        pieces = _split(factor, sorted(bullet_cuts(factor)))
        found.extend(pieces)
        connectives.extend([Connective.BULLET] * (len(pieces) - 1))
    return AtomDecomposition(tuple(found), tuple(connectives))


def assemble(decomposition: AtomDecomposition) -> Diagram:
    """Left fold of the atoms under their connectives; inverse of ``atoms``."""
    parts = decomposition.atoms
    if len(decomposition.connectives) != max(len(parts) - 1, 0):
        raise DiagramError(
            f"{len(parts)} atoms need {max(len(parts) - 1, 0)} connectives, "
            f"got {len(decomposition.connectives)}"
        )
    if any(a.is_empty for a in parts):
        raise DiagramError("Cannot assemble an empty atom")
    if not parts:
        return EMPTY
    result = parts[0]
    for connective, atom in zip(decomposition.connectives, parts[1:]):
        result = tensor(result, atom) if connective is Connective.TENSOR else bullet(result, atom)
    return result


def length(d: Diagram) -> int:
    """Number of ⊗-irreducible factors."""
    return len(_tensor_factors(d))


def s_set(d: Diagram) -> FrozenSet[int]:
    return atoms(d).s_set


def similar(d1: Diagram, d2: Diagram) -> bool:
    return atoms(d1).atoms == atoms(d2).atoms


def refines(d1: Diagram, d2: Diagram) -> bool:
    """True when d1 ≤ d2: same atoms and S(d2) ⊆ S(d1)."""
    return similar(d1, d2) and s_set(d2) <= s_set(d1)


def _flip_all(d: Diagram, source: Connective, target: Connective) -> Tuple[Diagram, ...]:
    decomposition = atoms(d)
    positions = [i for i, c in enumerate(decomposition.connectives) if c is source]
    results = []
    for size in range(len(positions) + 1):
        for chosen in itertools.combinations(positions, size):
            connectives = list(decomposition.connectives)
            for i in chosen:
                connectives[i] = target
            results.append(assemble(AtomDecomposition(decomposition.atoms, tuple(connectives))))
    return tuple(sorted(results, key=Diagram.sort_key))


@lru_cache(maxsize=None)
def _coarsenings(d: Diagram) -> Tuple[Diagram, ...]:
    return _flip_all(d, Connective.TENSOR, Connective.BULLET)


@lru_cache(maxsize=None)
def _refinements(d: Diagram) -> Tuple[Diagram, ...]:
    return _flip_all(d, Connective.BULLET, Connective.TENSOR)


def coarsenings(d: Diagram) -> List[Diagram]:
    """All σ with d ≤ σ, including d, in canonical order."""
    return list(_coarsenings(d))


def refinements(d: Diagram) -> List[Diagram]:
    """All σ with σ ≤ d, including d, in canonical order."""
    return list(_refinements(d))


def similar_class(d: Diagram) -> List[Diagram]:
    """All diagrams with the same atom sequence as d, in canonical order."""
    decomposition = atoms(d)
    if not decomposition.atoms:
        return [EMPTY]
    finest = AtomDecomposition(
        decomposition.atoms, (Connective.TENSOR,) * len(decomposition.connectives)
    )
    return coarsenings(assemble(finest))


@lru_cache(maxsize=8)
def _enumerate(k: int) -> Tuple[Diagram, ...]:
    if k == 0:
        return (EMPTY,)
    nodes = [n for c in range(1, k + 1) for n in (c, -c)]
    found = [_make(k, blocks) for blocks in multiset_partitions(nodes)]
    found.sort(key=Diagram.sort_key)
    logger.debug(f"Enumerated {len(found)} diagrams of order {k}")
    return tuple(found)


def enumerate_diagrams(k: int) -> List[Diagram]:
    """All diagrams of order k in canonical order."""
    if k < 0:
        raise DiagramError(f"Order must be non-negative, got {k}")
    return list(_enumerate(k))


def diagrams_up_to(max_order: int) -> List[Diagram]:
    return [d for k in range(max_order + 1) for d in _enumerate(k)]


def _boundary_position(node: int, order: int) -> int:
    # boundary cycle 1, 2, ..., k, k', (k-1)', ..., 1'
    return node - 1 if node > 0 else 2 * order + node


def _interleave(first: Sequence[int], second: Sequence[int]) -> bool:
    labels = sorted([(p, 0) for p in first] + [(p, 1) for p in second])
    runs = 1 + sum(1 for a, b in zip(labels, labels[1:]) if a[1] != b[1])
    # two arcs of one block around the other give at most three runs
    return runs >= 4


def is_planar(d: Diagram) -> bool:
    """True iff no two blocks cross along the boundary cycle of the rectangle."""
    positions = [[_boundary_position(n, d.order) for n in b] for b in d.blocks]
    return not any(_interleave(a, b) for a, b in itertools.combinations(positions, 2))


def _is_propagating(block: Block) -> bool:
    return any(n > 0 for n in block) and any(n < 0 for n in block)


def propagation_number(d: Diagram) -> int:
    return sum(1 for b in d.blocks if _is_propagating(b))


def is_matching(d: Diagram) -> bool:
    return all(len(b) <= 2 for b in d.blocks)


def is_perfect_matching(d: Diagram) -> bool:
    return all(len(b) == 2 for b in d.blocks)


def is_permuting(d: Diagram) -> bool:
    return all(len(b) == 2 and _is_propagating(b) for b in d.blocks)


def is_partial_permutation(d: Diagram) -> bool:
    return all(len(b) == 1 or (len(b) == 2 and _is_propagating(b)) for b in d.blocks)


def has_isolated_upper(d: Diagram) -> bool:
    return all(len(b) == 1 for b in d.blocks if any(n > 0 for n in b))


PREDICATES: Dict[str, Callable[[Diagram], bool]] = {
    "planar": is_planar,
    "propagation0": lambda d: propagation_number(d) == 0,
    "isolated_upper": has_isolated_upper,
    "matching": is_matching,
    "perfect_matching": is_perfect_matching,
    "permuting": is_permuting,
    "partial_permutation": is_partial_permutation,
}


def classify(d: Diagram) -> Classification:
    """Evaluate the subcoalgebra predicates on d."""
    return Classification(
        matching=is_matching(d),
        perfect_matching=is_perfect_matching(d),
        permuting=is_permuting(d),
        partial_permutation=is_partial_permutation(d),
        isolated_upper=has_isolated_upper(d),
        planar=is_planar(d),
        propagation_number=propagation_number(d),
    )


def _pi_line(n: int) -> Diagram:
    return _make(n, [[c] for c in range(1, n + 1)] + [[-c for c in range(1, n + 1)]])


def pi_of_composition(parts: Sequence[int]) -> Diagram:
    """π_(α1) ⊗ ... ⊗ π_(αp), where π_(n) has isolated top nodes and one bottom block."""
    result = EMPTY
    for n in parts:
        if n < 1:
            raise DiagramError(f"Composition parts must be positive, got {n}")
        result = tensor(result, _pi_line(n))
    return result


def alpha_of(d: Diagram) -> Tuple[int, ...]:
    """Orders of the ⊗-irreducible factors."""
    return tuple(f.order for f in _tensor_factors(d))


def _block_labels(count: int) -> List[str]:
    letters = string.ascii_lowercase
    if count <= len(letters):
        return list(letters[:count])
    return [f"{letters[i % 26]}{i // 26}" for i in range(count)]


def render_ascii(d: Diagram) -> str:
    """Two-row picture: each node shows the letter of its block."""
    if d.is_empty:
        return "(empty diagram)"
    labels = _block_labels(len(d.blocks))
    owner = {n: labels[i] for i, b in enumerate(d.blocks) for n in b}
    width = max(len(label) for label in labels)
    top = " ".join(owner[c].rjust(width) for c in range(1, d.order + 1))
    bottom = " ".join(owner[-c].rjust(width) for c in range(1, d.order + 1))
    return f"top    {top}\nbottom {bottom}"
