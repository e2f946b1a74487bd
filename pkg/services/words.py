"""Word combinatorics shared by the Hopf algebras: shuffles, quasi-shuffles, compositions."""

import itertools
from typing import Callable, Iterator, List, Sequence, Tuple, TypeVar

T = TypeVar("T")


def shuffle_tags(n: int, m: int) -> Iterator[Tuple[int, ...]]:
    """Origin tags of every shuffle of a length-n word with a length-m word.

    Tag 0 marks a letter of the first word, tag 1 a letter of the second.
    """
    for positions in itertools.combinations(range(n + m), n):
        tags = [1] * (n + m)
        for p in positions:
            tags[p] = 0
        yield tuple(tags)


def interleave(u: Sequence[T], v: Sequence[T], tags: Sequence[int]) -> List[Tuple[int, int, T]]:
    """Spell out a shuffle as (tag, index in its word, letter) triples."""
    counters = [0, 0]
    words = (u, v)
    spelled = []
    for tag in tags:
        index = counters[tag]
        spelled.append((tag, index, words[tag][index]))
        counters[tag] += 1
    return spelled


def shuffles(u: Sequence[T], v: Sequence[T]) -> Iterator[Tuple[T, ...]]:
    for tags in shuffle_tags(len(u), len(v)):
        yield tuple(letter for _, _, letter in interleave(u, v, tags))


def quasi_shuffles(u: Sequence[T], v: Sequence[T], merge: Callable[[T, T], T]) -> Iterator[Tuple[T, ...]]:
    """Overlapping shuffles: the next letter comes from u, from v, or merges both heads."""
    if not u:
        yield tuple(v)
        return
    if not v:
        yield tuple(u)
        return
    for rest in quasi_shuffles(u[1:], v, merge):
        yield (u[0],) + rest
    for rest in quasi_shuffles(u, v[1:], merge):
        yield (v[0],) + rest
    for rest in quasi_shuffles(u[1:], v[1:], merge):
        yield (merge(u[0], v[0]),) + rest


def deconcatenations(u: Sequence[T]) -> Iterator[Tuple[Tuple[T, ...], Tuple[T, ...]]]:
    word = tuple(u)
    for i in range(len(word) + 1):
        yield word[:i], word[i:]


def consecutive_splits(u: Sequence[T], pieces: int) -> Iterator[Tuple[Tuple[T, ...], ...]]:
    """Ways to cut u into the given number of non-empty consecutive pieces."""
    word = tuple(u)
    for cuts in itertools.combinations(range(1, len(word)), pieces - 1):
        bounds = (0,) + cuts + (len(word),)
        yield tuple(word[a:b] for a, b in zip(bounds, bounds[1:]))


def compositions(n: int) -> List[Tuple[int, ...]]:
    """All compositions of n, sorted lexicographically; compositions(0) == [()]."""
    if n == 0:
        return [()]
    found = []
    for size in range(n):
        for cuts in itertools.combinations(range(1, n), size):
            bounds = (0,) + cuts + (n,)
            found.append(tuple(b - a for a, b in zip(bounds, bounds[1:])))
    return sorted(found)
