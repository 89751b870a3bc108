"""Words over the alphabet {1, ..., d} and the letter-counting map.

A word is a plain tuple of 1-based letter indices; the empty tuple is the
empty word.  All basis-indexed matrices in this package use the order
produced by :func:`enumerate_words` (graded, then lexicographic).
"""

from __future__ import annotations

import itertools
from functools import lru_cache
from typing import Iterable, Sequence

Word = tuple[int, ...]
MultiIndex = tuple[int, ...]

EMPTY: Word = ()


def as_word(letters: Iterable[int], d: int | None = None) -> Word:
    w = tuple(int(i) for i in letters)
    if d is not None:
        check_word(w, d)
    return w


def check_word(w: Sequence[int], d: int) -> None:
    for i in w:
        if not 1 <= i <= d:
            raise ValueError(f"letter {i} outside alphabet 1..{d}")


def enumerate_words(d: int, N: int) -> list[Word]:
    """All words of length <= N, shortest first, ties in lexicographic order."""
    if d < 1:
        raise ValueError("d must be positive")
    if N < 0:
        raise ValueError("N must be non-negative")
    return list(_enumerate(d, N))


@lru_cache(maxsize=64)
def _enumerate(d: int, N: int) -> tuple[Word, ...]:
    out: list[Word] = []
    letters = range(1, d + 1)
    for k in range(N + 1):
        out.extend(itertools.product(letters, repeat=k))
    return tuple(out)


@lru_cache(maxsize=64)
def word_index(d: int, N: int) -> dict[Word, int]:
    """Position of each word in ``enumerate_words(d, N)``."""
    return {w: k for k, w in enumerate(_enumerate(d, N))}


def count_words(d: int, N: int) -> int:
    if d == 1:
        return N + 1
    return (d ** (N + 1) - 1) // (d - 1)


def transpose(w: Sequence[int]) -> Word:
    return tuple(reversed(tuple(w)))


def concat(u: Sequence[int], v: Sequence[int]) -> Word:
    return tuple(u) + tuple(v)


def letter_count(w: Sequence[int], d: int) -> MultiIndex:
    counts = [0] * d
    for i in w:
        counts[i - 1] += 1
    return tuple(counts)


def words_with_count(n: Sequence[int]) -> list[Word]:
    """Every word whose letter count is ``n`` (the fibre of the counting map)."""
    letters: list[int] = []
    for k, nk in enumerate(n, start=1):
        letters.extend([k] * nk)
    return sorted(set(itertools.permutations(letters)))


def enumerate_multi_indices(d: int, N: int) -> list[MultiIndex]:
    """Multi-indices of total degree <= N, graded then reverse-lex (z1^k first)."""
    out: list[MultiIndex] = []
    for k in range(N + 1):
        out.extend(_compositions(k, d))
    return out


def _compositions(total: int, parts: int) -> list[MultiIndex]:
    if parts == 1:
        return [(total,)]
    out: list[MultiIndex] = []
    for first in range(total, -1, -1):
        for rest in _compositions(total - first, parts - 1):
            out.append((first,) + rest)
    return out


def format_word(w: Sequence[int]) -> str:
    if not w:
        return "∅"
    return "".join(str(i) for i in w) if max(w) < 10 else ".".join(str(i) for i in w)
