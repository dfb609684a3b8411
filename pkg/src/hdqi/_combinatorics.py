"""Small exact combinatorics shared by the expansion code."""

from __future__ import annotations

import math
from typing import Iterator, Sequence


def compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    """All ``nu`` in Z_{>=0}^parts with ``sum(nu) == total``."""
    if parts == 0:
        if total == 0:
            yield ()
        return
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in compositions(total - first, parts - 1):
            yield (first,) + rest


def parity_lifts(s: int, y: Sequence[int]) -> Iterator[tuple[int, ...]]:
    """All counting vectors ``mu`` with ``|mu| = s`` and ``mu = y (mod 2)``."""
    w = sum(y)
    if w > s or (s - w) % 2:
        return
    for nu in compositions((s - w) // 2, len(y)):
        yield tuple(yi + 2 * v for yi, v in zip(y, nu))


def multinomial(counts: Sequence[int]) -> int:
    out, running = 1, 0
    for c in counts:
        running += c
        out *= math.comb(running, c)
    return out


def multiset_permutations(counts: Sequence[int]) -> Iterator[tuple[int, ...]]:
    """Distinct words containing letter ``i`` exactly ``counts[i]`` times, in lexicographic order."""
    counts = list(counts)
    total = sum(counts)
    word: list[int] = []

    def rec():
        if len(word) == total:
            yield tuple(word)
            return
        for letter, c in enumerate(counts):
            if c:
                counts[letter] -= 1
                word.append(letter)
                yield from rec()
                word.pop()
                counts[letter] += 1

    yield from rec()


def inverse_factorial_powers(c: float, top: int) -> list[float]:
    """``[c**d / d! for d in 0..top]`` built by the chain ``prev * c / d``."""
    out = [1.0]
    for d in range(1, top + 1):
        out.append(out[-1] * c / d)
    return out
