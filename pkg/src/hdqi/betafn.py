"""Anticommutation graphs, reordering signs and weighted beta-functions.

``beta(G, s, y, c)`` is the coefficient of the index-ordered word
``z_1^{y_1} ... z_m^{y_m}`` in ``(sum_i c_i z_i)**s`` when ``z_i**2 = 1`` and
``z_i z_j = -z_j z_i`` exactly for the edges of ``G``.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from ._combinatorics import compositions, multinomial, multiset_permutations, parity_lifts
from .pauli import PauliHamiltonian, commutes


@dataclass(frozen=True)
class AnticommGraph:
    m: int
    adjacency: np.ndarray = field(compare=False)
    components: tuple[tuple[int, ...], ...] = field(init=False)
    # neighbours with a larger index, as bitmasks; the hashable identity of the graph
    upper: tuple[int, ...] = field(init=False)

    def __post_init__(self):
        adj = np.asarray(self.adjacency, dtype=bool)
        if adj.shape != (self.m, self.m) or np.any(adj != adj.T) or np.any(np.diag(adj)):
            raise ValueError("adjacency must be a symmetric m x m matrix with empty diagonal")
        adj.setflags(write=False)
        object.__setattr__(self, "adjacency", adj)
        upper = tuple(
            sum(1 << j for j in range(i + 1, self.m) if adj[i, j]) for i in range(self.m)
        )
        object.__setattr__(self, "upper", upper)

        seen, comps = set(), []
        for start in range(self.m):
            if start in seen:
                continue
            stack, comp = [start], []
            seen.add(start)
            while stack:
                v = stack.pop()
                comp.append(v)
                for u in np.flatnonzero(adj[v]):
                    if int(u) not in seen:
                        seen.add(int(u))
                        stack.append(int(u))
            comps.append(tuple(sorted(comp)))
        object.__setattr__(self, "components", tuple(comps))

    @classmethod
    def from_edges(cls, m: int, edges) -> "AnticommGraph":
        adj = np.zeros((m, m), dtype=bool)
        for i, j in edges:
            adj[i, j] = adj[j, i] = True
        return cls(m, adj)

    @property
    def edges(self) -> list[tuple[int, int]]:
        return [(i, j) for i in range(self.m) for j in range(i + 1, self.m) if self.adjacency[i, j]]

    @property
    def max_component(self) -> int:
        return max((len(c) for c in self.components), default=0)

    def subgraph(self, vertices: Sequence[int]) -> "AnticommGraph":
        idx = list(vertices)
        return AnticommGraph(len(idx), self.adjacency[np.ix_(idx, idx)])

    def edge_count(self, vertices: Sequence[int]) -> int:
        idx = list(vertices)
        return int(np.count_nonzero(np.triu(self.adjacency[np.ix_(idx, idx)])))

    def __hash__(self):
        return hash((self.m, self.upper))

    def __eq__(self, other):
        return isinstance(other, AnticommGraph) and (self.m, self.upper) == (other.m, other.upper)


def anticomm_graph(h: PauliHamiltonian) -> AnticommGraph:
    adj = np.zeros((h.m, h.m), dtype=bool)
    for i in range(h.m):
        for j in range(i + 1, h.m):
            if not commutes(h.terms[i], h.terms[j]):
                adj[i, j] = adj[j, i] = True
    return AnticommGraph(h.m, adj)


def sign(g: AnticommGraph, word: Sequence[int]) -> int:
    """Sign picked up when sorting ``word`` stably into nondecreasing index order.

    Only swaps of adjacent anticommuting letters flip the sign, so the result
    is ``(-1)**(number of inverted pairs joined by an edge)``.
    """
    flips = 0
    for p in range(len(word)):
        wp = word[p]
        for q in range(p + 1, len(word)):
            if word[q] < wp and g.adjacency[wp, word[q]]:
                flips += 1
    return -1 if flips % 2 else 1


@functools.lru_cache(maxsize=None)
def _signed_count(upper: tuple[int, ...], mu: tuple[int, ...]) -> int:
    # f(nu) sums sgn over words with letter counts nu.  Appending letter i to a
    # word with counts nu - e_i creates one inversion per already placed j > i
    # adjacent to i, so the sign factor only depends on the counts.
    m = len(mu)
    neighbours = [[j for j in range(i + 1, m) if (upper[i] >> j) & 1] for i in range(m)]

    @functools.lru_cache(maxsize=None)
    def f(nu: tuple[int, ...]) -> int:
        if not any(nu):
            return 1
        total = 0
        for i in range(m):
            if nu[i]:
                prev = nu[:i] + (nu[i] - 1,) + nu[i + 1 :]
                flips = sum(nu[j] for j in neighbours[i])
                total += -f(prev) if flips % 2 else f(prev)
        return total

    return f(tuple(mu))


def signed_count(g: AnticommGraph, mu: Sequence[int]) -> int:
    """``sum_{pi in S(mu)} sgn_{G,mu}(pi)`` as an exact integer."""
    return _signed_count(g.upper, tuple(int(v) for v in mu))


def signed_count_enumerated(g: AnticommGraph, mu: Sequence[int]) -> int:
    """Same sum by visiting every distinct multiset permutation (slow; reference path)."""
    return sum(sign(g, w) for w in multiset_permutations(mu))


def sign_average(g: AnticommGraph, mu: Sequence[int]) -> float:
    """``alpha_G(mu)``: the mean sign over ``S(mu)``."""
    return signed_count(g, mu) / multinomial(mu)


def beta_direct(g: AnticommGraph, s: int, y: Sequence[int], c: Sequence[float]) -> float:
    if s < 0:
        raise ValueError("order s must be nonnegative")
    if len(y) != g.m or len(c) != g.m:
        raise ValueError("y and c must have one entry per vertex")
    total = 0.0
    for mu in parity_lifts(s, [int(v) & 1 for v in y]):
        weight = signed_count(g, mu)
        if weight:
            total += weight * math.prod(ci**k for ci, k in zip(c, mu))
    return total


def beta_factorized(g: AnticommGraph, s: int, y: Sequence[int], c: Sequence[float]) -> float:
    """Combine per-component beta values over compositions of ``s``."""
    if s < 0:
        raise ValueError("order s must be nonnegative")
    parts = []
    for comp in g.components:
        sub = g.subgraph(comp)
        yc = [int(y[v]) & 1 for v in comp]
        cc = [c[v] for v in comp]
        parts.append([beta_direct(sub, kappa, yc, cc) for kappa in range(s + 1)])
    total = 0.0
    for kappa in compositions(s, len(parts)):
        term = float(multinomial(kappa))
        for t, kt in enumerate(kappa):
            term *= parts[t][kt]
            if term == 0.0:
                break
        total += term
    return total


def beta_cost_estimate(M: int, s: int, w: int) -> int:
    """Operation-count bound for one beta evaluation (zero when no ``mu`` qualifies)."""
    if w > s or (s - w) % 2 or M <= 0:
        return 0
    terms = math.comb((s - w) // 2 + M - 1, M - 1)
    if s <= M:
        return terms * s * M * 2**s
    return terms * s * M * (math.ceil(s / M) + 1) ** M
