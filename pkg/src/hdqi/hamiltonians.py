"""Hamiltonian families: the chain with fields on even sites, and seeded random instances."""

from __future__ import annotations

import numpy as np

from .betafn import AnticommGraph
from .errors import InputError
from .gf2code import gf2_rank
from .pauli import PauliHamiltonian, PauliTerm, commutes, product

_MAX_DRAWS = 20000
_RESTARTS = 20


def h1_hamiltonian(n: int, g: float) -> PauliHamiltonian:
    """``sum_i Z_i Z_{i+1}`` along ``2n + 1`` qubits plus ``g X`` on every second qubit.

    Terms are the ``2n`` bonds in order followed by the ``n`` fields; the
    field sits on qubit ``2i - 1`` (0-based), the middle of bonds ``2i - 2``
    and ``2i - 1``.
    """
    if n < 1:
        raise InputError("chain parameter n must be positive")
    q = 2 * n + 1
    terms, coeffs = [], []
    for i in range(2 * n):
        terms.append(PauliTerm(q, (1 << i) | (1 << (i + 1)), 0))
        coeffs.append(1.0)
    for i in range(1, n + 1):
        terms.append(PauliTerm(q, 0, 1 << (2 * i - 1)))
        coeffs.append(float(g))
    return PauliHamiltonian(q, tuple(coeffs), tuple(terms))


def random_pauli(n: int, rng: np.random.Generator) -> PauliTerm:
    while True:
        z = int(rng.integers(0, 1 << n))
        x = int(rng.integers(0, 1 << n))
        if z or x:
            return PauliTerm(n, z, x)


def _coeffs(rng: np.random.Generator, m: int) -> tuple[float, ...]:
    return tuple(float(v) for v in rng.uniform(-1.0, 1.0, size=m))


def _grow(n, m, rng, accept) -> list[PauliTerm]:
    # greedy draws can paint themselves into a corner, so restart a few times
    for _ in range(_RESTARTS):
        chosen: list[PauliTerm] = []
        for _ in range(_MAX_DRAWS // _RESTARTS):
            if len(chosen) == m:
                return chosen
            cand = random_pauli(n, rng)
            if all(cand.symp_int != t.symp_int for t in chosen) and accept(chosen, cand):
                chosen.append(cand)
        if len(chosen) == m:
            return chosen
    raise InputError(f"could not draw {m} terms on {n} qubits with the requested structure")


def _independent_after(chosen, cand) -> bool:
    return gf2_rank([t.symp_int for t in chosen] + [cand.symp_int]) == len(chosen) + 1


def random_commuting(
    n: int, m: int, rng: np.random.Generator, independent: bool = False
) -> PauliHamiltonian:
    """``m`` distinct pairwise commuting terms; ``independent`` forces a trivial code (needs ``m <= n``)."""

    def accept(chosen, cand):
        if not all(commutes(cand, t) for t in chosen):
            return False
        return _independent_after(chosen, cand) if independent else True

    terms = _grow(n, m, rng, accept)
    return PauliHamiltonian(n, _coeffs(rng, m), tuple(terms))


def random_nearly_independent(
    n: int, m_indep: int, k: int, rng: np.random.Generator
) -> PauliHamiltonian:
    """Commuting independent terms plus ``k`` signed products of random subsets of them."""
    base = random_commuting(n, m_indep, rng, independent=True)
    terms = list(base.terms)
    seen = {t.symp_int for t in terms}
    coeffs = list(base.coeffs)
    for _ in range(_MAX_DRAWS):
        if len(terms) == m_indep + k:
            break
        mask = int(rng.integers(1, 1 << m_indep))
        if bin(mask).count("1") < 2:
            continue
        prod = product((base.terms[i] for i in range(m_indep) if (mask >> i) & 1), n)
        if prod.symp_int in seen:
            continue
        seen.add(prod.symp_int)
        terms.append(PauliTerm(n, prod.z, prod.x))
        coeffs.append(float(rng.uniform(-1.0, 1.0)))
    if len(terms) != m_indep + k:
        raise InputError(f"could not add {k} distinct dependent products")
    order = rng.permutation(len(terms))
    return PauliHamiltonian(n, tuple(coeffs[i] for i in order), tuple(terms[i] for i in order))


def random_noncommuting(
    n: int,
    m: int,
    rng: np.random.Generator,
    max_component: int = 4,
    independent: bool = False,
    require_edge: bool = True,
) -> PauliHamiltonian:
    """Distinct terms whose anticommutation components stay within ``max_component``."""

    def accept(chosen, cand):
        if independent and not _independent_after(chosen, cand):
            return False
        ts = chosen + [cand]
        edges = [(i, j) for i in range(len(ts)) for j in range(i + 1, len(ts)) if not commutes(ts[i], ts[j])]
        return AnticommGraph.from_edges(len(ts), edges).max_component <= max_component

    for _ in range(200):
        terms = _grow(n, m, rng, accept)
        h = PauliHamiltonian(n, _coeffs(rng, m), tuple(terms))
        if not require_edge or not h.is_commuting():
            return h
    raise InputError("could not draw a Hamiltonian with an anticommuting pair")


def independent_plus_product(n: int, m: int, rng: np.random.Generator) -> PauliHamiltonian:
    """``m`` independent commuting terms plus one extra term proportional to their product."""
    base = random_commuting(n, m, rng, independent=True)
    prod = product(base.terms, n)
    extra = PauliTerm(n, prod.z, prod.x)
    return PauliHamiltonian(
        n, base.coeffs + (float(rng.uniform(-1.0, 1.0)),), base.terms + (extra,)
    )
