"""Reference states as matrix product states, with direct-summation oracles.

Every builder returns an :class:`MpsReferenceState` whose amplitude on a
site-symbol string ``y`` is ``v_left @ A_1(y_1) ... A_T(y_T) @ trailing @ v_right``.
``v_left`` already carries the ``1 / norm`` factor, so amplitudes are normalized.

Register order.  The circuit controls one qubit per entry of
``register_terms``; site ``t`` covers the terms ``site_terms[t]`` and bit ``b``
of its symbol belongs to ``site_terms[t][b]``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ._combinatorics import compositions, inverse_factorial_powers, parity_lifts
from .betafn import AnticommGraph, anticomm_graph, beta_direct
from .errors import (
    CapExceeded,
    ComponentTooLarge,
    DimensionError,
    InputError,
    KTooLarge,
    NoncommutingTerms,
    NonpositiveNorm,
)
from .gf2code import BlockPartition, build_code, find_block_partition
from .pauli import PauliHamiltonian
from .poly import Polynomial

COMMUTING = "commuting"
NEARLY_INDEPENDENT = "nearly-independent"
NONCOMMUTING = "noncommuting"

BOND_CAP = 4096
COMPONENT_CAP = 6
STATEVECTOR_CAP = 1 << 22


@dataclass(frozen=True, eq=False)
class MpsReferenceState:
    regime: str
    site_matrices: tuple[np.ndarray, ...]  # site t: array (q_t, D, D)
    v_left: np.ndarray
    v_right: np.ndarray
    trailing: np.ndarray | None
    norm: float
    site_terms: tuple[tuple[int, ...], ...]
    register_terms: tuple[int, ...]
    degree: int
    k: int = 0

    @property
    def D(self) -> int:
        return len(self.v_right)

    @property
    def site_arities(self) -> tuple[int, ...]:
        return tuple(a.shape[0] for a in self.site_matrices)

    @property
    def n_sites(self) -> int:
        return len(self.site_matrices)

    @property
    def right_vector(self) -> np.ndarray:
        """``trailing @ v_right``; equals ``v_right`` outside the nearly-independent regime."""
        return self.v_right if self.trailing is None else self.trailing @ self.v_right


def predicted_bond_dim(regime: str, l: int, k: int = 0) -> int:
    if regime == NEARLY_INDEPENDENT:
        return (1 << k) * (l + 1)
    return l + 1


def detect_regime(h: PauliHamiltonian) -> str:
    if not h.is_commuting():
        return NONCOMMUTING
    return COMMUTING if build_code(h).k == 0 else NEARLY_INDEPENDENT


# ---------------------------------------------------------------- commuting


def ladder_matrix(d: int, D: int) -> np.ndarray:
    """Shift by ``d`` along the bond: ones on superdiagonal ``d`` (zero if ``d >= D``)."""
    return np.eye(D, k=d)


def parity_band_matrices(c: float, D: int) -> np.ndarray:
    """``(A_0, A_1)``: entry ``(i, j)`` is ``c**(j-i) / (j-i)!`` when ``j - i`` has the given parity."""
    powers = inverse_factorial_powers(c, D - 1)
    out = np.zeros((2, D, D))
    for d, w in enumerate(powers):
        out[d % 2] += w * ladder_matrix(d, D)
    return out


def _factorial_weighted(p: Polynomial) -> np.ndarray:
    return np.array([a * math.factorial(j) for j, a in enumerate(p.coeffs)])


def _unit(D: int, copies: int = 1) -> np.ndarray:
    u = np.zeros(copies * D)
    u[::D] = 1.0
    return u


def _transfer_norm_sq(sites: Sequence[np.ndarray], left: np.ndarray, right: np.ndarray) -> float:
    env = np.outer(left, left)
    for a in sites:
        env = np.einsum("qij,ik,qkl->jl", a, env, a, optimize=True)
    return float(right @ env @ right)


def build_norm(mps: MpsReferenceState) -> float:
    """Normalization recomputed by left-to-right transfer contraction of the unnormalized state."""
    left = mps.v_left * mps.norm
    n2 = _transfer_norm_sq(mps.site_matrices, left, mps.right_vector)
    return _checked_root(n2)


def _checked_root(n2: float) -> float:
    if not math.isfinite(n2) or n2 <= 0.0:
        raise NonpositiveNorm(f"squared normalization is {n2!r}")
    return math.sqrt(n2)


def _finish(regime, sites, u, v_right, trailing, site_terms, register_terms, l, k=0):
    right = v_right if trailing is None else trailing @ v_right
    norm = _checked_root(_transfer_norm_sq(sites, u, right))
    return MpsReferenceState(
        regime=regime,
        site_matrices=tuple(sites),
        v_left=u / norm,
        v_right=v_right,
        trailing=trailing,
        norm=norm,
        site_terms=tuple(site_terms),
        register_terms=tuple(register_terms),
        degree=l,
        k=k,
    )


def _require_commuting(h: PauliHamiltonian) -> None:
    if not h.is_commuting():
        raise NoncommutingTerms("this builder needs pairwise commuting terms")


def build_commuting_mps(h: PauliHamiltonian, p: Polynomial) -> MpsReferenceState:
    _require_commuting(h)
    l = p.degree
    D = l + 1
    sites = [parity_band_matrices(c, D) for c in h.coeffs]
    return _finish(
        COMMUTING, sites, _unit(D), _factorial_weighted(p), None,
        [(i,) for i in range(h.m)], range(h.m), l,
    )


# ------------------------------------------------------ nearly independent


def _chi(partition: BlockPartition, K: int) -> dict[int, int]:
    """Parity of how many relations in subset ``K`` (bitmask) contain each independent term."""
    out = {i: 0 for i in partition.independent_indices}
    for j, rel in enumerate(partition.relations):
        if (K >> j) & 1:
            for i in rel.support:
                out[i] ^= 1
    return out


def folded_dependent_coeffs(h: PauliHamiltonian, partition: BlockPartition) -> list[float]:
    """Dependent coefficients with relation signs absorbed."""
    return [rel.sign * h.coeffs[rel.dependent] for rel in partition.relations]


def build_nearly_indep_mps(
    h: PauliHamiltonian,
    p: Polynomial,
    partition: BlockPartition | None = None,
    bond_cap: int = BOND_CAP,
) -> MpsReferenceState:
    _require_commuting(h)
    if partition is None:
        partition = find_block_partition(h)
    k = partition.k
    if k == 0:
        raise InputError("no dependent terms; use the commuting builder")
    l = p.degree
    block = l + 1
    D = (1 << k) * block
    if D > bond_cap:
        raise KTooLarge(f"bond dimension 2^{k}*{block} = {D} exceeds the cap of {bond_cap}")

    chis = [_chi(partition, K) for K in range(1 << k)]
    sites = []
    for i in partition.independent_indices:
        bands = parity_band_matrices(h.coeffs[i], block)
        a = np.zeros((2, D, D))
        for K, chi in enumerate(chis):
            sl = slice(K * block, (K + 1) * block)
            for y in (0, 1):
                a[y, sl, sl] = bands[(y + chi[i]) % 2]
        sites.append(a)

    trailing = np.eye(D)
    for j, c in enumerate(folded_dependent_coeffs(h, partition)):
        bands = parity_band_matrices(c, block)
        factor = np.zeros((D, D))
        for K in range(1 << k):
            sl = slice(K * block, (K + 1) * block)
            factor[sl, sl] = bands[(K >> j) & 1]
        trailing = trailing @ factor

    v_right = np.tile(_factorial_weighted(p), 1 << k)
    indep = partition.independent_indices
    return _finish(
        NEARLY_INDEPENDENT, sites, _unit(block, 1 << k), v_right, trailing,
        [(i,) for i in indep], indep, l, k,
    )


# ------------------------------------------------------------ noncommuting


def build_noncommuting_mps(
    h: PauliHamiltonian,
    p: Polynomial,
    graph: AnticommGraph | None = None,
    component_order: Sequence[int] | None = None,
    component_cap: int = COMPONENT_CAP,
) -> MpsReferenceState:
    """One site per connected component of the anticommutation graph.

    ``component_order`` permutes the sites (default: by smallest member); the
    amplitudes do not depend on it because distinct components commute.
    """
    graph = anticomm_graph(h) if graph is None else graph
    if graph.max_component > component_cap:
        raise ComponentTooLarge(
            f"largest anticommutation component has {graph.max_component} terms (cap {component_cap})"
        )
    comps = list(graph.components)
    if component_order is not None:
        if sorted(component_order) != list(range(len(comps))):
            raise InputError("component_order must be a permutation of the components")
        comps = [comps[t] for t in component_order]
    l = p.degree
    D = l + 1
    sites = []
    for comp in comps:
        sub = graph.subgraph(comp)
        cc = [h.coeffs[v] for v in comp]
        a = np.zeros((1 << len(comp), D, D))
        for sym in range(1 << len(comp)):
            yc = [(sym >> b) & 1 for b in range(len(comp))]
            betas = [beta_direct(sub, d, yc, cc) for d in range(D)]
            for i in range(D):
                for j in range(i, D):
                    a[sym, i, j] = math.comb(j, i) * betas[j - i]
        sites.append(a)
    return _finish(
        NONCOMMUTING, sites, _unit(D), np.array(p.coeffs, dtype=float), None,
        comps, range(h.m), l,
    )


def build_reference_state(
    h: PauliHamiltonian, p: Polynomial, regime: str | None = None, **caps
) -> MpsReferenceState:
    regime = detect_regime(h) if regime is None else regime
    if regime == COMMUTING:
        return build_commuting_mps(h, p)
    if regime == NEARLY_INDEPENDENT:
        return build_nearly_indep_mps(h, p, bond_cap=caps.get("bond_cap", BOND_CAP))
    if regime == NONCOMMUTING:
        return build_noncommuting_mps(h, p, component_cap=caps.get("component_cap", COMPONENT_CAP))
    raise InputError(f"unknown regime {regime!r}")


# --------------------------------------------------------------- amplitudes


def mps_amplitude(mps: MpsReferenceState, y: Sequence[int]) -> float:
    if len(y) != mps.n_sites:
        raise DimensionError(f"expected {mps.n_sites} site symbols, got {len(y)}")
    vec = mps.v_left
    for t, (a, sym) in enumerate(zip(mps.site_matrices, y)):
        if not 0 <= sym < a.shape[0]:
            raise DimensionError(f"symbol {sym} at site {t} outside arity {a.shape[0]}")
        vec = vec @ a[sym]
    return float(vec @ mps.right_vector)


def mps_to_statevector(mps: MpsReferenceState, cap: int = STATEVECTOR_CAP) -> np.ndarray:
    """Amplitudes over site-symbol strings; site 0 is the least significant digit."""
    total = math.prod(mps.site_arities)
    if total > cap:
        raise CapExceeded(f"statevector dimension {total} exceeds the cap of {cap}")
    acc = mps.v_left[None, :]
    for a in mps.site_matrices:
        acc = np.einsum("nd,qde->qne", acc, a).reshape(-1, mps.D)
    return acc @ mps.right_vector


def site_to_register_index(mps: MpsReferenceState) -> np.ndarray:
    """For each site-symbol index, the register index (bit r = ``register_terms[r]``)."""
    position = {term: r for r, term in enumerate(mps.register_terms)}
    idx = np.zeros(1, dtype=np.int64)
    for terms in mps.site_terms:
        local = np.array(
            [sum(((sym >> b) & 1) << position[t] for b, t in enumerate(terms)) for sym in range(1 << len(terms))],
            dtype=np.int64,
        )
        idx = (local[:, None] | idx[None, :]).reshape(-1)
    return idx


def register_amplitudes(mps: MpsReferenceState, cap: int = STATEVECTOR_CAP) -> np.ndarray:
    """Normalized amplitudes on the control register, one qubit per ``register_terms`` entry."""
    psi = mps_to_statevector(mps, cap)
    out = np.zeros(1 << len(mps.register_terms))
    out[site_to_register_index(mps)] = psi
    return out


# ------------------------------------------------------------------ oracles


def _commuting_sum(coeffs: Sequence[float], y: Sequence[int], total: int) -> float:
    acc = 0.0
    for mu in parity_lifts(total, y):
        acc += math.prod(c**k / math.factorial(k) for c, k in zip(coeffs, mu))
    return acc


def _independent_block_sum(
    indep_coeffs, dep_coeffs, y_shifted, K_bits, total
) -> float:
    acc = 0.0
    k = len(dep_coeffs)
    for s_total in range(total + 1):
        rest = s_total - sum(K_bits)
        if rest < 0 or rest % 2:
            continue
        for half in compositions(rest // 2, k):
            s = [kb + 2 * h for kb, h in zip(K_bits, half)]
            dep_w = math.prod(c**v / math.factorial(v) for c, v in zip(dep_coeffs, s))
            acc += dep_w * _commuting_sum(indep_coeffs, y_shifted, total - s_total)
    return acc


def coefficient_oracle(
    h: PauliHamiltonian,
    p: Polynomial,
    y: Sequence[int],
    regime: str | None = None,
    partition: BlockPartition | None = None,
) -> float:
    """Unnormalized reference amplitude by direct summation, no matrix products.

    ``y`` has one bit per control-register term: all ``m`` terms in the
    commuting and noncommuting regimes, the independent terms otherwise.
    """
    regime = detect_regime(h) if regime is None else regime
    y = [int(v) & 1 for v in y]
    if regime == COMMUTING:
        if len(y) != h.m:
            raise DimensionError("y needs one bit per term")
        return sum(
            a * math.factorial(j) * _commuting_sum(h.coeffs, y, j) for j, a in enumerate(p.coeffs)
        )
    if regime == NONCOMMUTING:
        if len(y) != h.m:
            raise DimensionError("y needs one bit per term")
        g = anticomm_graph(h)
        return sum(a * beta_direct(g, s, y, h.coeffs) for s, a in enumerate(p.coeffs))
    if regime == NEARLY_INDEPENDENT:
        partition = find_block_partition(h) if partition is None else partition
        indep = partition.independent_indices
        if len(y) != len(indep):
            raise DimensionError("y needs one bit per independent term")
        indep_coeffs = [h.coeffs[i] for i in indep]
        dep_coeffs = folded_dependent_coeffs(h, partition)
        total = 0.0
        for K in range(1 << partition.k):
            chi = _chi(partition, K)
            shifted = [(yi + chi[i]) % 2 for yi, i in zip(y, indep)]
            K_bits = [(K >> j) & 1 for j in range(partition.k)]
            for t, a in enumerate(p.coeffs):
                total += a * math.factorial(t) * _independent_block_sum(
                    indep_coeffs, dep_coeffs, shifted, K_bits, t
                )
        return total
    raise InputError(f"unknown regime {regime!r}")


def collapse_commuting_weights(
    h: PauliHamiltonian, p: Polynomial, partition: BlockPartition | None = None
) -> np.ndarray:
    """Full ``m``-term commuting expansion rewritten on the independent terms.

    Each dependent term is replaced by the signed product of its support, so
    weight on ``y`` (bits over all terms) moves to the independent word
    ``y_indep xor (supports of the set dependent bits)`` times the relation signs.
    """
    partition = find_block_partition(h) if partition is None else partition
    indep = partition.independent_indices
    pos = {i: r for r, i in enumerate(indep)}
    out = np.zeros(1 << len(indep))
    for yint in range(1 << h.m):
        y = [(yint >> i) & 1 for i in range(h.m)]
        w = coefficient_oracle(h, p, y, regime=COMMUTING)
        target, sgn = 0, 1
        for i in indep:
            target ^= y[i] << pos[i]
        for rel in partition.relations:
            if y[rel.dependent]:
                sgn *= rel.sign
                for i in rel.support:
                    target ^= 1 << pos[i]
        out[target] += sgn * w
    return out
