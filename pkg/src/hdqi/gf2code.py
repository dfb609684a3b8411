"""GF(2) linear algebra over the symplectic code of a Hamiltonian.

Column ``i`` of ``B^T`` is ``symp(P_i)`` packed into an int (``alpha`` in
the low ``n`` bits, ``beta`` in the high ``n`` bits); row reduction XORs
whole words.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import (
    AmbiguousSyndrome,
    CapExceeded,
    InputError,
    NoncommutingTerms,
    UnknownSyndrome,
)
from .pauli import PauliHamiltonian, commutes, product

TABLE_CAP = 1 << 20


def _bits_to_int(bits: Sequence[int]) -> int:
    return sum(int(b) << i for i, b in enumerate(bits))


def _int_to_bits(v: int, width: int) -> np.ndarray:
    return np.array([(v >> i) & 1 for i in range(width)], dtype=np.uint8)


class _Basis:
    """Incremental row-echelon basis; each vector remembers which columns built it."""

    def __init__(self):
        self._rows: dict[int, tuple[int, int]] = {}  # pivot -> (vector, column combo)

    def reduce(self, v: int) -> tuple[int, int]:
        combo = 0
        for pivot in sorted(self._rows, reverse=True):
            if (v >> pivot) & 1:
                bv, bc = self._rows[pivot]
                v ^= bv
                combo ^= bc
        return v, combo

    def insert(self, v: int, combo: int) -> None:
        self._rows[v.bit_length() - 1] = (v, combo)

    def __len__(self) -> int:
        return len(self._rows)


def gf2_rank(vectors: Sequence[int]) -> int:
    basis = _Basis()
    for v in vectors:
        r, _ = basis.reduce(v)
        if r:
            basis.insert(r, 0)
    return len(basis)


@dataclass(frozen=True)
class SymplecticCode:
    n_rows: int
    columns: tuple[int, ...]
    independent: tuple[int, ...] = field(init=False)
    # for each column, the independent columns summing to it (bitmask over column indices)
    expansions: tuple[int, ...] = field(init=False)

    def __post_init__(self):
        basis = _Basis()
        independent, expansions = [], []
        for j, col in enumerate(self.columns):
            if col >> self.n_rows:
                raise InputError(f"column {j} does not fit in {self.n_rows} rows")
            r, combo = basis.reduce(col)
            if r:
                basis.insert(r, combo ^ (1 << j))
                independent.append(j)
                expansions.append(1 << j)
            else:
                expansions.append(combo)
        object.__setattr__(self, "independent", tuple(independent))
        object.__setattr__(self, "expansions", tuple(expansions))

    @classmethod
    def from_matrix(cls, b_transpose) -> "SymplecticCode":
        mat = np.asarray(b_transpose, dtype=np.uint8) % 2
        if mat.ndim != 2:
            raise InputError("parity-check matrix must be 2-D")
        return cls(mat.shape[0], tuple(_bits_to_int(mat[:, j]) for j in range(mat.shape[1])))

    @property
    def m(self) -> int:
        return len(self.columns)

    @property
    def n(self) -> int:
        return self.n_rows // 2

    @property
    def rank(self) -> int:
        return len(self.independent)

    @property
    def k(self) -> int:
        return self.m - self.rank

    @property
    def b_transpose(self) -> np.ndarray:
        return np.array([_int_to_bits(c, self.n_rows) for c in self.columns], dtype=np.uint8).T.reshape(
            self.n_rows, self.m
        )

    def syndrome(self, y: int | Sequence[int]) -> int:
        if not isinstance(y, int):
            y = _bits_to_int(y)
        s = 0
        for j, col in enumerate(self.columns):
            if (y >> j) & 1:
                s ^= col
        return s

    def subcode(self, indices: Sequence[int]) -> "SymplecticCode":
        return SymplecticCode(self.n_rows, tuple(self.columns[i] for i in indices))


def build_code(h: PauliHamiltonian) -> SymplecticCode:
    return SymplecticCode(2 * h.n, tuple(t.symp_int for t in h.terms))


class Decoder:
    kind = "abstract"

    def __init__(self, code: SymplecticCode):
        self.code = code

    def decode_int(self, syndrome: int) -> int:
        raise NotImplementedError

    def decode(self, syndrome: int | Sequence[int]) -> np.ndarray:
        if not isinstance(syndrome, (int, np.integer)):
            syndrome = _bits_to_int(syndrome)
        return _int_to_bits(self.decode_int(int(syndrome)), self.code.m)


class GaussianDecoder(Decoder):
    """Exact inversion of ``B^T`` for a code with trivial kernel (k = 0)."""

    kind = "gaussian"

    def __init__(self, code: SymplecticCode):
        if code.k:
            raise InputError(f"Gaussian decoding needs k = 0, code has k = {code.k}")
        super().__init__(code)
        self._basis = _Basis()
        for j, col in enumerate(code.columns):
            r, combo = self._basis.reduce(col)
            self._basis.insert(r, combo ^ (1 << j))

    def decode_int(self, syndrome: int) -> int:
        r, combo = self._basis.reduce(syndrome)
        if r:
            raise UnknownSyndrome(f"syndrome {syndrome:#x} is outside the column span")
        return combo


class SyndromeTableDecoder(Decoder):
    """Lookup table over every ``y`` with ``|y| <= weight``; collisions fail at build time."""

    kind = "table"

    def __init__(self, code: SymplecticCode, weight: int, cap: int = TABLE_CAP):
        if weight < 0:
            raise InputError("decoding weight must be nonnegative")
        weight = min(weight, code.m)
        size = sum(math.comb(code.m, w) for w in range(weight + 1))
        if size > cap:
            raise CapExceeded(f"syndrome table would hold {size} entries (cap {cap})")
        super().__init__(code)
        self.weight = weight
        table: dict[int, int] = {}
        for w in range(weight + 1):
            for support in itertools.combinations(range(code.m), w):
                y = s = 0
                for j in support:
                    y |= 1 << j
                    s ^= code.columns[j]
                if s in table:
                    raise AmbiguousSyndrome(
                        f"words {table[s]:#x} and {y:#x} (weight <= {weight}) share syndrome {s:#x}"
                    )
                table[s] = y
        self._table = table

    def __len__(self) -> int:
        return len(self._table)

    def decode_int(self, syndrome: int) -> int:
        try:
            return self._table[syndrome]
        except KeyError:
            raise UnknownSyndrome(
                f"syndrome {syndrome:#x} has no preimage of weight <= {self.weight}"
            ) from None


def build_syndrome_table(code: SymplecticCode, l: int, cap: int = TABLE_CAP) -> SyndromeTableDecoder:
    return SyndromeTableDecoder(code, l, cap)


def decode(d: Decoder, syndrome: int | Sequence[int]) -> np.ndarray:
    return d.decode(syndrome)


@dataclass(frozen=True)
class Relation:
    dependent: int
    support: tuple[int, ...]  # U_j: independent term indices
    blocks: tuple[int, ...]  # T_j: indices into BlockPartition.blocks
    sign: int  # P_dependent = sign * prod_{i in U_j} P_i


@dataclass(frozen=True)
class BlockPartition:
    independent_indices: tuple[int, ...]
    blocks: tuple[tuple[int, ...], ...]
    relations: tuple[Relation, ...]

    @property
    def k(self) -> int:
        return len(self.relations)

    @property
    def r(self) -> int:
        return len(self.blocks)

    @property
    def dependent_indices(self) -> tuple[int, ...]:
        return tuple(rel.dependent for rel in self.relations)

    def to_dict(self) -> dict:
        return {
            "independent": list(self.independent_indices),
            "blocks": [list(b) for b in self.blocks],
            "relations": [
                {"dependent": r.dependent, "support": list(r.support), "blocks": list(r.blocks), "sign": r.sign}
                for r in self.relations
            ],
        }


def find_block_partition(h: PauliHamiltonian, code: SymplecticCode | None = None) -> BlockPartition:
    """Group the independent terms into the atoms of the dependency supports.

    Two independent terms share a block exactly when they appear in the same
    subset of supports ``U_j``, so every ``U_j`` is a union of blocks and
    there are at most ``2**k`` blocks.
    """
    code = build_code(h) if code is None else code
    for i in range(h.m):
        for j in range(i + 1, h.m):
            if not commutes(h.terms[i], h.terms[j]):
                raise NoncommutingTerms(f"terms {i} and {j} anticommute")
    if code.k == 0:
        raise InputError("block partition needs k >= 1; the code has independent columns")

    independent = code.independent
    dependent = [j for j in range(code.m) if j not in set(independent)]
    supports = [tuple(i for i in independent if (code.expansions[j] >> i) & 1) for j in dependent]

    groups: dict[tuple[bool, ...], list[int]] = {}
    for i in independent:
        key = tuple(i in sup for sup in supports)
        groups.setdefault(key, []).append(i)
    blocks = sorted((tuple(g) for g in groups.values()), key=lambda b: b[0])

    relations = []
    for j, sup in zip(dependent, supports):
        prod = product((h.terms[i] for i in sup), h.n)
        assert prod.symp_int == h.terms[j].symp_int
        # prod = i^phase * P_j with phase in {0, 2} for commuting Hermitian factors
        sign = 1 if prod.phase == 0 else -1
        member = set(sup)
        t_j = tuple(t for t, b in enumerate(blocks) if b[0] in member)
        relations.append(Relation(j, sup, t_j, sign))
    return BlockPartition(tuple(independent), tuple(blocks), tuple(relations))


def code_report(code: SymplecticCode, partition: BlockPartition | None = None) -> dict:
    out = {"m": code.m, "n": code.n, "rank": code.rank, "k": code.k, "blocks": [], "relations": []}
    if partition is not None:
        d = partition.to_dict()
        out["blocks"], out["relations"] = d["blocks"], d["relations"]
    return out
