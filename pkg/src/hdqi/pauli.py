"""Pauli operators in symplectic form with exact phase tracking.

A term is ``i**phase * W(alpha, beta)`` where, per qubit,
``W(a, b) = i**(-a*b) Z**a X**b``; so ``W(1, 1) = Y`` and every canonical
term is Hermitian.  Bit vectors are stored as Python ints: bit ``q`` of
``z`` is ``alpha_q`` and bit ``q`` of ``x`` is ``beta_q``.

Qubit ``q`` is character ``q`` of a Pauli label and bit ``q`` of a dense
basis index (little-endian), so ``"XIZ"`` is X on qubit 0 and Z on qubit 2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    CapExceeded,
    DimensionError,
    DuplicateTerm,
    InputError,
    NonHermitianTerm,
    ParseError,
)

DENSE_QUBIT_CAP = 12

_PHASE_VALUES = (1, 1j, -1, -1j)
_LABEL_BITS = {"I": (0, 0), "X": (0, 1), "Z": (1, 0), "Y": (1, 1)}
_BITS_LABEL = {bits: ch for ch, bits in _LABEL_BITS.items()}


def _popcount(v: int) -> int:
    return bin(v).count("1")


@dataclass(frozen=True)
class PauliTerm:
    n: int
    z: int
    x: int
    phase: int = 0  # exponent of i, mod 4

    def __post_init__(self):
        if self.n < 0:
            raise DimensionError("qubit count must be nonnegative")
        limit = 1 << self.n
        if not (0 <= self.z < limit and 0 <= self.x < limit):
            raise DimensionError(f"bit vectors do not fit in {self.n} qubits")
        object.__setattr__(self, "phase", self.phase % 4)

    @classmethod
    def identity(cls, n: int) -> "PauliTerm":
        return cls(n, 0, 0, 0)

    @classmethod
    def from_bits(cls, alpha: Sequence[int], beta: Sequence[int], phase: int = 0) -> "PauliTerm":
        if len(alpha) != len(beta):
            raise DimensionError("alpha and beta differ in length")
        z = sum(int(b) << q for q, b in enumerate(alpha))
        x = sum(int(b) << q for q, b in enumerate(beta))
        return cls(len(alpha), z, x, phase)

    @property
    def alpha(self) -> tuple[int, ...]:
        return tuple((self.z >> q) & 1 for q in range(self.n))

    @property
    def beta(self) -> tuple[int, ...]:
        return tuple((self.x >> q) & 1 for q in range(self.n))

    @property
    def phase_value(self) -> complex:
        return _PHASE_VALUES[self.phase]

    @property
    def symp_int(self) -> int:
        """Symplectic vector packed as ``alpha | beta << n``."""
        return self.z | (self.x << self.n)

    @property
    def is_hermitian(self) -> bool:
        return self.phase % 2 == 0

    @property
    def weight(self) -> int:
        return _popcount(self.z | self.x)

    def label(self) -> str:
        return "".join(_BITS_LABEL[((self.z >> q) & 1, (self.x >> q) & 1)] for q in range(self.n))

    def __str__(self) -> str:
        prefix = {0: "", 1: "i", 2: "-", 3: "-i"}[self.phase]
        return prefix + self.label()

    def __mul__(self, other: "PauliTerm") -> "PauliTerm":
        return mul(self, other)

    def __neg__(self) -> "PauliTerm":
        return PauliTerm(self.n, self.z, self.x, self.phase + 2)


def parse_pauli(s: str) -> PauliTerm:
    if not s:
        raise ParseError("empty Pauli string")
    z = x = 0
    for q, ch in enumerate(s):
        try:
            a, b = _LABEL_BITS[ch]
        except KeyError:
            raise ParseError(f"invalid Pauli character {ch!r}", position=q) from None
        z |= a << q
        x |= b << q
    return PauliTerm(len(s), z, x, 0)


def symp(p: PauliTerm) -> np.ndarray:
    """Symplectic representation ``(alpha | beta)`` as a 0/1 array of length 2n."""
    return np.array(p.alpha + p.beta, dtype=np.uint8)


def _check_same_n(p: PauliTerm, q: PauliTerm) -> None:
    if p.n != q.n:
        raise DimensionError(f"Pauli terms act on {p.n} and {q.n} qubits")


def mul(p: PauliTerm, q: PauliTerm) -> PauliTerm:
    _check_same_n(p, q)
    z, x = p.z ^ q.z, p.x ^ q.x
    # Z^a X^b Z^a' X^b' = (-1)^{b.a'} Z^{a+a'} X^{b+b'}, and Z^a X^b = i^{a.b} W(a, b)
    e = (
        p.phase
        + q.phase
        - _popcount(p.z & p.x)
        - _popcount(q.z & q.x)
        + 2 * _popcount(p.x & q.z)
        + _popcount(z & x)
    )
    return PauliTerm(p.n, z, x, e)


def symplectic_product(p: PauliTerm, q: PauliTerm) -> int:
    _check_same_n(p, q)
    return (_popcount(p.z & q.x) + _popcount(p.x & q.z)) % 2


def commutes(p: PauliTerm, q: PauliTerm) -> bool:
    return symplectic_product(p, q) == 0


def pauli_action(p: PauliTerm) -> tuple[np.ndarray, np.ndarray]:
    """Return ``(perm, ph)`` with ``P|k> = ph[k] |perm[k]>`` on basis index ``k``."""
    k = np.arange(1 << p.n, dtype=np.int64)
    target = k ^ p.x
    parity = np.zeros(k.shape, dtype=np.int64)
    masked = target & p.z
    while np.any(masked):
        parity ^= masked & 1
        masked >>= 1
    exponent = (p.phase - _popcount(p.z & p.x) + 2 * parity) % 4
    ph = np.array(_PHASE_VALUES, dtype=complex)[exponent]
    return target, ph


def dense_pauli(p: PauliTerm, cap: int = DENSE_QUBIT_CAP) -> np.ndarray:
    if p.n > cap:
        raise CapExceeded(f"{p.n} qubits exceeds the dense cap of {cap}")
    perm, ph = pauli_action(p)
    mat = np.zeros((1 << p.n, 1 << p.n), dtype=complex)
    mat[perm, np.arange(1 << p.n)] = ph
    return mat


def product(terms: Iterable[PauliTerm], n: int) -> PauliTerm:
    """Ordered product ``terms[0] * terms[1] * ...``; the identity when empty."""
    out = PauliTerm.identity(n)
    for t in terms:
        out = mul(out, t)
    return out


@dataclass(frozen=True)
class PauliHamiltonian:
    """``H = sum_i coeffs[i] * terms[i]`` with canonical (phase +1) distinct terms.

    Terms given with phase -1 are folded into their coefficient; phases of
    +-i are rejected since they would make H non-Hermitian.
    """

    n: int
    coeffs: tuple[float, ...]
    terms: tuple[PauliTerm, ...]

    def __post_init__(self):
        if len(self.coeffs) != len(self.terms):
            raise InputError("coefficient and term counts differ")
        coeffs, terms, seen = [], [], set()
        for i, (c, t) in enumerate(zip(self.coeffs, self.terms)):
            if t.n != self.n:
                raise DimensionError(f"term {i} acts on {t.n} qubits, expected {self.n}")
            if not t.is_hermitian:
                raise NonHermitianTerm(f"term {i} ({t}) has phase +-i")
            c = float(c)
            if not math.isfinite(c):
                raise InputError(f"coefficient {i} is not finite")
            if t.phase == 2:
                c = -c
            canon = PauliTerm(t.n, t.z, t.x, 0)
            if canon.symp_int in seen:
                raise DuplicateTerm(f"term {i} ({canon.label()}) repeats an earlier term")
            seen.add(canon.symp_int)
            coeffs.append(c)
            terms.append(canon)
        object.__setattr__(self, "coeffs", tuple(coeffs))
        object.__setattr__(self, "terms", tuple(terms))

    @classmethod
    def from_labels(cls, pairs: Iterable[tuple[float, str]]) -> "PauliHamiltonian":
        pairs = list(pairs)
        if not pairs:
            raise InputError("a Hamiltonian needs at least one term")
        terms = [parse_pauli(s) for _, s in pairs]
        n = terms[0].n
        return cls(n, tuple(c for c, _ in pairs), tuple(terms))

    @property
    def m(self) -> int:
        return len(self.terms)

    @property
    def one_norm(self) -> float:
        """``sum |c_i|``, an upper bound on the operator norm."""
        return float(sum(abs(c) for c in self.coeffs))

    def is_commuting(self) -> bool:
        return all(
            commutes(self.terms[i], self.terms[j])
            for i in range(self.m)
            for j in range(i + 1, self.m)
        )

    def subset(self, indices: Sequence[int]) -> "PauliHamiltonian":
        return PauliHamiltonian(
            self.n, tuple(self.coeffs[i] for i in indices), tuple(self.terms[i] for i in indices)
        )

    def labels(self) -> list[str]:
        return [t.label() for t in self.terms]


def parse_hamiltonian(text: str) -> PauliHamiltonian:
    """Read the line format ``<coefficient> <Pauli string>``; ``#`` starts a comment."""
    pairs: list[tuple[float, str]] = []
    n = None
    seen: dict[str, int] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        if len(fields) != 2:
            raise ParseError("expected '<coefficient> <Pauli string>'", line=lineno)
        try:
            c = float(fields[0])
        except ValueError:
            raise ParseError(f"bad coefficient {fields[0]!r}", line=lineno) from None
        label = fields[1]
        for q, ch in enumerate(label):
            if ch not in _LABEL_BITS:
                raise ParseError(f"invalid Pauli character {ch!r}", position=q, line=lineno)
        if n is None:
            n = len(label)
        elif len(label) != n:
            raise ParseError(f"Pauli string has length {len(label)}, expected {n}", line=lineno)
        if label in seen:
            raise DuplicateTerm(f"line {lineno} repeats {label} from line {seen[label]}")
        seen[label] = lineno
        pairs.append((c, label))
    if not pairs:
        raise InputError("Hamiltonian file contains no terms")
    return PauliHamiltonian.from_labels(pairs)


def read_hamiltonian(path: str | Path) -> PauliHamiltonian:
    return parse_hamiltonian(Path(path).read_text(encoding="utf-8"))


def format_hamiltonian(h: PauliHamiltonian, header: str | None = None) -> str:
    lines = [f"# {row}" for row in header.splitlines()] if header else []
    lines += [f"{c!r} {t.label()}" for c, t in zip(h.coeffs, h.terms)]
    return "\n".join(lines) + "\n"
