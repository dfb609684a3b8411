"""Reference dense constructions built from Kronecker products, independent of the package's index tricks."""

from __future__ import annotations

from functools import reduce
from itertools import product as cartesian

import numpy as np

I2 = np.eye(2, dtype=complex)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z = np.array([[1, 0], [0, -1]], dtype=complex)
SINGLE = {"I": I2, "X": X, "Y": Y, "Z": Z}


def kron_label(label: str) -> np.ndarray:
    # qubit 0 is the least significant index bit, so it is the rightmost factor
    return reduce(np.kron, [SINGLE[ch] for ch in reversed(label)], np.eye(1, dtype=complex))


def all_labels(n: int):
    return ["".join(t) for t in cartesian("IXYZ", repeat=n)]


def dense_h(coeffs, labels) -> np.ndarray:
    return sum(c * kron_label(s) for c, s in zip(coeffs, labels))


def ordered_word_matrix(labels, y: int) -> np.ndarray:
    n = len(labels[0])
    out = np.eye(1 << n, dtype=complex)
    for i, s in enumerate(labels):
        if (y >> i) & 1:
            out = out @ kron_label(s)
    return out


def matrix_power_poly(mat: np.ndarray, coeffs) -> np.ndarray:
    out = np.zeros_like(mat)
    power = np.eye(mat.shape[0], dtype=complex)
    for a in coeffs:
        out = out + a * power
        power = power @ mat
    return out
