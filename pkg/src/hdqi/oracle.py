"""Dense-matrix ground truth and state metrics."""

from __future__ import annotations

from typing import Sequence

import numpy as np
from scipy import linalg

from .errors import CapExceeded, DegeneratePolynomial, DimensionError, InputError
from .pauli import DENSE_QUBIT_CAP, PauliHamiltonian, PauliTerm, dense_pauli, product
from .poly import Polynomial

HERMITIAN_TOL = 1e-12


def dense_hamiltonian(h: PauliHamiltonian, cap: int = DENSE_QUBIT_CAP) -> np.ndarray:
    if h.n > cap:
        raise CapExceeded(f"{h.n} qubits exceeds the dense cap of {cap}")
    out = np.zeros((1 << h.n, 1 << h.n), dtype=complex)
    for c, t in zip(h.coeffs, h.terms):
        out += c * dense_pauli(t, cap)
    return out


def ordered_word(h: PauliHamiltonian, y: int | Sequence[int]) -> PauliTerm:
    """``P_1**y_1 ... P_m**y_m`` with its exact phase."""
    if not isinstance(y, (int, np.integer)):
        y = sum(int(b) << i for i, b in enumerate(y))
    return product((t for i, t in enumerate(h.terms) if (int(y) >> i) & 1), h.n)


def dense_word(h: PauliHamiltonian, y: int | Sequence[int]) -> np.ndarray:
    t = ordered_word(h, y)
    return t.phase_value * dense_pauli(PauliTerm(t.n, t.z, t.x, 0))


def _eigh(h: PauliHamiltonian) -> tuple[np.ndarray, np.ndarray]:
    return linalg.eigh(dense_hamiltonian(h))


def dense_polynomial(h: PauliHamiltonian, p: Polynomial) -> np.ndarray:
    """``P(H)`` by functional calculus on the eigendecomposition."""
    evals, vecs = _eigh(h)
    return (vecs * p(evals)) @ vecs.conj().T


def dense_polynomial_powers(h: PauliHamiltonian, p: Polynomial) -> np.ndarray:
    """``P(H)`` by Horner's rule on matrices; independent of the eigensolver."""
    mat = dense_hamiltonian(h)
    acc = np.zeros_like(mat)
    eye = np.eye(mat.shape[0])
    for a in reversed(p.coeffs):
        acc = acc @ mat + a * eye
    return acc


def _density_from_weights(vecs: np.ndarray, weights: np.ndarray) -> np.ndarray:
    rho = (vecs * weights) @ vecs.conj().T
    return (rho + rho.conj().T) / 2


def rho_poly_oracle(h: PauliHamiltonian, p: Polynomial) -> np.ndarray:
    evals, vecs = _eigh(h)
    w = p(evals) ** 2
    total = float(np.sum(w))
    if total <= 1e-14:
        raise DegeneratePolynomial(f"Tr P(H)^2 = {total:.3e}; the polynomial annihilates the spectrum")
    return _density_from_weights(vecs, w / total)


def gibbs_oracle(h: PauliHamiltonian, beta: float) -> np.ndarray:
    evals, vecs = _eigh(h)
    w = np.exp(-beta * (evals - evals.min()))
    return _density_from_weights(vecs, w / w.sum())


def _check_pair(rho: np.ndarray, sigma: np.ndarray) -> None:
    if rho.shape != sigma.shape or rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise DimensionError(f"shapes {rho.shape} and {sigma.shape} are not matching square matrices")


def trace_norm(a: np.ndarray) -> float:
    return float(np.sum(linalg.svdvals(a)))


def trace_norm_distance(rho: np.ndarray, sigma: np.ndarray) -> float:
    """Un-halved ``||rho - sigma||_1``; ranges over [0, 2] for density matrices."""
    _check_pair(rho, sigma)
    return trace_norm(rho - sigma)


def trace_distance(rho: np.ndarray, sigma: np.ndarray) -> float:
    """Halved trace distance in [0, 1]."""
    return 0.5 * trace_norm_distance(rho, sigma)


def _psd_sqrt(a: np.ndarray) -> np.ndarray:
    evals, vecs = linalg.eigh((a + a.conj().T) / 2)
    return (vecs * np.sqrt(np.clip(evals, 0.0, None))) @ vecs.conj().T


def fidelity(rho: np.ndarray, sigma: np.ndarray) -> float:
    """``Tr sqrt(sqrt(rho) sigma sqrt(rho))`` as the nuclear norm of ``sqrt(rho) sqrt(sigma)``."""
    _check_pair(rho, sigma)
    return float(min(np.sum(linalg.svdvals(_psd_sqrt(rho) @ _psd_sqrt(sigma))), 1.0))


def purity(rho: np.ndarray) -> float:
    return float(np.real(np.trace(rho @ rho)))


def energy(rho: np.ndarray, h: PauliHamiltonian) -> float:
    return float(np.real(np.trace(rho @ dense_hamiltonian(h))))


def von_neumann_entropy(rho: np.ndarray) -> float:
    """In nats; eigenvalues below 1e-15 contribute zero."""
    evals = linalg.eigvalsh((rho + rho.conj().T) / 2)
    evals = evals[evals > 1e-15]
    return float(-np.sum(evals * np.log(evals)))


def check_density_matrix(rho: np.ndarray, tol: float = 1e-10) -> None:
    if np.max(np.abs(rho - rho.conj().T)) > tol:
        raise InputError("matrix is not Hermitian")
    if abs(np.trace(rho) - 1) > tol:
        raise InputError(f"trace is {np.trace(rho)}, not 1")
    if linalg.eigvalsh((rho + rho.conj().T) / 2).min() < -1e-9:
        raise InputError("matrix has a negative eigenvalue")


def state_metrics(rho: np.ndarray, h: PauliHamiltonian) -> dict:
    return {
        "trace": float(np.real(np.trace(rho))),
        "purity": purity(rho),
        "energy": energy(rho, h),
        "entropy": von_neumann_entropy(rho),
    }
