"""Dense simulation of the decode-based preparation circuit.

The joint state is kept as a tensor ``psi[a, b, c]`` over registers A
(controls, one qubit per register term), B and C (``n`` qubits each).  With
this layout an operator ``M`` on B applied to the Bell pair is just the
matrix ``M / sqrt(2**n)`` in the ``(b, c)`` slice, which keeps every stage a
few array operations.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.linalg import hadamard

from .errors import CapExceeded, InputError, ResidualOnA
from .gf2code import Decoder, GaussianDecoder, SyndromeTableDecoder, build_code
from .pauli import PauliHamiltonian, PauliTerm, pauli_action
from .poly import Polynomial
from .refstate import MpsReferenceState, build_reference_state, predicted_bond_dim, register_amplitudes

QUBIT_CAP = 22
RESIDUAL_TOL = 1e-8
_BRANCH_FLOOR = 1e-30  # squared slice norm below which a syndrome branch counts as empty


def bell_state(n: int, cap: int = QUBIT_CAP) -> np.ndarray:
    """``|Phi_n>`` on BC as the ``(2**n, 2**n)`` amplitude matrix ``I / sqrt(2**n)``."""
    if 2 * n > cap:
        raise CapExceeded(f"{2 * n} qubits exceeds the cap of {cap}")
    return np.eye(1 << n, dtype=complex) / math.sqrt(1 << n)


def initial_state(register: np.ndarray, n: int) -> np.ndarray:
    return register.astype(complex)[:, None, None] * bell_state(n)[None, :, :]


def apply_on_b(psi: np.ndarray, p: PauliTerm) -> np.ndarray:
    perm, ph = pauli_action(p)
    out = np.empty_like(psi)
    out[..., perm, :] = psi * ph[:, None]
    return out


def controlled_pauli_cascade(psi: np.ndarray, terms: Sequence[PauliTerm]) -> np.ndarray:
    """Controlled ``terms[r]`` from A-qubit ``r`` onto B.

    Gates run from the last control to the first, so branch ``y`` of A ends
    with ``P_0**y_0 P_1**y_1 ...`` (index-ordered product) applied to B.
    """
    n_a = psi.shape[0].bit_length() - 1
    if len(terms) != n_a:
        raise InputError(f"{len(terms)} controlled terms for {n_a} control qubits")
    out = psi.copy()
    for r in reversed(range(n_a)):
        view = out.reshape(-1, 2, 1 << r, *psi.shape[1:])
        view[:, 1] = apply_on_b(view[:, 1], terms[r])
    return out


def bell_basis_transform(psi: np.ndarray) -> np.ndarray:
    """CNOT from each B qubit onto its C partner, then Hadamards on B.

    ``(W(alpha, beta) x I)|Phi_n>`` goes to ``i**(-|alpha & beta|) |alpha>_B |beta>_C``,
    so the computational index ``(b, c)`` reads off the packed symplectic
    vector ``b | c << n``.
    """
    dim = psi.shape[-1]
    idx = np.arange(dim)
    cnot = np.empty_like(psi)
    cnot[..., idx[:, None], idx[:, None] ^ idx[None, :]] = psi
    h = hadamard(dim) / math.sqrt(dim)
    return np.einsum("bd,...dc->...bc", h, cnot)


def inverse_bell_basis_transform(psi: np.ndarray) -> np.ndarray:
    dim = psi.shape[-1]
    idx = np.arange(dim)
    h = hadamard(dim) / math.sqrt(dim)
    had = np.einsum("bd,...dc->...bc", h, psi)
    return had[..., idx[:, None], idx[:, None] ^ idx[None, :]]


@dataclass(frozen=True)
class NoiseModel:
    """Conditional distribution of the decoder's guess given a syndrome.

    ``bit-flip-uniform`` puts ``1 - epsilon`` on the correct word and spreads
    ``epsilon`` over its single-bit flips, identically for every syndrome.
    ``random`` draws, per syndrome, up to ``support`` wrong words and Dirichlet
    weights for the ``epsilon`` mass, seeded by ``(seed, syndrome)``.
    """

    epsilon: float
    kind: str = "bit-flip-uniform"
    seed: int = 0
    support: int = 4

    KINDS = ("bit-flip-uniform", "random")

    def __post_init__(self):
        if not 0.0 <= self.epsilon < 1.0:
            raise InputError(f"epsilon must lie in [0, 1), got {self.epsilon}")
        if self.kind not in self.KINDS:
            raise InputError(f"unknown noise kind {self.kind!r}")

    def error_distribution(self, syndrome: int, width: int) -> tuple[np.ndarray, np.ndarray]:
        """``(errors, probs)``: XOR offsets from the decoded word and their probabilities."""
        if self.epsilon == 0.0 or width == 0:
            return np.zeros(1, dtype=np.int64), np.ones(1)
        if self.kind == "bit-flip-uniform":
            errs = np.array([0] + [1 << j for j in range(width)], dtype=np.int64)
            probs = np.array([1.0 - self.epsilon] + [self.epsilon / width] * width)
            return errs, probs
        rng = np.random.default_rng([self.seed, syndrome])
        count = min(self.support, (1 << width) - 1)
        wrong = rng.choice(np.arange(1, 1 << width), size=count, replace=False)
        weights = rng.dirichlet(np.ones(count)) * self.epsilon
        return np.concatenate([[0], wrong]).astype(np.int64), np.concatenate([[1.0 - self.epsilon], weights])


def apply_decoder(psi: np.ndarray, decoder: Decoder, noise: NoiseModel | None = None) -> np.ndarray:
    """XOR the decoded word (plus any sampled error) into A, branch by syndrome."""
    n_a = psi.shape[0].bit_length() - 1
    n = psi.shape[1].bit_length() - 1
    a_idx = np.arange(psi.shape[0])
    out = np.zeros_like(psi)
    weight = np.einsum("abc,abc->bc", psi, psi.conj()).real
    for b, c in zip(*np.nonzero(weight > _BRANCH_FLOOR)):
        syndrome = int(b) | (int(c) << n)
        guess = decoder.decode_int(syndrome)
        branch = psi[:, b, c]
        if noise is None:
            out[a_idx ^ guess, b, c] = branch
            continue
        errs, probs = noise.error_distribution(syndrome, n_a)
        for e, pr in zip(errs, probs):
            out[a_idx ^ guess ^ int(e), b, c] += math.sqrt(pr) * branch
    return out


def partial_trace(state: np.ndarray, dims: Sequence[int], keep: Sequence[int]) -> np.ndarray:
    """Reduced density matrix on subsystems ``keep`` of a pure state or density matrix."""
    dims = [int(d) for d in dims]
    keep = sorted(keep)
    total = math.prod(dims)
    kept = math.prod(dims[k] for k in keep)
    nsub = len(dims)
    letters = "abcdefghijklmnopqrstuvwxyz"
    if state.ndim == 1 or (state.ndim == len(dims) and state.shape == tuple(dims)):
        t = state.reshape(dims)
        row = "".join(letters[i] for i in range(nsub))
        col = "".join(letters[i] if i not in keep else letters[i].upper() for i in range(nsub))
        out_sub = "".join(letters[i] for i in keep) + "".join(letters[i].upper() for i in keep)
        rho = np.einsum(f"{row},{col}->{out_sub}", t, t.conj())
    elif state.shape == (total, total):
        t = state.reshape(dims + dims)
        row = "".join(letters[i] for i in range(nsub))
        col = "".join(letters[i] if i not in keep else letters[i].upper() for i in range(nsub))
        out_sub = "".join(letters[i] for i in keep) + "".join(letters[i].upper() for i in keep)
        rho = np.einsum(f"{row}{col}->{out_sub}", t)
    else:
        raise InputError(f"state of shape {state.shape} does not match dims {dims}")
    rho = rho.reshape(kept, kept)
    return (rho + rho.conj().T) / 2


def default_decoder(h: PauliHamiltonian, register_terms: Sequence[int], kind: str, l: int) -> Decoder:
    code = build_code(h.subset(register_terms))
    if kind == "auto":
        kind = "gaussian" if code.k == 0 else "table"
    if kind == "gaussian":
        return GaussianDecoder(code)
    if kind == "table":
        return SyndromeTableDecoder(code, l)
    raise InputError(f"unknown decoder kind {kind!r}")


@dataclass
class PipelineResult:
    rho: np.ndarray
    residual: float
    stage_norms: dict[str, float]
    regime: str
    mps: MpsReferenceState
    decoder_kind: str
    register_qubits: int
    total_qubits: int
    timings: dict[str, float] = field(default_factory=dict)

    @property
    def predicted_bond_dim(self) -> int:
        return predicted_bond_dim(self.regime, self.mps.degree, self.mps.k)

    @property
    def actual_bond_dim(self) -> int:
        return self.mps.D


def _norm(psi: np.ndarray) -> float:
    return float(np.sqrt(np.vdot(psi, psi).real))


def run_pipeline(
    h: PauliHamiltonian,
    p: Polynomial,
    decoder: Decoder | str = "auto",
    noise: NoiseModel | None = None,
    regime: str | None = None,
    max_qubits: int = QUBIT_CAP,
    mps: MpsReferenceState | None = None,
) -> PipelineResult:
    """Reference state, controlled cascade, Bell transform, decode, undo, trace out A and C.

    With a string ``decoder`` one is built over the control-register terms.
    A supplied ``Decoder`` must be built over those same terms in register order.
    """
    clock = time.perf_counter
    timings: dict[str, float] = {}
    t0 = clock()
    mps = build_reference_state(h, p, regime) if mps is None else mps
    n_a = len(mps.register_terms)
    total_q = n_a + 2 * h.n
    if total_q > max_qubits:
        raise CapExceeded(f"circuit needs {total_q} qubits (cap {max_qubits})")
    if isinstance(decoder, str):
        decoder = default_decoder(h, mps.register_terms, decoder, mps.degree)
    timings["reference"] = clock() - t0

    norms: dict[str, float] = {}
    t0 = clock()
    psi = initial_state(register_amplitudes(mps), h.n)
    norms["initial"] = _norm(psi)
    psi = controlled_pauli_cascade(psi, [h.terms[i] for i in mps.register_terms])
    norms["cascade"] = _norm(psi)
    psi = bell_basis_transform(psi)
    norms["bell"] = _norm(psi)
    timings["entangle"] = clock() - t0

    t0 = clock()
    psi = apply_decoder(psi, decoder, noise)
    norms["decode"] = _norm(psi)
    residual = max(0.0, 1.0 - float(np.vdot(psi[0], psi[0]).real) / norms["decode"] ** 2)
    if noise is None and residual > RESIDUAL_TOL:
        raise ResidualOnA(f"control register keeps weight {residual:.3e} after perfect decoding")
    timings["decode"] = clock() - t0

    t0 = clock()
    psi = inverse_bell_basis_transform(psi)
    norms["unbell"] = _norm(psi)
    rho = np.einsum("abc,adc->bd", psi, psi.conj())
    rho = (rho + rho.conj().T) / 2
    rho /= np.trace(rho).real
    timings["trace"] = clock() - t0

    return PipelineResult(
        rho=rho,
        residual=residual,
        stage_norms=norms,
        regime=mps.regime,
        mps=mps,
        decoder_kind=decoder.kind,
        register_qubits=n_a,
        total_qubits=total_q,
        timings=timings,
    )
