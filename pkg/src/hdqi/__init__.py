"""Reference-state construction and dense simulation of decode-based preparation of ``P(H)^2``-weighted states."""

from .errors import HdqiError
from .pauli import PauliHamiltonian, PauliTerm, parse_hamiltonian, parse_pauli, read_hamiltonian
from .poly import Polynomial
from .refstate import MpsReferenceState, build_reference_state, detect_regime
from .simulator import NoiseModel, run_pipeline

__version__ = "0.1.0"

__all__ = [
    "HdqiError",
    "MpsReferenceState",
    "NoiseModel",
    "PauliHamiltonian",
    "PauliTerm",
    "Polynomial",
    "build_reference_state",
    "detect_regime",
    "parse_hamiltonian",
    "parse_pauli",
    "read_hamiltonian",
    "run_pipeline",
]
