import itertools
import math

import numpy as np
import pytest

from _dense import all_labels, kron_label, ordered_word_matrix
from hdqi.errors import AmbiguousSyndrome, InputError, ResidualOnA
from hdqi.gf2code import GaussianDecoder, SymplecticCode, build_code
from hdqi.hamiltonians import random_commuting, random_nearly_independent, random_noncommuting
from hdqi.oracle import rho_poly_oracle, trace_norm_distance
from hdqi.pauli import PauliHamiltonian, parse_pauli
from hdqi.poly import Polynomial
from hdqi.refstate import build_commuting_mps, register_amplitudes
from hdqi.simulator import (
    NoiseModel,
    apply_decoder,
    bell_basis_transform,
    bell_state,
    controlled_pauli_cascade,
    initial_state,
    inverse_bell_basis_transform,
    partial_trace,
    run_pipeline,
)


def test_bell_state():
    one = bell_state(1)
    assert np.allclose(one, np.eye(2) / math.sqrt(2))
    two = bell_state(2)
    assert np.allclose(np.diag(two), 0.5) and np.linalg.norm(two) == pytest.approx(1.0, abs=1e-15)


def basis_register(y, width):
    v = np.zeros(1 << width)
    v[y] = 1.0
    return v


def test_cascade_identity_on_zero_branch_and_cnot():
    x = parse_pauli("X")
    psi = initial_state(basis_register(0, 1), 1)
    assert np.array_equal(controlled_pauli_cascade(psi, [x]), psi)
    for a, b in itertools.product(range(2), repeat=2):
        psi = np.zeros((2, 2, 1), dtype=complex)
        psi[a, b, 0] = 1
        out = controlled_pauli_cascade(psi, [x])
        assert out[a, b ^ a, 0] == 1


@pytest.mark.parametrize("commuting", [True, False])
def test_cascade_applies_index_ordered_products(commuting):
    rng = np.random.default_rng(1 if commuting else 2)
    for _ in range(8):
        n = int(rng.integers(1, 4))
        if commuting:
            h = random_commuting(n, int(rng.integers(1, min(4, 2**n - 1) + 1)), rng)
        else:
            h = random_noncommuting(n, int(rng.integers(2, 5)), rng)
        labels = h.labels()
        for y in range(1 << h.m):
            psi = controlled_pauli_cascade(initial_state(basis_register(y, h.m), n), h.terms)
            block = psi[y] * math.sqrt(1 << n)
            assert np.allclose(block, ordered_word_matrix(labels, y), atol=1e-14)


def test_bell_transform_reads_symplectic_vector():
    psi = initial_state(np.ones(1), 1)
    assert np.allclose(np.abs(bell_basis_transform(psi)[0]), [[1, 0], [0, 0]])
    for n in (1, 2):
        for label in all_labels(n):
            p = parse_pauli(label)
            state = (kron_label(label) / math.sqrt(1 << n))[None]
            out = bell_basis_transform(state)[0]
            b, c = p.z, p.x
            assert abs(abs(out[b, c]) - 1) < 1e-12, label
            assert np.sum(np.abs(out) ** 2) == pytest.approx(1.0)


def test_bell_transform_round_trip():
    rng = np.random.default_rng(3)
    psi = rng.normal(size=(4, 8, 8)) + 1j * rng.normal(size=(4, 8, 8))
    assert np.allclose(inverse_bell_basis_transform(bell_basis_transform(psi)), psi, atol=1e-12)
    assert np.allclose(bell_basis_transform(inverse_bell_basis_transform(psi)), psi, atol=1e-12)


def test_noise_distributions():
    for kind in NoiseModel.KINDS:
        model = NoiseModel(0.09, kind, seed=4)
        for syndrome in range(5):
            errs, probs = model.error_distribution(syndrome, 3)
            assert errs[0] == 0 and probs[0] >= 1 - 0.09 - 1e-15
            assert probs.sum() == pytest.approx(1.0)
            assert len(set(errs.tolist())) == len(errs)
    with pytest.raises(InputError):
        NoiseModel(1.0)
    with pytest.raises(InputError):
        NoiseModel(0.1, "adversarial")


def _entangled(h, p):
    mps = build_commuting_mps(h, p)
    psi = initial_state(register_amplitudes(mps), h.n)
    return bell_basis_transform(controlled_pauli_cascade(psi, h.terms))


def test_zero_noise_equals_perfect_decoder():
    rng = np.random.default_rng(5)
    h = random_commuting(3, 3, rng, independent=True)
    psi = _entangled(h, Polynomial((0.2, 0.5, -0.4)))
    dec = GaussianDecoder(build_code(h))
    assert np.array_equal(apply_decoder(psi, dec, NoiseModel(0.0)), apply_decoder(psi, dec))


def test_constant_polynomial_gives_maximally_mixed_output():
    rng = np.random.default_rng(6)
    h = random_commuting(3, 2, rng, independent=True)
    result = run_pipeline(h, Polynomial((1.0,)))
    assert np.allclose(result.rho, np.eye(8) / 8, atol=1e-14)
    assert result.residual == 0.0


def test_commuting_instance_matches_oracle():
    rng = np.random.default_rng(7)
    h = random_commuting(3, 3, rng, independent=True)
    p = Polynomial(tuple(rng.uniform(-1, 1, 3)))
    result = run_pipeline(h, p)
    assert trace_norm_distance(result.rho, rho_poly_oracle(h, p)) <= 1e-9
    assert all(abs(v - 1) <= 1e-10 for v in result.stage_norms.values())
    assert result.actual_bond_dim == result.predicted_bond_dim == 3


def test_anticommuting_pair_matches_oracle():
    h = PauliHamiltonian.from_labels([(0.8, "X"), (-0.35, "Z")])
    p = Polynomial((0.1, 0.7, -0.6))
    result = run_pipeline(h, p)
    assert result.regime == "noncommuting"
    assert trace_norm_distance(result.rho, rho_poly_oracle(h, p)) <= 1e-9


def test_nearly_independent_pipeline_uses_independent_register():
    rng = np.random.default_rng(8)
    h = random_nearly_independent(3, 3, 2, rng)
    p = Polynomial((0.4, -0.3, 0.5))
    result = run_pipeline(h, p)
    assert result.register_qubits == 3 and result.decoder_kind == "gaussian"
    assert trace_norm_distance(result.rho, rho_poly_oracle(h, p)) <= 1e-9


def test_commuting_builder_with_table_decoder_on_dependent_terms():
    # ring of ZZ bonds: any two bond flips have distinct syndromes up to weight 1
    h = PauliHamiltonian.from_labels([(0.5, "ZZI"), (-0.4, "IZZ"), (0.9, "ZIZ")])
    p = Polynomial((0.3, 0.6))
    result = run_pipeline(h, p, regime="commuting", decoder="table")
    assert result.decoder_kind == "table"
    assert trace_norm_distance(result.rho, rho_poly_oracle(h, p)) <= 1e-9
    with pytest.raises(AmbiguousSyndrome):
        run_pipeline(h, Polynomial((0.3, 0.6, 0.2)), regime="commuting", decoder="table")


def test_mismatched_decoder_leaves_residual():
    h = PauliHamiltonian.from_labels([(0.5, "ZI"), (0.7, "IZ")])
    wrong = GaussianDecoder(SymplecticCode(4, (parse_pauli("ZI").symp_int, parse_pauli("ZZ").symp_int)))
    with pytest.raises(ResidualOnA):
        run_pipeline(h, Polynomial((0.2, 1.0)), decoder=wrong)


@pytest.mark.parametrize("kind", NoiseModel.KINDS)
def test_noisy_decoding_within_square_root_bound(kind):
    rng = np.random.default_rng(9)
    h = random_commuting(3, 3, rng, independent=True)
    p = Polynomial((0.3, -0.5, 0.8))
    clean = run_pipeline(h, p)
    for eps in (0.01, 0.04, 0.09):
        for seed in range(5):
            noisy = run_pipeline(h, p, noise=NoiseModel(eps, kind, seed=seed))
            assert trace_norm_distance(noisy.rho, clean.rho) <= 2 * math.sqrt(eps)
            assert all(abs(v - 1) <= 1e-10 for v in noisy.stage_norms.values())


def test_partial_trace_cases():
    rng = np.random.default_rng(10)
    a = rng.normal(size=2) + 1j * rng.normal(size=2)
    a /= np.linalg.norm(a)
    b = rng.normal(size=4) + 1j * rng.normal(size=4)
    b /= np.linalg.norm(b)
    rho_a = partial_trace(np.kron(a, b), [2, 4], [0])
    assert np.allclose(rho_a, np.outer(a, a.conj()))
    bell = bell_state(2).reshape(-1)
    assert np.allclose(partial_trace(bell, [4, 4], [0]), np.eye(4) / 4)
    for _ in range(5):
        psi = rng.normal(size=24) + 1j * rng.normal(size=24)
        psi /= np.linalg.norm(psi)
        for keep in ([0], [1], [2], [0, 2]):
            assert np.trace(partial_trace(psi, [2, 3, 4], keep)).real == pytest.approx(1.0, abs=1e-12)
        full = np.outer(psi, psi.conj())
        assert np.allclose(partial_trace(full, [2, 3, 4], [1]), partial_trace(psi, [2, 3, 4], [1]))
    tensor = psi.reshape(2, 3, 4)
    assert np.allclose(np.einsum("abc,adc->bd", tensor, tensor.conj()), partial_trace(psi, [2, 3, 4], [1]))
