import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from _dense import X, Y, Z, all_labels, kron_label
from hdqi.errors import CapExceeded, DimensionError, DuplicateTerm, InputError, NonHermitianTerm, ParseError
from hdqi.pauli import (
    PauliHamiltonian,
    PauliTerm,
    commutes,
    dense_pauli,
    format_hamiltonian,
    mul,
    parse_hamiltonian,
    parse_pauli,
    symp,
)

labels_up_to_3 = st.integers(1, 3).flatmap(lambda n: st.tuples(*[st.text("IXYZ", min_size=n, max_size=n)] * 2))


@pytest.mark.parametrize(
    "label, alpha, beta",
    [("ZZ", (1, 1), (0, 0)), ("Y", (1,), (1,)), ("XIZ", (0, 0, 1), (1, 0, 0))],
)
def test_parse_bits(label, alpha, beta):
    p = parse_pauli(label)
    assert p.phase == 0
    assert p.alpha == alpha and p.beta == beta


def test_parse_rejects_bad_character_with_position():
    with pytest.raises(ParseError) as err:
        parse_pauli("XQZ")
    assert err.value.position == 1
    with pytest.raises(ParseError):
        parse_pauli("")


def test_symp_concatenates_z_then_x_parts():
    assert symp(parse_pauli("Z")).tolist() == [1, 0]
    assert symp(parse_pauli("Y")).tolist() == [1, 1]
    assert symp(parse_pauli("IX")).tolist() == [0, 0, 0, 1]


def test_single_qubit_matrices():
    assert np.array_equal(dense_pauli(parse_pauli("X")), X)
    assert np.array_equal(dense_pauli(parse_pauli("Z")), Z)
    assert np.array_equal(dense_pauli(parse_pauli("Y")), Y)


def test_x_times_z_is_minus_i_y():
    r = mul(parse_pauli("X"), parse_pauli("Z"))
    assert r.phase == 3 and (r.z, r.x) == (1, 1)
    assert parse_pauli("Z") * parse_pauli("Z") == PauliTerm.identity(1)


def test_dense_matches_kron_for_all_three_qubit_labels():
    for s in all_labels(3):
        assert np.array_equal(dense_pauli(parse_pauli(s)), kron_label(s)), s


def test_mul_matches_dense_product_exhaustively_on_two_qubits():
    labels = all_labels(2)
    for a, b in itertools.product(labels, repeat=2):
        for pa, pb in itertools.product(range(4), repeat=2):
            p = PauliTerm(2, parse_pauli(a).z, parse_pauli(a).x, pa)
            q = PauliTerm(2, parse_pauli(b).z, parse_pauli(b).x, pb)
            assert np.allclose(dense_pauli(mul(p, q)), dense_pauli(p) @ dense_pauli(q), atol=0)


def test_commutes_matches_dense_commutator_exhaustively_on_two_qubits():
    for a, b in itertools.product(all_labels(2), repeat=2):
        ma, mb = kron_label(a), kron_label(b)
        dense_comm = np.abs(ma @ mb - mb @ ma).max() == 0
        assert commutes(parse_pauli(a), parse_pauli(b)) == dense_comm


@given(labels_up_to_3, st.integers(0, 3), st.integers(0, 3))
def test_product_properties(pair, pa, pb):
    a, b = (parse_pauli(s) for s in pair)
    p, q = PauliTerm(a.n, a.z, a.x, pa), PauliTerm(b.n, b.z, b.x, pb)
    r = mul(p, q)
    assert np.array_equal(symp(r), symp(p) ^ symp(q))
    assert np.allclose(dense_pauli(r), dense_pauli(p) @ dense_pauli(q))
    square = mul(p, p)
    assert square.z == square.x == 0 and square.phase in (0, 2)
    if p.is_hermitian:
        assert square == PauliTerm.identity(p.n)


@given(labels_up_to_3, labels_up_to_3)
def test_mul_is_associative(first, second):
    a, b = (parse_pauli(s) for s in first)
    c = parse_pauli(second[0])
    if c.n != a.n:
        return
    assert mul(mul(a, b), c) == mul(a, mul(b, c))


def test_mismatched_sizes():
    with pytest.raises(DimensionError):
        mul(parse_pauli("X"), parse_pauli("XX"))
    with pytest.raises(DimensionError):
        commutes(parse_pauli("X"), parse_pauli("XX"))


def test_dense_cap():
    with pytest.raises(CapExceeded):
        dense_pauli(parse_pauli("X" * 5), cap=4)


def test_hamiltonian_folds_minus_sign_and_rejects_bad_terms():
    minus_x = -parse_pauli("X")
    h = PauliHamiltonian(1, (0.5,), (minus_x,))
    assert h.coeffs == (-0.5,) and h.terms[0].phase == 0
    with pytest.raises(NonHermitianTerm):
        PauliHamiltonian(1, (1.0,), (PauliTerm(1, 0, 1, 1),))
    with pytest.raises(DuplicateTerm):
        PauliHamiltonian(1, (1.0, 2.0), (parse_pauli("Z"), -parse_pauli("Z")))


def test_file_format_round_trip_and_errors():
    text = "# a comment\n0.5 XZ\n\n-1.25 YY  # trailing\n"
    h = parse_hamiltonian(text)
    assert h.labels() == ["XZ", "YY"] and h.coeffs == (0.5, -1.25)
    again = parse_hamiltonian(format_hamiltonian(h, "header"))
    assert again == h
    with pytest.raises(DuplicateTerm):
        parse_hamiltonian("1 XZ\n2 XZ\n")
    with pytest.raises(ParseError) as err:
        parse_hamiltonian("1 XZ\n2 XZZ\n")
    assert err.value.line == 2
    with pytest.raises(ParseError):
        parse_hamiltonian("abc XZ\n")
    with pytest.raises(InputError):
        parse_hamiltonian("# nothing\n")
