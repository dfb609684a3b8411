import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from _dense import kron_label
from hdqi.errors import AmbiguousSyndrome, CapExceeded, InputError, NoncommutingTerms, UnknownSyndrome
from hdqi.gf2code import (
    GaussianDecoder,
    SymplecticCode,
    SyndromeTableDecoder,
    build_code,
    build_syndrome_table,
    decode,
    find_block_partition,
    gf2_rank,
)
from hdqi.hamiltonians import h1_hamiltonian, independent_plus_product, random_nearly_independent
from hdqi.pauli import PauliHamiltonian


def span_size(columns):
    span = {0}
    for c in columns:
        span |= {v ^ c for v in span}
    return len(span)


def test_single_z_code():
    code = build_code(PauliHamiltonian.from_labels([(0.7, "Z")]))
    assert code.b_transpose.tolist() == [[1], [0]]
    assert code.k == 0


def test_ring_of_zz_has_one_relation():
    h = PauliHamiltonian.from_labels([(1, "ZZI"), (1, "IZZ"), (1, "ZIZ")])
    code = build_code(h)
    assert (code.rank, code.k) == (2, 1)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_chain_with_fields_has_trivial_code(n):
    assert build_code(h1_hamiltonian(n, 0.5)).k == 0


@given(st.lists(st.integers(0, 255), max_size=10))
def test_rank_counts_span(columns):
    assert 2 ** gf2_rank(columns) == span_size(columns)


@given(st.lists(st.integers(1, 63), min_size=1, max_size=8))
def test_expansions_reproduce_columns(columns):
    code = SymplecticCode(6, tuple(columns))
    for j, col in enumerate(columns):
        acc = 0
        for i in code.independent:
            if (code.expansions[j] >> i) & 1:
                acc ^= columns[i]
        assert acc == col
        assert all((code.expansions[j] >> i) & 1 == 0 for i in range(len(columns)) if i not in code.independent)


def _random_full_rank_code(rng, m, rows):
    while True:
        cols = [int(v) for v in rng.integers(1, 1 << rows, size=m)]
        if gf2_rank(cols) == m:
            return SymplecticCode(rows, tuple(cols))


def test_gaussian_round_trip_exhaustive():
    rng = np.random.default_rng(11)
    for _ in range(10):
        m = int(rng.integers(1, 9))
        code = _random_full_rank_code(rng, m, m + int(rng.integers(0, 4)))
        dec = GaussianDecoder(code)
        for y in range(1 << m):
            assert dec.decode_int(code.syndrome(y)) == y
        assert decode(dec, 0).tolist() == [0] * m
        e3 = [0] * m
        e3[min(2, m - 1)] = 1
        assert decode(dec, code.syndrome(e3)).tolist() == e3


def test_gaussian_rejects_dependent_code_and_foreign_syndrome():
    with pytest.raises(InputError):
        GaussianDecoder(SymplecticCode(2, (1, 2, 3)))
    dec = GaussianDecoder(SymplecticCode(3, (1, 2)))
    with pytest.raises(UnknownSyndrome):
        dec.decode_int(4)


def test_table_basic_cases():
    code = SymplecticCode(4, (1, 2, 4))
    assert len(build_syndrome_table(code, 0)) == 1
    assert build_syndrome_table(code, 0).decode_int(0) == 0
    with pytest.raises(UnknownSyndrome):
        build_syndrome_table(code, 0).decode_int(1)
    with pytest.raises(AmbiguousSyndrome):
        build_syndrome_table(SymplecticCode(1, (1, 1)), 1)
    full = build_syndrome_table(code, 3)
    assert len(full) == 8 and all(full.decode_int(code.syndrome(y)) == y for y in range(8))
    with pytest.raises(CapExceeded):
        SyndromeTableDecoder(SymplecticCode(20, tuple(1 << i for i in range(20))), 20, cap=1000)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(1, 31), min_size=1, max_size=7), st.integers(0, 3))
def test_table_builds_iff_no_low_weight_collision(columns, weight):
    code = SymplecticCode(5, tuple(columns))
    words = [y for y in range(1 << len(columns)) if bin(y).count("1") <= weight]
    seen, collision = {}, False
    for y in words:
        s = code.syndrome(y)
        collision |= s in seen
        seen[s] = y
    if collision:
        with pytest.raises(AmbiguousSyndrome):
            SyndromeTableDecoder(code, weight)
    else:
        dec = SyndromeTableDecoder(code, weight)
        assert all(dec.decode_int(code.syndrome(y)) == y for y in words)


def _check_partition(h, bp):
    k = bp.k
    assert len(bp.blocks) <= 2**k
    assert sorted(i for b in bp.blocks for i in b) == sorted(bp.independent_indices)
    for rel in bp.relations:
        members = set(rel.support)
        assert members == {i for t in rel.blocks for i in bp.blocks[t]}
        for block in bp.blocks:
            assert len({i in members for i in block}) == 1
        prod = np.eye(1 << h.n, dtype=complex)
        for i in rel.support:
            prod = prod @ kron_label(h.terms[i].label())
        assert np.allclose(prod, rel.sign * kron_label(h.terms[rel.dependent].label()))


def test_ring_partition():
    h = PauliHamiltonian.from_labels([(1, "ZZI"), (1, "IZZ"), (1, "ZIZ")])
    bp = find_block_partition(h)
    assert bp.independent_indices == (0, 1)
    assert bp.blocks == ((0, 1),)
    (rel,) = bp.relations
    assert (rel.dependent, rel.support, rel.blocks, rel.sign) == (2, (0, 1), (0,), 1)
    _check_partition(h, bp)


def test_negative_relation_sign():
    # XX * ZZ = -YY
    h = PauliHamiltonian.from_labels([(1, "XX"), (1, "ZZ"), (1, "YY")])
    (rel,) = find_block_partition(h).relations
    assert rel.sign == -1
    _check_partition(h, find_block_partition(h))


def test_partition_preconditions():
    with pytest.raises(NoncommutingTerms):
        find_block_partition(PauliHamiltonian.from_labels([(1, "X"), (1, "Z"), (1, "Y")]))
    with pytest.raises(InputError):
        find_block_partition(PauliHamiltonian.from_labels([(1, "ZI"), (1, "IZ")]))


def test_product_of_all_gives_single_block():
    rng = np.random.default_rng(5)
    for m in (2, 3, 4):
        h = independent_plus_product(4, m, rng)
        bp = find_block_partition(h)
        assert len(bp.relations) == 1 and len(bp.blocks) == 1
        assert bp.relations[0].support == tuple(range(m))
        _check_partition(h, bp)


def test_random_partitions_are_atoms_with_correct_signs():
    rng = np.random.default_rng(7)
    for _ in range(40):
        n = int(rng.integers(3, 6))
        m_indep = int(rng.integers(2, n + 1))
        k = int(rng.integers(1, 4))
        try:
            h = random_nearly_independent(n, m_indep, k, rng)
        except InputError:
            continue
        bp = find_block_partition(h)
        assert bp.k == build_code(h).k
        _check_partition(h, bp)
