import numpy as np
import pytest

from agassi.pauli import DEDUP_TOL, PauliString, PauliSum, pauli_mul

from oracles import dense_word, random_pauli_string


def test_single_qubit_products():
    x = PauliString.from_label("X")
    y = PauliString.from_label("Y")
    z = PauliString.from_label("Z")
    xy = pauli_mul(x, y)
    assert xy.label() == "Z" and xy.coeff == 1j
    zz = pauli_mul(z, z)
    assert zz.label() == "I" and zz.coeff == 1


def test_two_qubit_product_example():
    a = PauliString.from_label("XZ")
    b = PauliString.from_label("YZ")
    c = pauli_mul(a, b)
    assert c.label() == "ZI"
    assert c.coeff == 1j
    # dense confirmation
    want = dense_word("XZ") @ dense_word("YZ")
    assert np.allclose(c.to_matrix(), want, atol=1e-14)


def test_mismatched_qubit_counts_rejected():
    with pytest.raises(ValueError):
        pauli_mul(PauliString.from_label("X"), PauliString.from_label("XX"))


def test_random_products_match_dense(rng):
    for _ in range(300):
        n = int(rng.integers(1, 5))
        a, b = random_pauli_string(rng, n), random_pauli_string(rng, n)
        got = pauli_mul(a, b).to_matrix()
        want = dense_word(a.label(), a.coeff) @ dense_word(b.label(), b.coeff)
        assert np.allclose(got, want, atol=1e-12)


def test_commutation_matches_dense(rng):
    for _ in range(200):
        n = int(rng.integers(1, 5))
        a, b = random_pauli_string(rng, n), random_pauli_string(rng, n)
        comm = dense_word(a.label()) @ dense_word(b.label()) - dense_word(
            b.label()
        ) @ dense_word(a.label())
        assert a.commutes_with(b) == np.allclose(comm, 0.0, atol=1e-13)


def test_product_order_differs_by_sign_at_most(rng):
    for _ in range(200):
        n = int(rng.integers(1, 5))
        a, b = random_pauli_string(rng, n), random_pauli_string(rng, n)
        ab, ba = pauli_mul(a, b), pauli_mul(b, a)
        assert ab.key == ba.key
        ratio = ab.coeff / ba.coeff
        assert abs(abs(ratio) - 1) < 1e-12
        assert min(abs(ratio - 1), abs(ratio + 1)) < 1e-12
        if a.commutes_with(b):
            assert abs(ratio - 1) < 1e-12
        else:
            assert abs(ratio + 1) < 1e-12


def test_weight_and_masks():
    p = PauliString.from_label("XIZYII")
    assert p.weight == 3
    assert p.n_xy_factors() == 2  # X and Y carry basis changes, Z does not
    assert p.axis_at(1) == "X" and p.axis_at(3) == "Z" and p.axis_at(4) == "Y"
    with pytest.raises(ValueError):
        PauliString(2, 0b100, 0, 1.0)  # mask beyond n_qubits


def test_canonicalization_merges_and_drops():
    a = PauliString.from_label("XZ", 0.5)
    b = PauliString.from_label("XZ", 0.5 + 1e-15)
    c = PauliString.from_label("XZ", -1.0)
    s = PauliSum([a, b, c])
    assert len(s) == 0  # everything cancels below the dedup tolerance
    s2 = PauliSum([a, a])
    assert len(s2) == 1 and s2.terms[0].coeff == 1.0


def test_sum_matches_dense_after_canonicalization(rng):
    for _ in range(30):
        n = int(rng.integers(1, 5))
        terms = [random_pauli_string(rng, n) for _ in range(int(rng.integers(1, 12)))]
        s = PauliSum(terms)
        want = sum(
            (dense_word(t.label(), t.coeff) for t in terms),
            np.zeros((2**n, 2**n), dtype=complex),
        )
        assert np.allclose(s.to_matrix(), want, atol=1e-12)


def test_sum_product_and_adjoint(rng):
    for _ in range(20):
        n = int(rng.integers(1, 4))
        sa = PauliSum([random_pauli_string(rng, n) for _ in range(4)])
        sb = PauliSum([random_pauli_string(rng, n) for _ in range(4)])
        assert np.allclose(
            (sa * sb).to_matrix(), sa.to_matrix() @ sb.to_matrix(), atol=1e-11
        )
        assert np.allclose(sa.adjoint().to_matrix(), sa.to_matrix().conj().T, atol=1e-12)


def test_hermiticity_detection():
    h = PauliSum([PauliString.from_label("XZ", 0.7), PauliString.from_label("ZI", -1.2)])
    assert h.is_hermitian()
    nh = PauliSum([PauliString.from_label("XZ", 1j)])
    assert not nh.is_hermitian()


def test_identity_and_constant():
    s = PauliSum.identity(3, 2.5)
    assert s.constant() == 2.5
    assert s.terms[0].weight == 0
