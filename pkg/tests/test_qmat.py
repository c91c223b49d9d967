import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from unipriv import qmat

X = np.array([[0, 1], [1, 0]], dtype=complex)
PLUS = np.array([1, 1]) / np.sqrt(2)


def test_kron_examples():
    assert np.allclose(qmat.kron(np.eye(2), np.eye(2)), np.eye(4))
    assert np.allclose(qmat.kron(np.diag([1, 0]), np.diag([0, 1])), np.diag([0, 1, 0, 0]))
    XX = np.zeros((4, 4))
    for i, j in itertools.product(range(4), repeat=2):
        XX[i, j] = X[i >> 1, j >> 1].real * X[i & 1, j & 1].real
    assert np.allclose(qmat.kron(X, X), XX)
    assert np.allclose(qmat.kron(X, X) @ qmat.ket(0, 4), qmat.ket(3, 4))


def test_positive_part_examples():
    assert np.allclose(qmat.positive_part_projector(np.diag([2.0, 0]), np.eye(2)), np.diag([1, 0]))
    A = np.diag([0.3, 0.7])
    assert np.allclose(qmat.positive_part_projector(A, A), np.eye(2))


def test_positive_part_is_best_projector(rng):
    A, B = qmat.random_hermitian(3, rng), qmat.random_hermitian(3, rng)
    P = qmat.positive_part_projector(A, B)
    assert qmat.is_projector(P)
    w, V = np.linalg.eigh(A - B)
    best = max(sum(w[list(S)]) for r in range(4) for S in itertools.combinations(range(3), r))
    assert np.trace(P @ (A - B)).real == pytest.approx(best, abs=1e-12)


def test_positive_part_complementary(rng):
    A, B = qmat.random_hermitian(4, rng), qmat.random_hermitian(4, rng)
    P, Q = qmat.positive_part_projector(A, B), qmat.positive_part_projector(B, A)
    assert np.allclose(P + Q, np.eye(4), atol=1e-10)


def test_trace_norm_examples():
    r = qmat.proj(qmat.ket(0, 2))
    assert qmat.trace_norm(r - r) == 0
    assert qmat.trace_norm(r - qmat.proj(qmat.ket(1, 2))) == pytest.approx(2)
    assert qmat.trace_norm(r - qmat.proj(PLUS)) == pytest.approx(np.sqrt(2))


def test_trace_norm_matches_projector_split(rng):
    A = qmat.random_hermitian(5, rng)
    P = qmat.positive_part_projector(A, np.zeros_like(A))
    split = np.trace(P @ A).real - np.trace((np.eye(5) - P) @ A).real
    assert qmat.trace_norm(A) == pytest.approx(split, abs=1e-10)


def test_trace_norm_triangle(rng):
    for _ in range(20):
        A, B = qmat.random_hermitian(3, rng), qmat.random_hermitian(3, rng)
        assert qmat.trace_norm(A + B) <= qmat.trace_norm(A) + qmat.trace_norm(B) + 1e-9


def test_partial_trace_examples(rng):
    rho, sigma = qmat.random_density(2, rng), qmat.random_density(3, rng)
    M = qmat.kron(rho, sigma)
    assert np.allclose(qmat.partial_trace(M, [2, 3], keep=[0]), rho)
    assert np.allclose(qmat.partial_trace(M, [2, 3], keep=[1]), sigma)
    assert np.allclose(qmat.partial_trace(M, [2, 3], keep=[]), [[1.0]])
    bell = (qmat.ket(0, 4) + qmat.ket(3, 4)) / np.sqrt(2)
    assert np.allclose(qmat.partial_trace(qmat.proj(bell), [2, 2], keep=[0]), np.eye(2) / 2)
    with pytest.raises(ValueError):
        qmat.partial_trace(M, [2, 2], keep=[0])


def test_frac_power_examples(rng):
    assert np.allclose(qmat.frac_power(np.eye(3), 0.37), np.eye(3))
    assert np.allclose(qmat.frac_power(np.diag([4.0, 0]), 0.5), np.diag([2, 0]))
    assert np.allclose(qmat.frac_power(np.diag([4.0, 0]), -0.5), np.diag([0.5, 0]))
    rho = qmat.random_density(3, rng)
    assert np.allclose(qmat.frac_power(rho, 0.3) @ qmat.frac_power(rho, 0.7), rho, atol=1e-12)


def test_psd_leq_examples():
    assert qmat.psd_leq(np.zeros((2, 2)), np.eye(2), 1e-10)
    assert not qmat.psd_leq(2 * np.eye(2), np.eye(2), 1e-10)


def test_pinv_sqrt_examples(rng):
    assert np.allclose(qmat.pinv_sqrt(np.eye(2)), np.eye(2))
    assert np.allclose(qmat.pinv_sqrt(np.diag([4.0, 0])), np.diag([0.5, 0]))
    v = qmat.random_density(3, rng, rank=1)
    P = qmat.support_projector(v)
    assert np.allclose(qmat.pinv_sqrt(P), P)
    A = qmat.random_psd(3, rng)
    B = qmat.pinv_sqrt(A)
    assert np.allclose(B @ A @ B, np.eye(3), atol=1e-9)


def test_permutation_unitary_examples(rng):
    assert np.allclose(qmat.permutation_unitary([0, 1, 2], 2), np.eye(8))
    swap = np.eye(4)[[0, 2, 1, 3]]
    assert np.allclose(qmat.permutation_unitary([1, 0], 2), swap)
    for _ in range(10):
        s, r = rng.permutation(3), rng.permutation(3)
        lhs = qmat.permutation_unitary(s, 2) @ qmat.permutation_unitary(r, 2)
        assert np.allclose(lhs, qmat.permutation_unitary(qmat.compose(s, r), 2))


def test_permutation_moves_factor_to_slot():
    # |1 0 0>, factor 0 moves to slot 1
    U = qmat.permutation_unitary([1, 2, 0], 2)
    assert np.allclose(U @ qmat.ket(4, 8), qmat.ket(2, 8))


def test_permute_operator_matches_conjugation(rng):
    A = qmat.random_hermitian(8, rng)
    s = [2, 0, 1]
    U = qmat.permutation_unitary(s, 2)
    assert np.allclose(qmat.permute_operator(A, s, 2), U @ A @ U.conj().T)


def test_eig_reconstruction(rng):
    A = qmat.random_hermitian(6, rng)
    w, V = qmat.eigh(A)
    assert qmat.max_abs(qmat.from_eig(w, V) - A) <= 1e-10


def test_check_density_names_letter():
    with pytest.raises(ValueError, match="letter 3"):
        qmat.check_density(np.diag([1.5, -0.5]), name="letter 3")


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(2, 4))
def test_random_density_is_valid(seed, d):
    rho = qmat.random_density(d, np.random.default_rng(seed))
    assert qmat.is_hermitian(rho)
    assert np.trace(rho).real == pytest.approx(1, abs=1e-10)
    assert qmat.min_eig(rho) >= -1e-10
