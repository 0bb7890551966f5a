import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from lindblad_forge.errors import ContractViolation, DimensionError
from lindblad_forge.matcore import (
    flat_index,
    hermitian_spectrum,
    least_squares_solve,
    pseudo_inverse,
    superop_left,
    superop_right,
    superop_sandwich,
    unvectorize,
    vectorize,
)

finite = st.floats(-10, 10, allow_nan=False, allow_infinity=False)


def cmat(N):
    return arrays(np.float64, (2, N, N), elements=finite).map(lambda a: a[0] + 1j * a[1])


def test_vectorize_stacks_columns():
    M = np.array([[1, 2], [3, 4]])
    assert list(vectorize(M)) == [1, 3, 2, 4]


def test_flat_index_matches_vectorize():
    N = 4
    M = np.arange(N * N).reshape(N, N)
    v = vectorize(M)
    for m in range(1, N + 1):
        for n in range(1, N + 1):
            assert v[flat_index(m, n, N)] == M[m - 1, n - 1]


@given(cmat(3))
def test_vectorize_roundtrip(M):
    assert np.array_equal(unvectorize(vectorize(M), 3), M)


def test_unvectorize_rejects_wrong_length():
    with pytest.raises(DimensionError):
        unvectorize(np.zeros(5), 2)


@settings(max_examples=50)
@given(cmat(3), cmat(3), cmat(3))
def test_sandwich_identity(A, X, B):
    lhs = vectorize(A @ X @ B)
    rhs = superop_sandwich(A, B) @ vectorize(X)
    assert np.allclose(lhs, rhs, atol=1e-9 * (1 + np.abs(lhs).max()))
    assert np.allclose(superop_left(A) @ vectorize(X), vectorize(A @ X), atol=1e-9 * (1 + np.abs(A @ X).max()))
    assert np.allclose(superop_right(B) @ vectorize(X), vectorize(X @ B), atol=1e-9 * (1 + np.abs(X @ B).max()))


def test_hermitian_spectrum_sorted():
    H = np.diag([3.0, -1.0, 2.0]).astype(complex)
    s = hermitian_spectrum(H)
    assert list(s.eigenvalues) == [-1.0, 2.0, 3.0]
    assert s.min_eigenvalue == -1.0
    assert s.max_eigenvalue == 3.0


def test_hermitian_spectrum_rejects_non_hermitian():
    with pytest.raises(ContractViolation):
        hermitian_spectrum(np.array([[0, 1], [0, 0]], dtype=complex))


def test_hermitian_spectrum_tolerates_roundoff():
    H = np.array([[1, 1e-13], [0, 1]], dtype=complex)
    assert len(hermitian_spectrum(H)) == 2


def test_hermitian_spectrum_rejects_rectangular():
    with pytest.raises(DimensionError):
        hermitian_spectrum(np.zeros((2, 3)))


def test_pseudo_inverse_rank_deficient():
    A = np.array([[1.0, 0.0], [0.0, 0.0], [0.0, 0.0]])
    P = pseudo_inverse(A)
    assert np.allclose(P, [[1, 0, 0], [0, 0, 0]])


def test_least_squares_minimum_norm():
    A = np.array([[1.0, 1.0]])
    x = least_squares_solve(A, np.array([2.0]))
    assert np.allclose(x, [1.0, 1.0])
    with pytest.raises(DimensionError):
        least_squares_solve(A, np.array([1.0, 2.0]))
