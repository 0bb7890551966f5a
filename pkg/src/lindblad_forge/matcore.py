"""Dense matrix helpers: column-stacking vectorization, Hermitian spectra, least squares.

All superoperators in this package act on column-stacked density matrices, so
element ``(m, n)`` of an ``N x N`` matrix (1-based) sits at flat position
``m + (n - 1) N``.  With 0-based indices that is ``m + n N``.
"""

from dataclasses import dataclass

import numpy as np

from .errors import ContractViolation, DimensionError

__all__ = [
    "HERMITIAN_TOL",
    "PINV_RCOND",
    "Spectrum",
    "vectorize",
    "unvectorize",
    "flat_index",
    "hermiticity_residual",
    "hermitian_spectrum",
    "pseudo_inverse",
    "least_squares_solve",
    "superop_left",
    "superop_right",
    "superop_sandwich",
]

HERMITIAN_TOL = 1e-10
PINV_RCOND = 1e-12


@dataclass(frozen=True)
class Spectrum:
    """Real eigenvalues of a Hermitian matrix in ascending order."""

    eigenvalues: np.ndarray

    @property
    def min_eigenvalue(self) -> float:
        return float(self.eigenvalues[0])

    @property
    def max_eigenvalue(self) -> float:
        return float(self.eigenvalues[-1])

    def __len__(self):
        return len(self.eigenvalues)


def vectorize(M) -> np.ndarray:
    """Stack the columns of ``M`` into a 1-d vector."""
    M = np.asarray(M)
    if M.ndim != 2:
        raise DimensionError(f"expected a 2-d matrix, got shape {M.shape}")
    return M.reshape(-1, order="F")


def unvectorize(v, N: int) -> np.ndarray:
    """Inverse of :func:`vectorize` for an ``N x N`` matrix."""
    v = np.asarray(v)
    if v.ndim != 1 or v.size != N * N:
        raise DimensionError(f"vector of length {v.size} cannot be reshaped to {N}x{N}")
    return v.reshape((N, N), order="F")


def flat_index(m: int, n: int, N: int) -> int:
    """0-based position of the 1-based matrix element ``(m, n)`` after vectorization."""
    return (m - 1) + (n - 1) * N


def hermiticity_residual(M) -> float:
    M = np.asarray(M)
    return float(np.max(np.abs(M - M.conj().T))) if M.size else 0.0


def hermitian_spectrum(M, tol: float = HERMITIAN_TOL) -> Spectrum:
    """Eigenvalues of a Hermitian matrix, ascending.

    Raises :class:`ContractViolation` when ``M`` is not Hermitian to ``tol``
    (measured relative to ``max(1, |M|_max)``).
    """
    M = np.asarray(M)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {M.shape}")
    scale = max(1.0, float(np.max(np.abs(M)))) if M.size else 1.0
    res = hermiticity_residual(M)
    if res > tol * scale:
        raise ContractViolation(f"matrix is not Hermitian (residual {res:.3e})")
    H = 0.5 * (M + M.conj().T)
    return Spectrum(np.linalg.eigvalsh(H))


def pseudo_inverse(A, rcond: float = PINV_RCOND) -> np.ndarray:
    """Moore-Penrose inverse; singular values below ``rcond * s_max`` are dropped."""
    return np.linalg.pinv(np.asarray(A), rcond=rcond)


def least_squares_solve(A, y, rcond: float = PINV_RCOND) -> np.ndarray:
    """Minimum-norm minimizer of ``|A x - y|_2``."""
    A = np.asarray(A)
    y = np.asarray(y)
    if A.shape[0] != y.shape[0]:
        raise DimensionError(f"A has {A.shape[0]} rows but y has length {y.shape[0]}")
    x, *_ = np.linalg.lstsq(A, y, rcond=rcond)
    return x


# Column-stacking identities: vec(A X B) = (B^T kron A) vec(X).

def superop_left(A) -> np.ndarray:
    """Matrix of ``X -> A X``."""
    A = np.asarray(A)
    return np.kron(np.eye(A.shape[1]), A)


def superop_right(B) -> np.ndarray:
    """Matrix of ``X -> X B``."""
    B = np.asarray(B)
    return np.kron(B.T, np.eye(B.shape[0]))


def superop_sandwich(A, B) -> np.ndarray:
    """Matrix of ``X -> A X B``."""
    return np.kron(np.asarray(B).T, np.asarray(A))
