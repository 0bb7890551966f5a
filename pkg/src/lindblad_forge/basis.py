"""Orthonormal trace-zero operator bases for N-level Liouville space.

A basis holds ``N**2 - 1`` matrices.  The N-1 diagonal generators come
first (labels ``(m, m)``), followed by the matrix units ``e_mn`` for
``m != n`` ordered by their column-stacked position ``m + (n - 1) N``.
"""

from dataclasses import dataclass
from functools import cached_property, lru_cache

import numpy as np

from .errors import DimensionError
from .matcore import vectorize

__all__ = ["OperatorBasis", "matrix_unit", "canonical_basis", "symmetric_basis_4"]


def matrix_unit(m: int, n: int, N: int) -> np.ndarray:
    """``e_mn``: one at the 1-based position (m, n), zero elsewhere."""
    e = np.zeros((N, N), dtype=complex)
    e[m - 1, n - 1] = 1.0
    return e


@dataclass(frozen=True, eq=False)
class OperatorBasis:
    N: int
    elements: tuple
    labels: tuple
    name: str = "canonical"

    def __post_init__(self):
        if len(self.elements) != self.N**2 - 1 or len(self.labels) != len(self.elements):
            raise DimensionError(
                f"basis for N={self.N} needs {self.N**2 - 1} elements, got {len(self.elements)}"
            )
        for el in self.elements:
            el.setflags(write=False)

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __getitem__(self, k):
        return self.elements[k]

    def __repr__(self):
        return f"OperatorBasis(name={self.name!r}, N={self.N})"

    @cached_property
    def _positions(self):
        return {lab: k for k, lab in enumerate(self.labels)}

    def index(self, label) -> int:
        """Position of the element carrying ``label = (m, n)``."""
        return self._positions[tuple(label)]

    def element(self, label) -> np.ndarray:
        return self.elements[self.index(label)]

    @cached_property
    def diagonal_indices(self) -> tuple:
        return tuple(k for k, (m, n) in enumerate(self.labels) if m == n)

    @cached_property
    def offdiagonal_indices(self) -> tuple:
        return tuple(k for k, (m, n) in enumerate(self.labels) if m != n)

    @cached_property
    def gram(self) -> np.ndarray:
        """``Tr(V_k^dagger V_k')`` for all pairs."""
        S = self.stacked
        return S.conj().T @ S

    @cached_property
    def stacked(self) -> np.ndarray:
        """``N^2 x (N^2 - 1)`` matrix whose columns are the vectorized elements."""
        return np.column_stack([vectorize(V) for V in self.elements])

    def with_identity(self) -> np.ndarray:
        """Columns of :attr:`stacked` plus ``vec(I / sqrt(N))`` as the last column."""
        ident = vectorize(np.eye(self.N, dtype=complex) / np.sqrt(self.N))
        return np.column_stack([self.stacked, ident])


def _offdiagonal_labels(N):
    # ordered by the column-stacked position m + (n-1) N
    return [(m, n) for n in range(1, N + 1) for m in range(1, N + 1) if m != n]


@lru_cache(maxsize=None)
def canonical_basis(N: int) -> OperatorBasis:
    """Diagonal generators ``(sum_{s<=m} e_ss - m e_{m+1,m+1}) / sqrt(m + m^2)`` plus ``e_mn``."""
    if int(N) != N or N < 2:
        raise DimensionError(f"basis dimension must be an integer >= 2, got {N}")
    N = int(N)
    elements, labels = [], []
    for m in range(1, N):
        V = np.zeros((N, N), dtype=complex)
        V[np.arange(m), np.arange(m)] = 1.0
        V[m, m] = -m
        elements.append(V / np.sqrt(m + m * m))
        labels.append((m, m))
    for m, n in _offdiagonal_labels(N):
        elements.append(matrix_unit(m, n, N))
        labels.append((m, n))
    return OperatorBasis(N, tuple(elements), tuple(labels), name="canonical")


@lru_cache(maxsize=None)
def symmetric_basis_4() -> OperatorBasis:
    """Four-level basis with sign-pattern diagonal generators.

    The diagonals are ``(1,-1,1,-1)/2``, ``(1,-1,-1,1)/2`` and ``(1,1,-1,-1)/2``;
    the off-diagonal elements coincide with :func:`canonical_basis` ``(4)``.
    """
    N = 4
    patterns = [(1, -1, 1, -1), (1, -1, -1, 1), (1, 1, -1, -1)]
    elements = [np.diag(np.array(p, dtype=complex)) / 2 for p in patterns]
    labels = [(1, 1), (2, 2), (3, 3)]
    for m, n in _offdiagonal_labels(N):
        elements.append(matrix_unit(m, n, N))
        labels.append((m, n))
    return OperatorBasis(N, tuple(elements), tuple(labels), name="symmetric4")
