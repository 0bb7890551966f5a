"""Phenomenological relaxation superoperators and their GKS coefficient matrices.

Superoperators are plain ``N**2 x N**2`` complex arrays acting on column-stacked
density matrices (see :mod:`lindblad_forge.matcore`).  ``gamma[m, n]`` (0-based
here, 1-based in labels) is the population transfer rate from level ``n`` to
level ``m``; ``Gamma[m, n]`` is the observed decay rate of the coherence
``rho[m, n]``.
"""

from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Optional

import numpy as np

from .basis import OperatorBasis, canonical_basis
from .errors import ContractViolation, DimensionError, NotExpandableError, ValidationError
from .matcore import hermitian_spectrum, pseudo_inverse, vectorize

__all__ = [
    "RateSpec",
    "KossakowskiMatrix",
    "build_phenomenological",
    "hamiltonian_superoperator",
    "elementary_generator",
    "generator_matrix",
    "kossakowski_expand",
    "kossakowski_assemble",
    "trace_row_residual",
    "EXPAND_TOL",
]

EXPAND_TOL = 1e-9
_STRUCT_TOL = 1e-12


def _as_real_square(x, name, N=None):
    arr = np.asarray(x)
    if np.iscomplexobj(arr):
        if np.max(np.abs(arr.imag), initial=0.0) > 0:
            raise ValidationError(f"{name} must be real")
        arr = arr.real
    arr = np.array(arr, dtype=float)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise DimensionError(f"{name} must be a square matrix, got shape {arr.shape}")
    if N is not None and arr.shape[0] != N:
        raise DimensionError(f"{name} must be {N}x{N}, got {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValidationError(f"{name} has non-finite entries")
    return arr


@dataclass(frozen=True, eq=False)
class RateSpec:
    """Observed population rates ``gamma`` and decoherence rates ``Gamma``.

    Construction performs structural checks only (shapes, zero diagonals,
    symmetric ``Gamma``, Hermitian Hamiltonian).  Sign of ``gamma`` is checked
    by :meth:`check_nonnegative`, which :func:`build_phenomenological` calls,
    so that constraint reports can still describe invalid data.
    """

    gamma: np.ndarray
    Gamma: np.ndarray
    hamiltonian: Optional[np.ndarray] = None

    def __post_init__(self):
        gamma = _as_real_square(self.gamma, "gamma")
        N = gamma.shape[0]
        if N < 2:
            raise DimensionError("need at least two levels")
        Gamma = _as_real_square(self.Gamma, "Gamma", N)
        scale = 1.0 + max(np.max(np.abs(gamma)), np.max(np.abs(Gamma)))
        for m in range(N):
            if abs(gamma[m, m]) > _STRUCT_TOL * scale:
                raise ValidationError(f"gamma[{m + 1},{m + 1}] must be zero, got {gamma[m, m]}")
            if abs(Gamma[m, m]) > _STRUCT_TOL * scale:
                raise ValidationError(f"Gamma[{m + 1},{m + 1}] must be zero, got {Gamma[m, m]}")
        asym = np.abs(Gamma - Gamma.T)
        if np.max(asym) > _STRUCT_TOL * scale:
            m, n = np.unravel_index(np.argmax(asym), asym.shape)
            raise ValidationError(
                f"Gamma must be symmetric: Gamma[{m + 1},{n + 1}]={Gamma[m, n]} "
                f"but Gamma[{n + 1},{m + 1}]={Gamma[n, m]}"
            )
        np.fill_diagonal(gamma, 0.0)
        np.fill_diagonal(Gamma, 0.0)
        Gamma = 0.5 * (Gamma + Gamma.T)
        gamma.setflags(write=False)
        Gamma.setflags(write=False)
        object.__setattr__(self, "gamma", gamma)
        object.__setattr__(self, "Gamma", Gamma)
        if self.hamiltonian is not None:
            H = np.array(self.hamiltonian, dtype=complex)
            if H.shape != (N, N):
                raise DimensionError(f"hamiltonian must be {N}x{N}, got {H.shape}")
            if np.max(np.abs(H - H.conj().T)) > 1e-10 * (1 + np.max(np.abs(H))):
                raise ValidationError("hamiltonian must be Hermitian")
            H.setflags(write=False)
            object.__setattr__(self, "hamiltonian", H)

    @property
    def N(self) -> int:
        return self.gamma.shape[0]

    def check_nonnegative(self):
        """Raise :class:`ValidationError` naming the first negative population rate."""
        neg = np.argwhere(self.gamma < 0)
        if len(neg):
            m, n = neg[0]
            raise ValidationError(
                f"population rate gamma[{m + 1},{n + 1}] = {self.gamma[m, n]} is negative"
            )

    @classmethod
    def zero(cls, N: int) -> "RateSpec":
        return cls(np.zeros((N, N)), np.zeros((N, N)))

    def scaled(self, s: float) -> "RateSpec":
        return RateSpec(s * self.gamma, s * self.Gamma, self.hamiltonian)


def build_phenomenological(rates: RateSpec) -> np.ndarray:
    """Relaxation superoperator with coherence decay ``-Gamma_mn`` and population transfer."""
    rates.check_nonnegative()
    N = rates.N
    L = np.zeros((N * N, N * N), dtype=complex)
    g, G = rates.gamma, rates.Gamma
    for m in range(N):
        pm = m + m * N
        for n in range(N):
            if m == n:
                continue
            L[m + n * N, m + n * N] = -G[m, n]
            L[pm, n + n * N] = g[m, n]
        L[pm, pm] = -g[:, m].sum()
    return L


def hamiltonian_superoperator(H) -> np.ndarray:
    """Matrix of ``rho -> [H, rho]``; the generator contribution is ``-1j`` times this."""
    H = np.asarray(H, dtype=complex)
    ident = np.eye(H.shape[0])
    return np.kron(ident, H) - np.kron(H.T, ident)


def elementary_generator(Vk, Vk2, N: Optional[int] = None) -> np.ndarray:
    """Matrix of ``rho -> (1/2)([Vk rho, Vk2^+] + [Vk, rho Vk2^+])``.

    Equivalently ``Vk rho Vk2^+ - (Vk2^+ Vk rho + rho Vk2^+ Vk) / 2``.
    """
    Vk = np.asarray(Vk, dtype=complex)
    Vk2 = np.asarray(Vk2, dtype=complex)
    if Vk.shape != Vk2.shape or Vk.ndim != 2 or Vk.shape[0] != Vk.shape[1]:
        raise DimensionError(f"generator operands must be equal square shapes, got {Vk.shape}, {Vk2.shape}")
    if N is not None and Vk.shape[0] != N:
        raise DimensionError(f"operators are {Vk.shape[0]}x{Vk.shape[0]}, expected N={N}")
    ident = np.eye(Vk.shape[0])
    P = Vk2.conj().T @ Vk
    return np.kron(Vk2.conj(), Vk) - 0.5 * np.kron(ident, P) - 0.5 * np.kron(P.T, ident)


@lru_cache(maxsize=16)
def generator_matrix(basis: OperatorBasis) -> np.ndarray:
    """``N^4 x K^2`` matrix whose column ``k*K + k'`` is ``vec(L_kk')``, ``K = N^2 - 1``."""
    N = basis.N
    cols = [
        vectorize(elementary_generator(Vk, Vk2, N))
        for Vk in basis.elements
        for Vk2 in basis.elements
    ]
    A = np.column_stack(cols)
    A.setflags(write=False)
    return A


@lru_cache(maxsize=16)
def _generator_pinv(basis: OperatorBasis) -> np.ndarray:
    P = pseudo_inverse(generator_matrix(basis))
    P.setflags(write=False)
    return P


@dataclass(frozen=True, eq=False)
class KossakowskiMatrix:
    """Coefficient matrix ``a`` of the GKS form with respect to ``basis``."""

    basis: OperatorBasis
    a: np.ndarray

    def __post_init__(self):
        K = len(self.basis)
        a = np.array(self.a, dtype=complex)
        if a.shape != (K, K):
            raise DimensionError(f"coefficient matrix must be {K}x{K}, got {a.shape}")
        a.setflags(write=False)
        object.__setattr__(self, "a", a)

    @property
    def N(self) -> int:
        return self.basis.N

    def entry(self, label, label2) -> complex:
        return self.a[self.basis.index(label), self.basis.index(label2)]

    @cached_property
    def spectrum(self):
        return hermitian_spectrum(self.a)

    def reduced_block(self) -> np.ndarray:
        """Sub-matrix on the diagonal-generator labels."""
        idx = np.array(self.basis.diagonal_indices)
        return self.a[np.ix_(idx, idx)]


def trace_row_residual(L) -> float:
    """``max |vec(I)^T L|``: zero for trace-preserving superoperators."""
    L = np.asarray(L)
    N = int(round(np.sqrt(L.shape[0])))
    return float(np.max(np.abs(vectorize(np.eye(N)) @ L))) if L.size else 0.0


def kossakowski_expand(LD, basis: Optional[OperatorBasis] = None) -> KossakowskiMatrix:
    """Solve ``vec(LD) = A vec(a)`` in the least-squares sense.

    Raises :class:`NotExpandableError` if the residual exceeds
    ``EXPAND_TOL * max(1, |LD|_F)``; this happens for inputs that are not
    trace preserving or carry a Hamiltonian-like part.
    """
    LD = np.asarray(LD, dtype=complex)
    if LD.ndim != 2 or LD.shape[0] != LD.shape[1]:
        raise DimensionError(f"superoperator must be square, got {LD.shape}")
    N = int(round(np.sqrt(LD.shape[0])))
    if N * N != LD.shape[0]:
        raise DimensionError(f"superoperator size {LD.shape[0]} is not a perfect square")
    if basis is None:
        basis = canonical_basis(N)
    elif basis.N != N:
        raise DimensionError(f"basis has N={basis.N} but superoperator acts on N={N}")
    y = vectorize(LD)
    x = _generator_pinv(basis) @ y
    residual = float(np.linalg.norm(generator_matrix(basis) @ x - y))
    if residual > EXPAND_TOL * max(1.0, float(np.linalg.norm(y))):
        raise NotExpandableError(
            f"superoperator is not a combination of dissipation generators (residual {residual:.3e})",
            residual=residual,
        )
    K = len(basis)
    return KossakowskiMatrix(basis, x.reshape(K, K))


def kossakowski_assemble(a: KossakowskiMatrix) -> np.ndarray:
    """``sum_kk' a_kk' L_kk'`` as an ``N^2 x N^2`` matrix."""
    N = a.N
    scale = max(1.0, float(np.max(np.abs(a.a))))
    if np.max(np.abs(a.a - a.a.conj().T)) > 1e-10 * scale:
        raise ContractViolation("coefficient matrix must be Hermitian")
    v = generator_matrix(a.basis) @ a.a.reshape(-1)
    return v.reshape((N * N, N * N), order="F")
