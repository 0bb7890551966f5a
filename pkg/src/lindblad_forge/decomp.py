"""Split a relaxation superoperator into population-decay and pure-dephasing parts.

Population decay ``n -> m`` at rate ``gamma_mn`` forces the coherence
``rho_mn`` to decay at least at

    Gamma^p_mn = (1/2) sum_k (gamma_km + gamma_kn),

half the total decay out of either level.  Whatever remains of the observed
rate, ``Gamma^d = Gamma - Gamma^p``, is pure dephasing.  Its GKS coefficients
live entirely on the diagonal generators and form the reduced ``(N-1) x (N-1)``
matrix ``b``; complete positivity needs ``gamma >= 0`` and ``b`` PSD.
"""

from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Optional

import numpy as np

from .basis import OperatorBasis, canonical_basis, matrix_unit
from .dissipator import RateSpec, elementary_generator
from .errors import DimensionError, NotExpandableError, ValidationError
from .matcore import hermitian_spectrum, pseudo_inverse, vectorize

__all__ = [
    "PureDephasingRates",
    "ReducedCoefficientMatrix",
    "decay_induced_dephasing",
    "pure_dephasing",
    "rates_from_pure_dephasing",
    "dephasing_superoperator",
    "population_part",
    "dephasing_part",
    "reduced_matrix",
    "dephasing_rates_from_reduced",
    "pair_labels",
]

REDUCED_TOL = 1e-9


def pair_labels(N: int):
    """1-based level pairs ``(m, n)`` with ``m < n`` in lexicographic order."""
    return [(m, n) for m in range(1, N + 1) for n in range(m + 1, N + 1)]


@dataclass(frozen=True, eq=False)
class PureDephasingRates:
    """Symmetric, zero-diagonal matrix of pure dephasing rates.

    Entries may be negative; that is exactly what the constraint checks report.
    """

    Gd: np.ndarray

    def __post_init__(self):
        Gd = np.array(self.Gd, dtype=float)
        if Gd.ndim != 2 or Gd.shape[0] != Gd.shape[1] or Gd.shape[0] < 2:
            raise DimensionError(f"pure dephasing rates must be NxN with N>=2, got {Gd.shape}")
        scale = 1.0 + np.max(np.abs(Gd))
        if np.max(np.abs(Gd - Gd.T)) > 1e-12 * scale:
            raise ValidationError("pure dephasing matrix must be symmetric")
        if np.max(np.abs(np.diag(Gd))) > 1e-12 * scale:
            raise ValidationError("pure dephasing matrix must have zero diagonal")
        Gd = 0.5 * (Gd + Gd.T)
        np.fill_diagonal(Gd, 0.0)
        Gd.setflags(write=False)
        object.__setattr__(self, "Gd", Gd)

    @property
    def N(self) -> int:
        return self.Gd.shape[0]

    def __getitem__(self, pair) -> float:
        m, n = pair
        return float(self.Gd[m - 1, n - 1])

    @classmethod
    def from_pairs(cls, N: int, values: dict) -> "PureDephasingRates":
        """Build from ``{(m, n): rate}`` with 1-based pairs; missing pairs are zero."""
        Gd = np.zeros((N, N))
        for (m, n), v in values.items():
            Gd[m - 1, n - 1] = Gd[n - 1, m - 1] = v
        return cls(Gd)

    def pairs(self) -> dict:
        return {p: self[p] for p in pair_labels(self.N)}


@dataclass(frozen=True, eq=False)
class ReducedCoefficientMatrix:
    """Pure-dephasing block ``b`` of the GKS matrix, indexed by the basis diagonals."""

    basis: OperatorBasis
    b: np.ndarray

    @cached_property
    def spectrum(self):
        return hermitian_spectrum(self.b)

    @property
    def min_eigenvalue(self) -> float:
        return self.spectrum.min_eigenvalue


def decay_induced_dephasing(gamma) -> np.ndarray:
    """Coherence decay rates caused by population relaxation alone."""
    gamma = np.asarray(gamma, dtype=float)
    out_rate = gamma.sum(axis=0)  # total decay out of each level
    Gp = 0.5 * (out_rate[:, None] + out_rate[None, :])
    np.fill_diagonal(Gp, 0.0)
    return Gp


def pure_dephasing(rates: RateSpec) -> PureDephasingRates:
    return PureDephasingRates(rates.Gamma - decay_induced_dephasing(rates.gamma))


def rates_from_pure_dephasing(gamma, Gd, hamiltonian=None) -> RateSpec:
    """RateSpec whose observed decoherence is ``Gamma^p(gamma) + Gd``."""
    Gd = Gd.Gd if isinstance(Gd, PureDephasingRates) else np.asarray(Gd, dtype=float)
    gamma = np.asarray(gamma, dtype=float)
    return RateSpec(gamma, decay_induced_dephasing(gamma) + Gd, hamiltonian)


def dephasing_superoperator(Gd) -> np.ndarray:
    """Diagonal superoperator damping each coherence ``rho_mn`` at ``Gd_mn``."""
    Gd = Gd.Gd if isinstance(Gd, PureDephasingRates) else np.asarray(Gd, dtype=float)
    return np.diag(-vectorize(Gd).astype(complex))


def population_part(gamma, basis: Optional[OperatorBasis] = None) -> np.ndarray:
    """``sum_mn gamma_mn L_(m,n),(m,n)`` over the off-diagonal matrix units."""
    gamma = np.asarray(gamma, dtype=float)
    N = gamma.shape[0]
    L = np.zeros((N * N, N * N), dtype=complex)
    for m in range(1, N + 1):
        for n in range(1, N + 1):
            g = gamma[m - 1, n - 1]
            if m != n and g != 0:
                V = basis.element((m, n)) if basis is not None else matrix_unit(m, n, N)
                L += g * elementary_generator(V, V, N)
    return L


def dephasing_part(rates: RateSpec) -> np.ndarray:
    """Pure-dephasing superoperator of ``rates``, built from ``Gamma - Gamma^p`` alone."""
    return dephasing_superoperator(pure_dephasing(rates))


@lru_cache(maxsize=16)
def _reduced_system(basis: OperatorBasis):
    """Dephasing generators on the diagonal labels, zero rows removed."""
    diag = [basis.elements[k] for k in basis.diagonal_indices]
    N = basis.N
    cols = [vectorize(elementary_generator(D, D2, N)) for D in diag for D2 in diag]
    B = np.column_stack(cols)
    keep = np.flatnonzero(np.any(np.abs(B) > 0, axis=1))
    Bk = B[keep]
    P = pseudo_inverse(Bk)
    for arr in (keep, Bk, P):
        arr.setflags(write=False)
    return keep, Bk, P


def reduced_matrix(Gd, basis: Optional[OperatorBasis] = None) -> ReducedCoefficientMatrix:
    """Least-squares expansion of the pure-dephasing superoperator on the diagonal generators."""
    if not isinstance(Gd, PureDephasingRates):
        Gd = PureDephasingRates(Gd)
    N = Gd.N
    if basis is None:
        basis = canonical_basis(N)
    elif basis.N != N:
        raise DimensionError(f"basis has N={basis.N} but rates have N={N}")
    keep, Bk, P = _reduced_system(basis)
    l = vectorize(dephasing_superoperator(Gd))
    if np.any(np.delete(l, keep) != 0):
        raise NotExpandableError("dephasing superoperator has entries outside the generator support")
    lk = l[keep]
    x = P @ lk
    residual = float(np.linalg.norm(Bk @ x - lk))
    if residual > REDUCED_TOL * max(1.0, float(np.linalg.norm(lk))):
        raise NotExpandableError(f"pure dephasing rates are inconsistent (residual {residual:.3e})", residual)
    M = N - 1
    b = x.reshape(M, M)
    if np.max(np.abs(b.imag)) > REDUCED_TOL * max(1.0, float(np.max(np.abs(b)))):
        raise NotExpandableError("reduced coefficient matrix came out complex")
    b = b.real
    b = 0.5 * (b + b.T)
    return ReducedCoefficientMatrix(basis, b)


def dephasing_rates_from_reduced(b, basis: Optional[OperatorBasis] = None) -> PureDephasingRates:
    """Inverse of :func:`reduced_matrix`: pure dephasing rates generated by ``b``."""
    b = np.asarray(b, dtype=float)
    N = b.shape[0] + 1
    if basis is None:
        basis = canonical_basis(N)
    diag = [np.real(np.diag(basis.elements[k])) for k in basis.diagonal_indices]
    D = np.array(diag)  # rows: generators, columns: levels
    # coherence (m,n) decays at 1/2 sum_kk' b_kk' (d_k[m] - d_k[n]) (d_k'[m] - d_k'[n])
    diff = D[:, :, None] - D[:, None, :]
    Gd = 0.5 * np.einsum("ij,imn,jmn->mn", b, diff, diff)
    np.fill_diagonal(Gd, 0.0)
    return PureDephasingRates(0.5 * (Gd + Gd.T))
