"""Diagonal (Lindblad) form of a GKS coefficient matrix.

Diagonalizing ``a = U diag(rates) U^dagger`` turns the double sum over basis
operators into independent channels ``(rate_k, A_k)`` with
``A_k = sum_j U_jk V_j``.  Each channel contributes
``rate_k (A rho A^+ - {A^+ A, rho} / 2)``.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .basis import canonical_basis
from .constraints import threelevel_closed_form
from .decomp import PureDephasingRates, reduced_matrix
from .dissipator import KossakowskiMatrix, elementary_generator
from .errors import DimensionError, NotCompletelyPositiveError

__all__ = [
    "LindbladSet",
    "diagonalize",
    "reconstruct",
    "fix_phase",
    "threelevel_dephasing_generators",
]

RATE_TOL = 1e-10


@dataclass(frozen=True)
class LindbladSet:
    N: int
    channels: tuple = field(default_factory=tuple)

    def __post_init__(self):
        for rate, op in self.channels:
            if rate < 0:
                raise ValueError(f"channel rate {rate} is negative")
            if np.shape(op) != (self.N, self.N):
                raise DimensionError(f"channel operator must be {self.N}x{self.N}")

    @property
    def rates(self) -> np.ndarray:
        return np.array([r for r, _ in self.channels])

    @property
    def operators(self) -> list:
        return [op for _, op in self.channels]

    def __len__(self):
        return len(self.channels)


def fix_phase(v: np.ndarray) -> np.ndarray:
    """Rotate ``v`` so its largest-magnitude component is real and positive."""
    k = int(np.argmax(np.abs(v)))
    if abs(v[k]) == 0:
        return v
    return v * (abs(v[k]) / v[k])


def diagonalize(a: KossakowskiMatrix, tol: float = RATE_TOL) -> LindbladSet:
    """Eigen-decompose ``a``; raise :class:`NotCompletelyPositiveError` if it is indefinite.

    Rates within ``tol * (1 + max|a|)`` of zero are dropped.
    """
    A = np.asarray(a.a)
    scale = 1.0 + float(np.max(np.abs(A))) if A.size else 1.0
    w, U = np.linalg.eigh(0.5 * (A + A.conj().T))
    if w.size and w[0] < -tol * scale:
        raise NotCompletelyPositiveError(
            f"coefficient matrix has negative eigenvalue {w[0]:.6g}", min_eigenvalue=float(w[0])
        )
    basis = a.basis
    V = np.array(basis.elements)
    channels = []
    for k in np.argsort(-w, kind="stable"):
        if w[k] <= tol * scale:
            continue
        u = fix_phase(U[:, k])
        op = np.tensordot(u, V, axes=1)
        op.setflags(write=False)
        channels.append((float(w[k]), op))
    return LindbladSet(basis.N, tuple(channels))


def reconstruct(L: LindbladSet) -> np.ndarray:
    """``sum_k rate_k L_{A_k, A_k}`` as an ``N^2 x N^2`` superoperator."""
    N = L.N
    out = np.zeros((N * N, N * N), dtype=complex)
    for rate, op in L.channels:
        out += rate * elementary_generator(op, op, N)
    return out


def threelevel_dephasing_generators(Gd, tol: float = 1e-12):
    """Diagonal dephasing channels ``(A1, A2, delta1, delta2)`` for three levels.

    ``delta1 >= delta2`` are the eigenvalues of the reduced matrix ``b``.
    Closed forms are used except near the removable singularities
    ``x = 0`` or ``x = |Delta1|``, where the eigenvectors of ``b`` are taken instead.
    """
    if not isinstance(Gd, PureDephasingRates):
        Gd = PureDephasingRates(Gd)
    if Gd.N != 3:
        raise DimensionError("three-level generators need N = 3")
    report = threelevel_closed_form(Gd)
    if not report.cp_ok:
        names = ", ".join(c.name for c in report.violated)
        raise NotCompletelyPositiveError(
            f"pure dephasing rates violate positivity ({names})", min_eigenvalue=report.b_min_eigenvalue
        )
    g12, g13, g23 = Gd[1, 2], Gd[1, 3], Gd[2, 3]
    basis = canonical_basis(3)
    V11, V22 = basis.element((1, 1)), basis.element((2, 2))
    d1 = 2 * g12 - g13 - g23
    d2 = g13 - g23
    x = math.sqrt(d1 * d1 + 3 * d2 * d2)
    total = g12 + g13 + g23
    delta1, delta2 = (total + x) / 3, (total - x) / 3
    scale = 1.0 + max(abs(g12), abs(g13), abs(g23))
    if x - abs(d1) > tol * scale:
        A1 = (math.sqrt(3) * d2 * V11 + (x - d1) * V22) / math.sqrt(2 * x * (x - d1))
        A2 = -(math.sqrt(3) * d2 * V11 - (x + d1) * V22) / math.sqrt(2 * x * (x + d1))
    else:
        b = reduced_matrix(Gd, basis).b
        w, U = np.linalg.eigh(b)
        u1, u2 = fix_phase(U[:, 1].astype(complex)).real, fix_phase(U[:, 0].astype(complex)).real
        A1 = u1[0] * V11 + u1[1] * V22
        A2 = u2[0] * V11 + u2[1] * V22
        delta1, delta2 = float(w[1]), float(w[0])
    return A1, A2, delta1, delta2
