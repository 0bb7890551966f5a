"""Time evolution of density matrices under ``-i[H, rho] + L_D rho`` (hbar = 1).

Positivity is monitored, never enforced: the eigenvalue curves are the
diagnostic for unphysical generators.
"""

from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.linalg import expm

from .dissipator import hamiltonian_superoperator, trace_row_residual
from .errors import ContractViolation, DimensionError
from .matcore import unvectorize, vectorize

__all__ = [
    "EvolutionConfig",
    "Trajectory",
    "generator",
    "propagate",
    "analytic_decay3",
    "analytic_dephase3",
    "positivity_breach",
    "uniform_superposition",
    "check_density_matrix",
]

METHODS = ("expm", "rk4")


@dataclass(frozen=True)
class EvolutionConfig:
    t_final: float
    steps: int = 500
    method: str = "expm"

    def __post_init__(self):
        if not self.t_final > 0:
            raise ValueError(f"t_final must be positive, got {self.t_final}")
        if int(self.steps) != self.steps or self.steps < 1:
            raise ValueError(f"steps must be a positive integer, got {self.steps}")
        if self.method not in METHODS:
            raise ValueError(f"method must be one of {METHODS}, got {self.method!r}")

    @property
    def times(self) -> np.ndarray:
        return np.linspace(0.0, self.t_final, int(self.steps) + 1)


@dataclass(frozen=True)
class Trajectory:
    """Sampled states ``states[j] = rho(times[j])`` with their spectra."""

    times: np.ndarray
    states: np.ndarray
    spectra: np.ndarray = field(init=False)

    def __post_init__(self):
        herm = 0.5 * (self.states + np.conj(np.swapaxes(self.states, -1, -2)))
        object.__setattr__(self, "spectra", np.linalg.eigvalsh(herm))

    @property
    def min_eigenvalue_curve(self) -> np.ndarray:
        return self.spectra[:, 0]

    @property
    def trace_residual(self) -> np.ndarray:
        return np.abs(np.trace(self.states, axis1=1, axis2=2) - 1.0)

    @property
    def hermiticity_residual(self) -> np.ndarray:
        diff = self.states - np.conj(np.swapaxes(self.states, -1, -2))
        return np.max(np.abs(diff), axis=(1, 2))

    def __len__(self):
        return len(self.times)


def check_density_matrix(rho, tol: float = 1e-10) -> np.ndarray:
    """Validate Hermiticity and unit trace; positivity is deliberately not required."""
    rho = np.asarray(rho, dtype=complex)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise DimensionError(f"density matrix must be square, got {rho.shape}")
    if np.max(np.abs(rho - rho.conj().T)) > tol:
        raise ContractViolation("density matrix is not Hermitian")
    if abs(np.trace(rho) - 1.0) > tol:
        raise ContractViolation(f"density matrix has trace {np.trace(rho).real:.12g}, expected 1")
    return rho


def uniform_superposition(N: int) -> np.ndarray:
    """``|psi><psi|`` with ``psi = (1, ..., 1) / sqrt(N)``."""
    return np.full((N, N), 1.0 / N, dtype=complex)


def generator(LD, H=None) -> np.ndarray:
    LD = np.asarray(LD, dtype=complex)
    if H is None:
        return LD
    return -1j * hamiltonian_superoperator(H) + LD


def propagate(rho0, LD, cfg: EvolutionConfig, H=None, tp_tol: float = 1e-10) -> Trajectory:
    """Sample ``rho(t)`` on ``cfg.times``.

    ``"expm"`` applies the exact one-step map ``exp(dt G)`` repeatedly; ``"rk4"``
    uses classical fourth-order Runge-Kutta with the same step.
    """
    rho0 = check_density_matrix(rho0)
    N = rho0.shape[0]
    LD = np.asarray(LD, dtype=complex)
    if LD.shape != (N * N, N * N):
        raise DimensionError(f"superoperator must be {N * N}x{N * N}, got {LD.shape}")
    scale = 1.0 + float(np.max(np.abs(LD))) if LD.size else 1.0
    if trace_row_residual(LD) > tp_tol * scale:
        raise ContractViolation("dissipator is not trace preserving")
    G = generator(LD, H)
    times = cfg.times
    dt = times[1] - times[0]
    if cfg.method == "expm":
        step = expm(dt * G)
    else:
        I = np.eye(N * N)
        k1 = G
        k2 = G @ (I + 0.5 * dt * k1)
        k3 = G @ (I + 0.5 * dt * k2)
        k4 = G @ (I + dt * k3)
        step = I + dt / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4)
    vecs = np.empty((len(times), N * N), dtype=complex)
    vecs[0] = vectorize(rho0)
    for j in range(1, len(times)):
        vecs[j] = step @ vecs[j - 1]
    states = np.array([unvectorize(v, N) for v in vecs])
    return Trajectory(times, states)


def _check3(rho0):
    rho0 = np.asarray(rho0, dtype=complex)
    if rho0.shape != (3, 3):
        raise DimensionError("analytic three-level solutions need a 3x3 initial state")
    return rho0


def analytic_decay3(rho0, gamma12: float, t: float) -> np.ndarray:
    """Closed-form state for decay 2 -> 1 with coherence 1-2 damped at ``gamma12 / 2`` only."""
    rho0 = _check3(rho0)
    e = np.exp(-t * gamma12)
    h = np.exp(-t * gamma12 / 2)
    rho = rho0.copy()
    rho[0, 0] = rho0[0, 0] + (1 - e) * rho0[1, 1]
    rho[1, 1] = e * rho0[1, 1]
    rho[0, 1] = h * rho0[0, 1]
    rho[1, 0] = h * rho0[1, 0]
    return rho


def analytic_dephase3(rho0, Gamma12: float, t: float) -> np.ndarray:
    """Closed-form state when only the 1-2 coherence decays, at ``Gamma12``."""
    rho0 = _check3(rho0)
    rho = rho0.copy()
    rho[0, 1] *= np.exp(-Gamma12 * t)
    rho[1, 0] *= np.exp(-Gamma12 * t)
    return rho


def positivity_breach(traj: Trajectory, tol: float = 1e-9) -> Optional[float]:
    """First sample time whose minimum eigenvalue drops below ``-tol``."""
    bad = np.flatnonzero(traj.min_eigenvalue_curve < -tol)
    return float(traj.times[bad[0]]) if bad.size else None
