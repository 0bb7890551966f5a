"""Complete-positivity decisions for phenomenological relaxation rates.

The generic test is spectral: all population rates non-negative and the
reduced dephasing matrix ``b`` positive semidefinite.  For three and four
levels the same question has closed-form answers in terms of the pure
dephasing rates; those are implemented here as independent routes and cross
checked against the spectral test in the test suite.

Every inequality is reported as a signed margin (``>= 0`` means satisfied).
Tolerance is applied once, at the eigenvalue level: ``b`` is accepted when
``b + tau I`` is positive semidefinite, ``tau = tol * (1 + scale)`` with
``scale`` the largest pure dephasing rate.  Adding ``tau`` to every pure
dephasing rate shifts ``b`` by exactly ``tau I`` in any orthonormal basis, so
each closed-form inequality is decided on the shifted rates and only a
roundoff guard remains.  Spectral and closed-form verdicts therefore agree up
to floating point error rather than up to a tolerance band.  Check names are
stable output keys.
"""

import math
import os
from dataclasses import dataclass, field
from itertools import combinations
from typing import Optional

import numpy as np

from .basis import canonical_basis
from .decomp import PureDephasingRates, pure_dephasing, reduced_matrix
from .dissipator import RateSpec
from .errors import DimensionError

__all__ = [
    "DEFAULT_TOL",
    "default_tol",
    "Check",
    "ConstraintReport",
    "spectral_check",
    "threelevel_closed_form",
    "fourlevel_necessary",
    "fourlevel_sufficient",
    "principal_minor_checks",
    "distance_rates",
    "distance_case",
    "full_validate",
]

DEFAULT_TOL = 1e-10
TOL_ENV = "LINDBLAD_FORGE_TOL"


def default_tol() -> float:
    """Boundary tolerance, overridable through ``LINDBLAD_FORGE_TOL``."""
    raw = os.environ.get(TOL_ENV)
    if raw is None or raw.strip() == "":
        return DEFAULT_TOL
    return float(raw)


@dataclass(frozen=True)
class Check:
    name: str
    satisfied: bool
    margin: float


@dataclass(frozen=True)
class ConstraintReport:
    cp_ok: bool
    gamma_ok: bool = True
    b_min_eigenvalue: Optional[float] = None
    checks: tuple = field(default_factory=tuple)
    necessary_only: bool = False

    @property
    def violated(self) -> tuple:
        return tuple(c for c in self.checks if not c.satisfied)

    @property
    def names(self) -> tuple:
        return tuple(c.name for c in self.checks)

    def check(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def as_dict(self) -> dict:
        return {
            "cp_ok": self.cp_ok,
            "gamma_ok": self.gamma_ok,
            "b_min_eigenvalue": self.b_min_eigenvalue,
            "necessary_only": self.necessary_only,
            "checks": [{"name": c.name, "satisfied": c.satisfied, "margin": c.margin} for c in self.checks],
        }


def _tol(tol):
    return default_tol() if tol is None else tol


ROUNDOFF = 64 * np.finfo(float).eps


def margin_check(name, margin, scale, tol) -> Check:
    """Plain rule ``margin >= -tol * (1 + scale)``."""
    margin = float(margin)
    return Check(name, margin >= -tol * (1.0 + scale), margin)


def _shift(scale, tol) -> float:
    return tol * (1.0 + scale)


def _decide(terms, shifted) -> tuple:
    """Pair reported margins with verdicts taken from the shifted evaluation.

    ``terms`` and ``shifted`` are matching lists of ``(name, margin, mag)``
    where ``mag`` is the magnitude of the summands that produced the margin;
    a shifted margin is accepted down to ``-ROUNDOFF * mag``.
    """
    out = []
    for (name, margin, _), (name2, sm, mag) in zip(terms, shifted):
        assert name == name2
        out.append(Check(name, float(sm) >= -ROUNDOFF * float(mag), float(margin)))
    return tuple(out)


def _as_gd(Gd, N) -> PureDephasingRates:
    if not isinstance(Gd, PureDephasingRates):
        Gd = PureDephasingRates(Gd)
    if Gd.N != N:
        raise DimensionError(f"expected {N}-level pure dephasing rates, got N={Gd.N}")
    return Gd


def _shifted(Gd: PureDephasingRates, tau) -> PureDephasingRates:
    N = Gd.N
    return PureDephasingRates(Gd.Gd + tau * (1.0 - np.eye(N)))


def _gd_scale(Gd) -> float:
    return float(np.max(np.abs(Gd.Gd)))


def spectral_check(rates: RateSpec, tol: Optional[float] = None) -> ConstraintReport:
    """Decide complete positivity for any N from ``gamma`` signs and the spectrum of ``b``."""
    tol = _tol(tol)
    N = rates.N
    off = ~np.eye(N, dtype=bool)
    min_gamma = float(np.min(rates.gamma[off]))
    gamma_check = margin_check("gamma>=0", min_gamma, float(np.max(np.abs(rates.gamma))), tol)
    Gd = pure_dephasing(rates)
    b = reduced_matrix(Gd, canonical_basis(N))
    lam = b.min_eigenvalue
    spec = margin_check("spectral", lam, _gd_scale(Gd), tol)
    return ConstraintReport(
        cp_ok=gamma_check.satisfied and spec.satisfied,
        gamma_ok=gamma_check.satisfied,
        b_min_eigenvalue=lam,
        checks=(gamma_check, spec),
    )


_PAIRS3 = ("12", "13", "23")


def _three_terms(g12, g13, g23, with_roots):
    S = g12 + g13 + g23
    P = g12 * g13 + g12 * g23 + g13 * g23
    A = abs(g12) + abs(g13) + abs(g23)
    upper = 2.0 * math.sqrt(P) - S if P >= 0 else -(abs(S) + 2.0 * math.sqrt(-P))
    terms = [("Eq26-lower", S, A), ("Eq26-upper", upper, 3.0 * A)]
    rates = dict(zip(_PAIRS3, (g12, g13, g23)))
    terms += [(f"Gd{k}>=0", v, abs(v)) for k, v in rates.items()]
    if with_roots:
        for a in _PAIRS3:
            b, c = (k for k in _PAIRS3 if k != a)
            rb, rc = math.sqrt(max(rates[b], 0.0)), math.sqrt(max(rates[c], 0.0))
            terms.append((f"Eq27({a}|{b},{c})-lower", rates[a] - (rb - rc) ** 2, A))
            terms.append((f"Eq27({a}|{b},{c})-upper", (rb + rc) ** 2 - rates[a], A))
    else:
        # the square-root form presupposes nonnegative rates, so a negative one fails it outright
        m = min(rates.values())
        terms.append(("Eq27(nonnegative)", m, abs(m)))
    return terms


def threelevel_closed_form(Gd, tol: Optional[float] = None) -> ConstraintReport:
    """Double inequality on the sum of the three pure dephasing rates, plus its square-root form."""
    tol = _tol(tol)
    Gd = _as_gd(Gd, 3)
    scale = _gd_scale(Gd)
    tau = _shift(scale, tol)
    g = (Gd[1, 2], Gd[1, 3], Gd[2, 3])
    gs = tuple(v + tau for v in g)
    roots = all(v >= 0 for v in gs)
    checks = _decide(_three_terms(*g, roots), _three_terms(*gs, roots))

    # eigenvalues of the 2x2 reduced matrix are (S -+ x) / 3; x is built from
    # differences so that nearly equal rates do not cancel catastrophically
    d1 = 2.0 * g[0] - g[1] - g[2]
    d2 = g[1] - g[2]
    lam_min = (sum(g) - math.sqrt(d1 * d1 + 3.0 * d2 * d2)) / 3.0
    ok = all(c.satisfied for c in checks)
    return ConstraintReport(cp_ok=ok, b_min_eigenvalue=lam_min, checks=checks)


def _pair_sums(Gd):
    return {
        "12+34": Gd[1, 2] + Gd[3, 4],
        "13+24": Gd[1, 3] + Gd[2, 4],
        "14+23": Gd[1, 4] + Gd[2, 3],
    }


def _necessary_terms(Gd):
    sums = _pair_sums(Gd)
    A = sum(abs(Gd[m, n]) for m, n in combinations(range(1, 5), 2))
    terms = []
    for key in ("13+24", "14+23", "12+34"):
        others = sum(v for k, v in sums.items() if k != key)
        terms.append((f"Eq34({key})", others - sums[key], A))
    products = {
        "12*34": ("14+23", "13+24", Gd[1, 2] * Gd[3, 4]),
        "14*23": ("12+34", "13+24", Gd[1, 4] * Gd[2, 3]),
        "13*24": ("12+34", "14+23", Gd[1, 3] * Gd[2, 4]),
    }
    for key, (s1, s2, prod) in products.items():
        terms.append((f"Eq35({key})", 4.0 * prod - (sums[s1] - sums[s2]) ** 2, 4.0 * abs(prod) + A * A))
    return terms


def fourlevel_necessary(Gd, tol: Optional[float] = None) -> ConstraintReport:
    """Triangle inequalities on the pair sums and the product inequalities (necessary only)."""
    tol = _tol(tol)
    Gd = _as_gd(Gd, 4)
    scale = _gd_scale(Gd)
    tau = _shift(scale, tol)
    checks = _decide(_necessary_terms(Gd), _necessary_terms(_shifted(Gd, tau)))
    ok = all(c.satisfied for c in checks)
    return ConstraintReport(cp_ok=ok, checks=checks, necessary_only=True)


def _minor_terms(b, prefix):
    b11, b22, b33 = b[0, 0], b[1, 1], b[2, 2]
    b12, b13, b23 = b[0, 1], b[0, 2], b[1, 2]
    plus = (b11 * b22 * b33, 2 * b12 * b13 * b23)
    minus = (b11 * b23**2, b22 * b13**2, b33 * b12**2)
    expanded = sum(plus) - sum(minus)
    # LU determinant: backward error of order eps |b| perturbs det by at most |adj b| times that
    sv = np.linalg.svd(b, compute_uv=False)
    return [
        (f"{prefix}-b11", b11, abs(b11)),
        (f"{prefix}-minor12", b11 * b22 - b12**2, abs(b11 * b22) + b12**2),
        (f"{prefix}-det", float(np.linalg.det(b)), sv[0] * sv[0] * sv[1]),
        ("Eq32", expanded, sum(abs(t) for t in plus + minus)),
        (f"{prefix}-b22", b22, abs(b22)),
        (f"{prefix}-b33", b33, abs(b33)),
        (f"{prefix}-minor13", b11 * b33 - b13**2, abs(b11 * b33) + b13**2),
        (f"{prefix}-minor23", b22 * b33 - b23**2, abs(b22 * b33) + b23**2),
    ]


def principal_minor_checks(b, prefix: str = "Eq31", tol: Optional[float] = None, shift: Optional[float] = None) -> tuple:
    """Signed principal-minor margins of a real symmetric 3x3 matrix.

    The leading minors ``b11``, ``b11 b22 - b12^2`` and ``det b`` come first,
    then the expanded determinant form and the remaining principal minors.
    Leading minors alone do not certify semidefiniteness when ``b11 = 0``; all
    principal minors together do.  Verdicts are taken on ``b + shift I``
    (default ``shift = tol * (1 + max|b|)``).
    """
    b = np.asarray(b, dtype=float)
    scale = float(np.max(np.abs(b)))
    if shift is None:
        shift = _shift(scale, _tol(tol))
    return _decide(_minor_terms(b, prefix), _minor_terms(b + shift * np.eye(3), prefix))


def fourlevel_sufficient(Gd, tol: Optional[float] = None) -> ConstraintReport:
    """Minor test on the canonical-basis reduced matrix; equivalent to positivity of ``b``."""
    tol = _tol(tol)
    Gd = _as_gd(Gd, 4)
    b = reduced_matrix(Gd, canonical_basis(4)).b
    tau = _shift(_gd_scale(Gd), tol)
    checks = principal_minor_checks(b, "Eq31", shift=tau)
    ok = all(c.satisfied for c in checks)
    return ConstraintReport(cp_ok=ok, b_min_eigenvalue=float(np.linalg.eigvalsh(b)[0]), checks=checks)


def distance_rates(G1: float, G2: float, G3: float) -> PureDephasingRates:
    """Four-level pure dephasing that depends only on level distance ``|m - n|``."""
    rate = {1: G1, 2: G2, 3: G3}
    return PureDephasingRates.from_pairs(4, {(m, n): rate[n - m] for m in range(1, 5) for n in range(m + 1, 5)})


def _distance_terms(G1, G2, G3):
    A = abs(G1) + abs(G2) + abs(G3)
    return [
        ("Eq39-40(lower)", G3 - (2 * G2 - 3 * G1), 3.0 * A),
        ("Eq39-40(upper)", 2 * G2 + G1 - G3, 2.0 * A),
        ("Eq39-40(product)", G1 * G3 - (G1 - G2) ** 2, abs(G1 * G3) + (abs(G1) + abs(G2)) ** 2),
        ("Eq37(G2<=4G1)", 4 * G1 - G2, 4.0 * A),
        ("Eq37(G3<=9G1)", 9 * G1 - G3, 9.0 * A),
    ]


def distance_case(G1: float, G2: float, G3: float, tol: Optional[float] = None) -> ConstraintReport:
    """Exact positivity conditions when pure dephasing depends only on level distance.

    The first three inequalities are necessary and sufficient (they are the
    diagonal entry, the decoupled entry and the determinant of the nonzero
    block of the sign-pattern reduced matrix); the quadratic-distance bounds
    follow from them.
    """
    tol = _tol(tol)
    scale = max(abs(G1), abs(G2), abs(G3))
    tau = _shift(scale, tol)
    checks = _decide(_distance_terms(G1, G2, G3), _distance_terms(G1 + tau, G2 + tau, G3 + tau))
    # reduced matrix in the sign-pattern basis: b22 decoupled, {b11, b33, b13} block
    b11 = 0.5 * (3 * G1 - 2 * G2 + G3)
    b22 = 0.5 * (G1 + 2 * G2 - G3)
    b33 = 0.5 * (-G1 + 2 * G2 + G3)
    b13 = 0.5 * (G3 - G1)
    half_tr = 0.5 * (b11 + b33)
    block_min = half_tr - math.sqrt(max(0.25 * (b11 - b33) ** 2 + b13 * b13, 0.0))
    ok = all(c.satisfied for c in checks)
    return ConstraintReport(cp_ok=ok, b_min_eigenvalue=min(b22, block_min), checks=checks)


def full_validate(rates: RateSpec, tol: Optional[float] = None) -> ConstraintReport:
    """Spectral verdict plus every closed-form family available for ``rates.N``.

    ``cp_ok`` and ``b_min_eigenvalue`` come from the spectral test, which
    covers any N; the closed-form checks are appended so that a failing
    dataset names the inequalities it breaks.
    """
    if not isinstance(rates, RateSpec):
        raise TypeError("full_validate expects a RateSpec")
    tol = _tol(tol)
    spectral = spectral_check(rates, tol)
    Gd = pure_dephasing(rates)
    checks = list(spectral.checks)
    if rates.N == 3:
        checks += threelevel_closed_form(Gd, tol).checks
    elif rates.N == 4:
        checks += fourlevel_necessary(Gd, tol).checks
        checks += fourlevel_sufficient(Gd, tol).checks
    else:
        # pairwise nonnegativity is necessary for every N
        scale = _gd_scale(Gd)
        for m, n in combinations(range(1, rates.N + 1), 2):
            checks.append(margin_check(f"Gd{m}{n}>=0", Gd[m, n], scale, tol))
    return ConstraintReport(
        cp_ok=spectral.cp_ok,
        gamma_ok=spectral.gamma_ok,
        b_min_eigenvalue=spectral.b_min_eigenvalue,
        checks=tuple(checks),
    )
