"""Standard three- and four-level atomic relaxation models.

Each preset is parameterized by physical knobs (excited-state decay rate
``gamma``, pure dephasing scale ``dephasing``, dimensionless ratios ``alpha``
and ``beta``) and returns a :class:`~lindblad_forge.dissipator.RateSpec` whose
observed decoherence is decay-induced dephasing plus the declared pure
dephasing.  Out-of-range parameters raise :class:`ValidationError`.
"""

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .constraints import ConstraintReport, _tol, fourlevel_sufficient, margin_check
from .decomp import PureDephasingRates, rates_from_pure_dephasing
from .dissipator import RateSpec
from .errors import ValidationError

__all__ = [
    "Preset",
    "PRESETS",
    "list_presets",
    "get_preset",
    "build_preset",
    "LambdaVComparison",
    "compare_lambda_v",
    "TripodReport",
    "tripod_dephasing_conditions",
    "tripod_gd",
]


@dataclass(frozen=True)
class Param:
    name: str
    default: Optional[float]
    doc: str


@dataclass(frozen=True)
class Preset:
    name: str
    N: int
    summary: str
    params: tuple
    builder: Callable

    def defaults(self) -> dict:
        return {p.name: p.default for p in self.params}

    def describe(self) -> str:
        lines = [f"{self.name} (N={self.N})", f"  {self.summary}", "  parameters:"]
        for p in self.params:
            default = "derived" if p.default is None else f"{p.default:g}"
            lines.append(f"    {p.name} = {default}: {p.doc}")
        return "\n".join(lines)


def _gamma(N, entries):
    g = np.zeros((N, N))
    for (m, n), v in entries.items():
        g[m - 1, n - 1] = v
    return g


def _nonneg(**values):
    for name, v in values.items():
        if not (v >= 0 and math.isfinite(v)):
            raise ValidationError(f"{name} must be a finite non-negative rate, got {v}")


def _alpha_range(alpha, what):
    if not 0 <= alpha <= 4:
        raise ValidationError(f"alpha must lie in [0, 4] ({what} <= 4x the adjacent dephasing), got {alpha}")


def _three_level(gamma_entries, dephasing, alpha):
    _nonneg(dephasing=dephasing)
    _alpha_range(alpha, "outer-transition pure dephasing")
    Gd = PureDephasingRates.from_pairs(3, {(1, 2): dephasing, (2, 3): dephasing, (1, 3): alpha * dephasing})
    return rates_from_pure_dephasing(_gamma(3, gamma_entries), Gd)


def _ladder3(gamma12=1.0, gamma23=1.0, gamma13=0.0, dephasing=0.0, alpha=1.0):
    _nonneg(gamma12=gamma12, gamma23=gamma23, gamma13=gamma13)
    return _three_level({(1, 2): gamma12, (2, 3): gamma23, (1, 3): gamma13}, dephasing, alpha)


def _lambda3(gamma=1.0, dephasing=0.5, alpha=1.0):
    _nonneg(gamma=gamma)
    return _three_level({(1, 2): gamma / 2, (3, 2): gamma / 2}, dephasing, alpha)


def _v3(gamma=1.0, dephasing=0.5, alpha=1.0):
    _nonneg(gamma=gamma)
    return _three_level({(2, 1): gamma, (2, 3): gamma}, dephasing, alpha)


def _require_cp4(Gd, what):
    report = fourlevel_sufficient(Gd)
    if not report.cp_ok:
        names = ", ".join(c.name for c in report.violated)
        raise ValidationError(f"{what}: pure dephasing rates are not completely positive ({names})")


def _degenerate4(gamma12=1 / 3, gamma32=2 / 3, gamma14=2 / 3, gamma34=1 / 3,
                 dephasing=0.5, dephasing_cross=None, dephasing_ground=0.0, alpha=1.0):
    _nonneg(gamma12=gamma12, gamma32=gamma32, gamma14=gamma14, gamma34=gamma34,
            dephasing=dephasing, dephasing_ground=dephasing_ground)
    cross = dephasing if dephasing_cross is None else dephasing_cross
    _nonneg(dephasing_cross=cross)
    if dephasing_ground == 0:
        if not math.isclose(cross, dephasing, rel_tol=1e-12, abs_tol=1e-15):
            raise ValidationError(
                "a decoherence-free ground transition (dephasing_ground = 0) needs "
                f"dephasing_cross == dephasing, got {cross} vs {dephasing}"
            )
        _alpha_range(alpha, "excited-transition pure dephasing")
    Gd = PureDephasingRates.from_pairs(4, {
        (1, 2): dephasing, (3, 4): dephasing,
        (1, 4): cross, (2, 3): cross,
        (1, 3): dephasing_ground, (2, 4): alpha * dephasing,
    })
    _require_cp4(Gd, "degenerate4")
    gamma = _gamma(4, {(1, 2): gamma12, (3, 2): gamma32, (1, 4): gamma14, (3, 4): gamma34})
    return rates_from_pure_dephasing(gamma, Gd)


def _degenerate4_cg(gamma=1.0, dephasing=0.5, alpha=1.0):
    _nonneg(gamma=gamma)
    return _degenerate4(gamma / 3, 2 * gamma / 3, 2 * gamma / 3, gamma / 3,
                        dephasing=dephasing, dephasing_ground=0.0, alpha=alpha)


def tripod_gd(dephasing, alpha, beta) -> PureDephasingRates:
    """Ground-excited pairs at ``dephasing``, adjacent ground pairs at ``alpha``, outer ground pair at ``beta`` (relative)."""
    return PureDephasingRates.from_pairs(4, {
        (1, 4): dephasing, (2, 4): dephasing, (3, 4): dephasing,
        (1, 2): alpha * dephasing, (2, 3): alpha * dephasing, (1, 3): beta * dephasing,
    })


def _tripod_common(dephasing, alpha, beta):
    _nonneg(dephasing=dephasing)
    if dephasing > 0:
        report = tripod_dephasing_conditions(alpha, beta)
        if not report.cp_ok:
            names = ", ".join(c.name for c in report.violated)
            raise ValidationError(
                f"tripod dephasing ratios need beta >= 0, p >= 0 and q >= 0, i.e. "
                f"alpha(4 - alpha) >= beta >= 0; got alpha={alpha}, beta={beta} ({names})"
            )
    return tripod_gd(dephasing, alpha, beta)


def _tripod(gamma=1.0, dephasing=1.0, alpha=1.0, beta=1.0):
    _nonneg(gamma=gamma)
    Gd = _tripod_common(dephasing, alpha, beta)
    gamma_m = _gamma(4, {(1, 4): gamma / 3, (2, 4): gamma / 3, (3, 4): gamma / 3})
    return rates_from_pure_dephasing(gamma_m, Gd)


def _inverted_tripod(gamma=1.0, dephasing=1.0, alpha=1.0, beta=1.0):
    _nonneg(gamma=gamma)
    Gd = _tripod_common(dephasing, alpha, beta)
    gamma_m = _gamma(4, {(4, 1): gamma, (4, 2): gamma, (4, 3): gamma})
    return rates_from_pure_dephasing(gamma_m, Gd)


_G = Param("gamma", 1.0, "total spontaneous decay rate of each excited level (1/lifetime)")
_GD = Param("dephasing", 0.5, "pure dephasing rate of the ground-excited transitions")
_ALPHA3 = Param("alpha", 1.0, "outer-transition pure dephasing in units of `dephasing`, 0 <= alpha <= 4")

PRESETS = {
    p.name: p
    for p in [
        Preset("ladder3", 3, "cascade 3 -> 2 -> 1 (optional direct 3 -> 1); adjacent pure dephasing equal",
               (Param("gamma12", 1.0, "decay rate 2 -> 1"), Param("gamma23", 1.0, "decay rate 3 -> 2"),
                Param("gamma13", 0.0, "decay rate 3 -> 1"),
                Param("dephasing", 0.0, "pure dephasing of transitions 1-2 and 2-3"), _ALPHA3),
               _ladder3),
        Preset("lambda3_symmetric", 3,
               "excited level 2 decays equally to ground levels 1 and 3 (gamma12 = gamma32 = gamma/2)",
               (_G, _GD, _ALPHA3), _lambda3),
        Preset("v3_symmetric", 3, "excited levels 1 and 3 both decay to ground level 2 at gamma",
               (_G, _GD, _ALPHA3), _v3),
        Preset("degenerate4", 4,
               "doubly degenerate ground (1, 3) and excited (2, 4) levels with explicit branching rates",
               (Param("gamma12", 1 / 3, "decay 2 -> 1"), Param("gamma32", 2 / 3, "decay 2 -> 3"),
                Param("gamma14", 2 / 3, "decay 4 -> 1"), Param("gamma34", 1 / 3, "decay 4 -> 3"),
                Param("dephasing", 0.5, "pure dephasing of 1-2 and 3-4"),
                Param("dephasing_cross", None, "pure dephasing of 1-4 and 2-3 (defaults to `dephasing`)"),
                Param("dephasing_ground", 0.0, "pure dephasing of the ground pair 1-3"),
                Param("alpha", 1.0, "excited pair 2-4 pure dephasing in units of `dephasing`")),
               _degenerate4),
        Preset("degenerate4_clebsch_gordan", 4,
               "doubly degenerate levels with Clebsch-Gordan branching 1/3 and 2/3; ground pair decoherence free",
               (_G, _GD, Param("alpha", 1.0, "excited pair 2-4 pure dephasing in units of `dephasing`, 0 <= alpha <= 4")),
               _degenerate4_cg),
        Preset("tripod", 4,
               "non-degenerate excited level 4 decays equally to three ground levels (gamma/3 each)",
               (_G, Param("dephasing", 1.0, "pure dephasing of the ground-excited transitions"),
                Param("alpha", 1.0, "adjacent ground pairs 1-2, 2-3 in units of `dephasing`"),
                Param("beta", 1.0, "outer ground pair 1-3 in units of `dephasing`; needs alpha(4-alpha) >= beta >= 0")),
               _tripod),
        Preset("inverted_tripod", 4,
               "three degenerate excited levels each decay to ground level 4 at gamma",
               (_G, Param("dephasing", 1.0, "pure dephasing of the excited-ground transitions"),
                Param("alpha", 1.0, "adjacent excited pairs 1-2, 2-3 in units of `dephasing`"),
                Param("beta", 1.0, "outer excited pair 1-3 in units of `dephasing`; needs alpha(4-alpha) >= beta >= 0")),
               _inverted_tripod),
    ]
}


def list_presets() -> list:
    return list(PRESETS)


def get_preset(name: str) -> Preset:
    try:
        return PRESETS[name]
    except KeyError:
        raise KeyError(f"unknown preset {name!r}; available: {', '.join(PRESETS)}") from None


def build_preset(name: str, **params) -> RateSpec:
    preset = get_preset(name)
    known = {p.name for p in preset.params}
    unknown = set(params) - known
    if unknown:
        raise ValidationError(f"preset {name!r} has no parameter(s) {sorted(unknown)}")
    return preset.builder(**params)


@dataclass(frozen=True)
class LambdaVComparison:
    Gamma12: float
    Gamma23: float
    Gamma13_lambda: float
    Gamma13_v: float

    @property
    def lambda_exceeds_v(self) -> bool:
        return self.Gamma13_lambda > self.Gamma13_v


def compare_lambda_v(gamma: float, dephasing: float, alpha_lambda: float, alpha_v: float) -> LambdaVComparison:
    """Observed decoherence of symmetric Lambda and V systems with matched lifetime and dephasing."""
    lam = build_preset("lambda3_symmetric", gamma=gamma, dephasing=dephasing, alpha=alpha_lambda)
    v = build_preset("v3_symmetric", gamma=gamma, dephasing=dephasing, alpha=alpha_v)
    for i, j in ((0, 1), (1, 2)):
        if not math.isclose(lam.Gamma[i, j], v.Gamma[i, j], rel_tol=1e-12, abs_tol=1e-15):
            raise AssertionError("ground-excited decoherence differs between Lambda and V")
    return LambdaVComparison(
        Gamma12=float(lam.Gamma[0, 1]),
        Gamma23=float(lam.Gamma[1, 2]),
        Gamma13_lambda=float(lam.Gamma[0, 2]),
        Gamma13_v=float(v.Gamma[0, 2]),
    )


@dataclass(frozen=True)
class TripodReport(ConstraintReport):
    p: float = 0.0
    q: float = 0.0
    eigenvalues: tuple = ()


def tripod_dephasing_conditions(alpha: float, beta: float, tol: Optional[float] = None) -> TripodReport:
    """Positivity of tripod pure dephasing with ratios ``alpha``, ``beta`` (dephasing scale 1).

    The reduced matrix has eigenvalue ``beta`` (eigenvector ``e11 - e33``) and
    the two roots of ``lambda^2 - (p/2) lambda + q`` with ``p = 3 + 2 alpha - beta``
    and ``q = (4 alpha - alpha^2 - beta) / 2``.  The verdict is
    ``beta >= 0 and p >= 0 and q >= 0``.
    """
    tol = _tol(tol)
    p = 3 + 2 * alpha - beta
    q = (4 * alpha - alpha * alpha - beta) / 2
    half = p / 2
    disc = math.sqrt(max(half * half - 4 * q, 0.0))
    eig = tuple(sorted((float(beta), (half - disc) / 2, (half + disc) / 2)))
    scale = max(1.0, abs(alpha), abs(beta))
    checks = (
        margin_check("tripod(beta>=0)", beta, scale, tol),
        margin_check("tripod(p>=0)", p, scale, tol),
        margin_check("tripod(q>=0)", q, scale, tol),
    )
    ok = all(c.satisfied for c in checks)
    return TripodReport(cp_ok=ok, b_min_eigenvalue=eig[0], checks=checks, p=p, q=q, eigenvalues=eig)
