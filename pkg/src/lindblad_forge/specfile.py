"""System spec files, initial-state files, JSON reports and trajectory CSV.

A system spec is YAML::

    dimension: 3
    gamma:            # gamma[m][n]: population rate n -> m, row-major
      - [0, 1, 0]
      - [0, 0, 0]
      - [0, 0, 0]
    Gamma:            # observed decoherence (or give `Gd` for pure dephasing)
      - [0, 0.5, 0]
      - [0.5, 0, 0]
      - [0, 0, 0]
    hamiltonian:      # optional, entries are numbers or [re, im] pairs
      - [[0, 0], [1, 0], [0, 0]]
      - ...
    unit_scale: MHz   # optional label, reporting only

or a preset reference::

    preset:
      name: tripod
      params: {gamma: 1.0, alpha: 1.0, beta: 1.0}

At most one of ``Gamma``, ``Gd`` and ``preset`` may be given; with neither
``Gamma`` nor ``Gd`` the model has no pure dephasing.
"""

import csv
import json
from dataclasses import asdict, dataclass, field
from typing import Optional

import numpy as np
import yaml

from .decomp import rates_from_pure_dephasing
from .dissipator import RateSpec
from .errors import LindbladForgeError, ValidationError
from .presets import build_preset

__all__ = [
    "SpecFileError",
    "SystemSpec",
    "parse_matrix",
    "parse_system_spec",
    "load_system_spec",
    "load_density_matrix",
    "ReportDocument",
    "format_complex_matrix",
    "write_trajectory_csv",
    "trajectory_rows",
]

_KEYS = {"dimension", "gamma", "Gamma", "Gd", "hamiltonian", "preset", "unit_scale"}


class SpecFileError(ValidationError):
    """Malformed spec or state file; the message carries the offending location."""


def _num(x, where, allow_complex):
    if isinstance(x, bool):
        raise SpecFileError(f"{where}: expected a number, got {x!r}")
    if isinstance(x, (int, float)):
        return float(x)
    if allow_complex and isinstance(x, (list, tuple)) and len(x) == 2:
        re, im = (_num(v, where, False) for v in x)
        return complex(re, im)
    kind = "a number or [re, im] pair" if allow_complex else "a real number"
    raise SpecFileError(f"{where}: expected {kind}, got {x!r}")


def parse_matrix(obj, N: int, where: str, allow_complex: bool = False) -> np.ndarray:
    """Row-major list-of-lists literal to an ``N x N`` array."""
    if not isinstance(obj, (list, tuple)) or len(obj) != N:
        raise SpecFileError(f"{where}: expected {N} rows")
    rows = []
    for i, row in enumerate(obj):
        if not isinstance(row, (list, tuple)) or len(row) != N:
            raise SpecFileError(f"{where}[{i}]: expected a row of {N} entries")
        rows.append([_num(x, f"{where}[{i}][{j}]", allow_complex) for j, x in enumerate(row)])
    return np.array(rows, dtype=complex if allow_complex else float)


@dataclass(frozen=True)
class SystemSpec:
    rates: RateSpec
    preset: Optional[str] = None
    unit_scale: Optional[str] = None

    @property
    def N(self) -> int:
        return self.rates.N


def parse_system_spec(doc) -> SystemSpec:
    if not isinstance(doc, dict):
        raise SpecFileError("spec: top level must be a mapping")
    extra = set(doc) - _KEYS
    if extra:
        raise SpecFileError(f"spec: unknown key(s) {sorted(extra)}")
    given = [k for k in ("Gamma", "Gd", "preset") if k in doc]
    if len(given) > 1:
        raise SpecFileError(f"spec: give at most one of Gamma, Gd, preset (got {given})")
    unit = doc.get("unit_scale")
    if unit is not None:
        unit = str(unit)
    try:
        if "preset" in doc:
            p = doc["preset"]
            if isinstance(p, str):
                name, params = p, {}
            elif isinstance(p, dict) and "name" in p:
                name, params = p["name"], p.get("params") or {}
            else:
                raise SpecFileError("preset: expected a name or {name, params}")
            if not isinstance(params, dict):
                raise SpecFileError("preset.params: expected a mapping")
            params = {k: _num(v, f"preset.params.{k}", False) for k, v in params.items()}
            try:
                rates = build_preset(name, **params)
            except KeyError as exc:
                raise SpecFileError(f"preset.name: {exc.args[0]}") from None
            if "dimension" in doc and doc["dimension"] != rates.N:
                raise SpecFileError(f"dimension: preset {name!r} has N={rates.N}")
            return SystemSpec(rates, preset=name, unit_scale=unit)

        N = doc.get("dimension")
        if isinstance(N, bool) or not isinstance(N, int) or N < 2:
            raise SpecFileError(f"dimension: expected an integer >= 2, got {N!r}")
        gamma = parse_matrix(doc["gamma"], N, "gamma") if "gamma" in doc else np.zeros((N, N))
        H = parse_matrix(doc["hamiltonian"], N, "hamiltonian", True) if doc.get("hamiltonian") is not None else None
        if "Gamma" in doc:
            rates = RateSpec(gamma, parse_matrix(doc["Gamma"], N, "Gamma"), H)
        else:
            Gd = parse_matrix(doc["Gd"], N, "Gd") if "Gd" in doc else np.zeros((N, N))
            rates = rates_from_pure_dephasing(gamma, Gd, H)
        return SystemSpec(rates, unit_scale=unit)
    except SpecFileError:
        raise
    except LindbladForgeError as exc:
        raise SpecFileError(f"spec: {exc}") from exc


def _load_yaml(path):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return yaml.safe_load(fh)
    except OSError as exc:
        raise SpecFileError(f"{path}: cannot read ({exc.strerror})") from exc
    except yaml.MarkedYAMLError as exc:
        mark = exc.problem_mark
        loc = f"line {mark.line + 1}, column {mark.column + 1}" if mark is not None else "unknown location"
        raise SpecFileError(f"{path}: YAML syntax error at {loc}: {exc.problem}") from exc
    except yaml.YAMLError as exc:
        raise SpecFileError(f"{path}: YAML error: {exc}") from exc


def load_system_spec(path) -> SystemSpec:
    try:
        return parse_system_spec(_load_yaml(path))
    except SpecFileError as exc:
        msg = str(exc)
        if not msg.startswith(str(path)):
            msg = f"{path}: {msg}"
        raise SpecFileError(msg) from exc


def load_density_matrix(path, N: Optional[int] = None, tol: float = 1e-10) -> np.ndarray:
    """Read ``rho0: [[...]]`` (or a bare matrix literal) and check Hermiticity and trace."""
    doc = _load_yaml(path)
    if isinstance(doc, dict):
        if "rho0" not in doc:
            raise SpecFileError(f"{path}: expected key 'rho0'")
        doc = doc["rho0"]
    if not isinstance(doc, list):
        raise SpecFileError(f"{path}: expected a matrix literal")
    n = len(doc) if N is None else N
    rho = parse_matrix(doc, n, f"{path}: rho0", True)
    if np.max(np.abs(rho - rho.conj().T)) > tol:
        raise SpecFileError(f"{path}: rho0 is not Hermitian")
    if abs(np.trace(rho) - 1) > tol:
        raise SpecFileError(f"{path}: rho0 has trace {np.trace(rho).real:.12g}, expected 1")
    return rho


def format_complex_matrix(M) -> list:
    return [[[float(z.real), float(z.imag)] for z in row] for row in np.asarray(M, dtype=complex)]


@dataclass
class ReportDocument:
    command: str
    dimension: int
    cp_ok: bool
    verdicts: dict = field(default_factory=dict)
    margins: dict = field(default_factory=dict)
    kossakowski_spectrum: Optional[list] = None
    channels: Optional[list] = None
    decay_induced: Optional[list] = None
    pure_dephasing: Optional[list] = None
    reduced_matrix: Optional[list] = None
    reduced_spectrum: Optional[list] = None
    residual: Optional[float] = None
    preset: Optional[str] = None
    unit_scale: Optional[str] = None
    messages: list = field(default_factory=list)

    @classmethod
    def from_constraints(cls, command, N, report, **extra) -> "ReportDocument":
        return cls(
            command=command,
            dimension=N,
            cp_ok=bool(report.cp_ok),
            verdicts={c.name: bool(c.satisfied) for c in report.checks},
            margins={c.name: float(c.margin) for c in report.checks},
            **extra,
        )

    @property
    def violated(self) -> list:
        return [k for k, ok in self.verdicts.items() if not ok]

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d) -> "ReportDocument":
        return cls(**d)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, allow_nan=False)

    @classmethod
    def from_json(cls, text) -> "ReportDocument":
        return cls.from_dict(json.loads(text))

    def to_text(self) -> str:
        lines = [f"{self.command}: N={self.dimension} cp_ok={self.cp_ok}"]
        for name, ok in self.verdicts.items():
            lines.append(f"  {'ok  ' if ok else 'FAIL'} {name:<28s} margin={self.margins[name]: .6e}")
        for title, table in (("decay-induced dephasing", self.decay_induced), ("pure dephasing", self.pure_dephasing)):
            if table is not None:
                lines.append(f"  {title}:")
                lines.extend("    " + " ".join(f"{x: .6g}" for x in row) for row in table)
        if self.reduced_spectrum is not None:
            lines.append("  reduced matrix spectrum: " + " ".join(f"{x: .6g}" for x in self.reduced_spectrum))
        if self.channels is not None:
            lines.append(f"  {len(self.channels)} channel(s):")
            for ch in self.channels:
                lines.append(f"    rate {ch['rate']:.9g}")
                for row in ch["operator"]:
                    lines.append("      " + " ".join(f"{re: .4f}{im:+.4f}j" for re, im in row))
        if self.residual is not None:
            lines.append(f"  reassembly residual {self.residual:.3e}")
        for msg in self.messages:
            lines.append(f"  note: {msg}")
        return "\n".join(lines)


def trajectory_rows(traj):
    N = traj.states.shape[1]
    header = ["t"] + [f"lambda_{k}" for k in range(1, N + 1)] + ["trace_residual", "hermiticity_residual"]
    rows = []
    tr, herm = traj.trace_residual, traj.hermiticity_residual
    for j, t in enumerate(traj.times):
        values = [t, *traj.spectra[j], tr[j], herm[j]]
        rows.append([f"{float(v):.15e}" for v in values])
    return header, rows


def write_trajectory_csv(traj, path):
    header, rows = trajectory_rows(traj)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        w.writerows(rows)
