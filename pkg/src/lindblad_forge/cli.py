"""``lindblad-forge`` command line.

Exit status is 0 when the model is completely positive, 1 when a positivity
constraint is violated and 2 for unreadable or malformed input.
"""

import argparse
import sys

import numpy as np

from . import __version__
from .constraints import full_validate
from .decomp import decay_induced_dephasing, pure_dephasing, reduced_matrix
from .dissipator import build_phenomenological, kossakowski_expand
from .errors import LindbladForgeError, NotCompletelyPositiveError
from .evolve import EvolutionConfig, propagate, uniform_superposition
from .lindblad import diagonalize, reconstruct
from .presets import get_preset, list_presets
from .specfile import (
    ReportDocument,
    SpecFileError,
    format_complex_matrix,
    load_density_matrix,
    load_system_spec,
    write_trajectory_csv,
)

EXIT_OK, EXIT_VIOLATION, EXIT_INPUT = 0, 1, 2


def _emit(doc: ReportDocument, args):
    text = doc.to_text() if args.format == "text" else doc.to_json()
    if args.report:
        with open(args.report, "w", encoding="utf-8") as fh:
            fh.write(doc.to_json() + "\n")
    print(text)


def _status(cp_ok: bool) -> int:
    return EXIT_OK if cp_ok else EXIT_VIOLATION


def _base_report(command, spec, report):
    return ReportDocument.from_constraints(
        command,
        spec.N,
        report,
        preset=spec.preset,
        unit_scale=spec.unit_scale,
    )


def _kossakowski_spectrum(rates):
    a = kossakowski_expand(build_phenomenological(rates))
    return a, [float(x) for x in a.spectrum.eigenvalues]


def cmd_validate(args) -> int:
    spec = load_system_spec(args.spec)
    report = full_validate(spec.rates)
    doc = _base_report("validate", spec, report)
    doc.kossakowski_spectrum = _kossakowski_spectrum(spec.rates)[1] if report.gamma_ok else None
    if not report.cp_ok:
        doc.messages.append("violated: " + ", ".join(doc.violated))
    _emit(doc, args)
    return _status(report.cp_ok)


def cmd_decompose(args) -> int:
    spec = load_system_spec(args.spec)
    rates = spec.rates
    report = full_validate(rates)
    doc = _base_report("decompose", spec, report)
    doc.decay_induced = decay_induced_dephasing(rates.gamma).tolist()
    Gd = pure_dephasing(rates)
    doc.pure_dephasing = np.asarray(Gd.Gd).tolist()
    b = reduced_matrix(Gd)
    doc.reduced_matrix = np.asarray(b.b).tolist()
    doc.reduced_spectrum = [float(x) for x in b.spectrum.eigenvalues]
    if report.gamma_ok:
        doc.kossakowski_spectrum = _kossakowski_spectrum(rates)[1]
    _emit(doc, args)
    return _status(report.cp_ok)


def cmd_lindblad(args) -> int:
    spec = load_system_spec(args.spec)
    report = full_validate(spec.rates)
    doc = _base_report("lindblad", spec, report)
    if not report.cp_ok:
        doc.messages.append("model is not completely positive; run `lindblad-forge validate` for the violated constraints")
        _emit(doc, args)
        return EXIT_VIOLATION
    LD = build_phenomenological(spec.rates)
    a, doc.kossakowski_spectrum = _kossakowski_spectrum(spec.rates)
    try:
        channels = diagonalize(a)
    except NotCompletelyPositiveError as exc:
        doc.cp_ok = False
        doc.messages.append(f"{exc}; run `lindblad-forge validate`")
        _emit(doc, args)
        return EXIT_VIOLATION
    doc.channels = [{"rate": rate, "operator": format_complex_matrix(op)} for rate, op in channels.channels]
    doc.residual = float(np.linalg.norm(reconstruct(channels) - LD))
    _emit(doc, args)
    return EXIT_OK


def cmd_evolve(args) -> int:
    spec = load_system_spec(args.spec)
    N = spec.N
    if args.rho0 == "uniform":
        rho0 = uniform_superposition(N)
    else:
        rho0 = load_density_matrix(args.rho0, N)
    try:
        cfg = EvolutionConfig(args.t_final, args.steps, args.method)
    except ValueError as exc:
        raise SpecFileError(str(exc)) from exc
    report = full_validate(spec.rates)
    # Non-CP models are propagated anyway: the eigenvalue columns are the evidence.
    spec.rates.check_nonnegative()
    traj = propagate(rho0, build_phenomenological(spec.rates), cfg, H=spec.rates.hamiltonian)
    write_trajectory_csv(traj, args.out)
    if not report.cp_ok:
        print(f"warning: model violates {', '.join(c.name for c in report.violated)}", file=sys.stderr)
    return _status(report.cp_ok)


def cmd_presets(args) -> int:
    if args.action == "list":
        for name in list_presets():
            p = get_preset(name)
            print(f"{name:<28s} N={p.N}  {p.summary}")
        return EXIT_OK
    if not args.name:
        print("error: `presets show` needs a preset name", file=sys.stderr)
        return EXIT_INPUT
    try:
        print(get_preset(args.name).describe())
    except KeyError as exc:
        print(f"error: {exc.args[0]}", file=sys.stderr)
        return EXIT_INPUT
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lindblad-forge", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def report_cmd(name, func, help_):
        p = sub.add_parser(name, help=help_)
        p.add_argument("spec", help="YAML system spec")
        p.add_argument("--format", choices=("json", "text"), default="json")
        p.add_argument("--report", help="also write the JSON report to this path")
        p.set_defaults(func=func)
        return p

    report_cmd("validate", cmd_validate, "check complete positivity")
    report_cmd("decompose", cmd_decompose, "split decoherence into decay-induced and pure dephasing")
    report_cmd("lindblad", cmd_lindblad, "extract Lindblad channels")

    p = sub.add_parser("evolve", help="propagate a density matrix and write eigenvalue CSV")
    p.add_argument("spec")
    p.add_argument("--rho0", required=True, help="initial-state YAML, or 'uniform'")
    p.add_argument("--t-final", type=float, required=True)
    p.add_argument("--steps", type=int, default=500)
    p.add_argument("--method", choices=("expm", "rk4"), default="expm")
    p.add_argument("--out", required=True, help="CSV output path")
    p.set_defaults(func=cmd_evolve)

    p = sub.add_parser("presets", help="list or describe built-in models")
    p.add_argument("action", choices=("list", "show"))
    p.add_argument("name", nargs="?")
    p.set_defaults(func=cmd_presets)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        return args.func(args)
    except (LindbladForgeError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
