"""Two innocent-looking relaxation models that break positivity.

Model 1: level 2 decays into level 1 at rate 1, and the only decoherence is
the 1-2 coherence damped at half that rate.  Model 2: no decay at all, just the
1-2 coherence damped at rate 1.  Both start from the uniform superposition of
three levels and both produce a negative eigenvalue immediately.
"""

import numpy as np

from lindblad_forge import (
    EvolutionConfig,
    RateSpec,
    build_phenomenological,
    full_validate,
    positivity_breach,
    propagate,
    uniform_superposition,
)


def decay_model():
    gamma = np.zeros((3, 3))
    gamma[0, 1] = 1.0
    Gamma = np.zeros((3, 3))
    Gamma[0, 1] = Gamma[1, 0] = 0.5
    return RateSpec(gamma, Gamma)


def dephasing_model():
    Gamma = np.zeros((3, 3))
    Gamma[0, 1] = Gamma[1, 0] = 1.0
    return RateSpec(np.zeros((3, 3)), Gamma)


def show(label, rates):
    report = full_validate(rates)
    print(f"{label}: completely positive = {report.cp_ok}")
    print(f"  smallest eigenvalue of the reduced dephasing matrix: {report.b_min_eigenvalue:+.4f}")
    print("  violated:", ", ".join(c.name for c in report.violated))
    traj = propagate(uniform_superposition(3), build_phenomenological(rates), EvolutionConfig(5.0, 500))
    print(f"  first sample with a negative eigenvalue: t = {positivity_breach(traj):.3f}")
    for t in (0.5, 1.0, 2.0, 5.0):
        j = int(round(t / 0.01))
        print(f"    t = {t:3.1f}  min eigenvalue = {traj.min_eigenvalue_curve[j]:+.5f}")
    print()


if __name__ == "__main__":
    show("decay 2 -> 1, coherence 1-2 at gamma/2", decay_model())
    show("coherence 1-2 damped, nothing else", dephasing_model())
    print("Both fail for the same reason: a single damped coherence in a three-level")
    print("system needs the other two coherences to decay as well.")
