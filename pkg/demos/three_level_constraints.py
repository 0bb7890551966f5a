"""How much may each coherence of a three-level atom dephase?

Walks through the closed-form answer for three levels, compares it with the
spectral test, and contrasts the symmetric Lambda and V configurations.
"""

import numpy as np

from lindblad_forge import PureDephasingRates, compare_lambda_v, spectral_check, threelevel_closed_form
from lindblad_forge.decomp import rates_from_pure_dephasing


def gd3(g12, g13, g23):
    return PureDephasingRates.from_pairs(3, {(1, 2): g12, (1, 3): g13, (2, 3): g23})


def verdicts(g):
    Gd = gd3(*g)
    cf = threelevel_closed_form(Gd)
    sp = spectral_check(rates_from_pure_dephasing(np.zeros((3, 3)), Gd))
    return cf, sp


if __name__ == "__main__":
    print("Outer coherence 1-3 relative to equal adjacent rates of 1:")
    for alpha in (0.0, 1.0, 3.0, 4.0, 4.5):
        cf, sp = verdicts((1.0, alpha, 1.0))
        print(f"  alpha = {alpha:3.1f}: closed form {cf.cp_ok!s:5}  spectral {sp.cp_ok!s:5}  "
              f"lambda_min = {cf.b_min_eigenvalue:+.4f}")
    print("  -> the outer transition may dephase at most four times as fast.\n")

    cf, _ = verdicts((0.25, 1.0, 0.25))
    print("Square-root form on the edge (0.25, 1, 0.25):")
    for c in cf.checks:
        if c.name.startswith("Eq27"):
            print(f"  {c.name:<24s} margin {c.margin:+.3e}")
    print()

    rng = np.random.default_rng(0)
    draws = rng.uniform(0, 1, (2000, 3))
    agree = 0
    for g in draws:
        cf, sp = verdicts(tuple(g))
        agree += cf.cp_ok == sp.cp_ok
    print(f"Closed form and spectral test agree on {agree} of {len(draws)} random draws.\n")

    print("Lambda versus V with matched lifetime (gamma = 1) and dephasing (1):")
    for a_l, a_v in ((0.0, 0.0), (2.0, 2.0), (4.0, 0.0)):
        c = compare_lambda_v(1.0, 1.0, a_l, a_v)
        print(f"  alpha_Lambda = {a_l}, alpha_V = {a_v}: Gamma13 Lambda {c.Gamma13_lambda:.2f}, "
              f"V {c.Gamma13_v:.2f}  (Lambda larger: {c.lambda_exceeds_v})")
