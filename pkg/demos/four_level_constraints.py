"""Four-level pure dephasing: necessary conditions, exact conditions, and special cases."""

import numpy as np

from lindblad_forge import (
    dephasing_rates_from_reduced,
    distance_case,
    fourlevel_necessary,
    fourlevel_sufficient,
    symmetric_basis_4,
    tripod_dephasing_conditions,
)

if __name__ == "__main__":
    # a reduced matrix whose 2x2 minors are all fine but whose determinant is -4
    b = np.array([[1.0, 1.0, -1.0], [1.0, 1.0, 1.0], [-1.0, 1.0, 1.0]])
    Gd = dephasing_rates_from_reduced(b, symmetric_basis_4())
    print("Rates generated by an indefinite reduced matrix:")
    for (m, n), v in Gd.pairs().items():
        print(f"  Gd{m}{n} = {v:.3f}")
    print(f"  necessary conditions pass: {fourlevel_necessary(Gd).cp_ok}")
    suff = fourlevel_sufficient(Gd)
    print(f"  exact minor test passes:   {suff.cp_ok}  (violates {', '.join(c.name for c in suff.violated)})\n")

    print("Dephasing that depends only on level distance |m - n|:")
    for G in ((1, 4, 9), (1, 4.001, 9), (1, 4, 9.001), (1, 2, 3), (1, 1, 1)):
        r = distance_case(*G)
        print(f"  G = {G}: allowed {r.cp_ok!s:5}  lambda_min = {r.b_min_eigenvalue:+.2e}")
    print("  -> quadratic growth with distance is the fastest allowed.\n")

    print("Tripod ground-state dephasing ratios (alpha: adjacent, beta: outer):")
    for alpha, beta in ((1, 1), (2, 4), (2, 4.1), (0, 0.5), (3, 3)):
        r = tripod_dephasing_conditions(alpha, beta)
        eig = ", ".join(f"{x:+.3f}" for x in r.eigenvalues)
        print(f"  alpha = {alpha}, beta = {beta}: allowed {r.cp_ok!s:5}  p = {r.p:+.2f}  q = {r.q:+.2f}  eig = {eig}")
