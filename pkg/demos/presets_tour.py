"""Every built-in model, validated and decomposed."""

from lindblad_forge import (
    build_preset,
    decay_induced_dephasing,
    full_validate,
    get_preset,
    list_presets,
    pure_dephasing,
)

if __name__ == "__main__":
    for name in list_presets():
        rates = build_preset(name)
        report = full_validate(rates)
        print(get_preset(name).describe())
        print(f"  completely positive: {report.cp_ok}   lambda_min(b) = {report.b_min_eigenvalue:+.4f}")
        Gp = decay_induced_dephasing(rates.gamma)
        Gd = pure_dephasing(rates)
        for (m, n), gd in Gd.pairs().items():
            print(f"    {m}-{n}: decay-induced {Gp[m - 1, n - 1]:.3f}  pure {gd:.3f}  observed {rates.Gamma[m - 1, n - 1]:.3f}")
        print()
