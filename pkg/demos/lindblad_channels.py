"""From phenomenological rates to explicit Lindblad channels."""

import numpy as np

from lindblad_forge import build_phenomenological, build_preset, diagonalize, kossakowski_expand, reconstruct


def show_channels(name, **params):
    rates = build_preset(name, **params)
    LD = build_phenomenological(rates)
    channels = diagonalize(kossakowski_expand(LD))
    print(f"{name} {params}")
    for rate, op in channels.channels:
        entries = np.round(op.real, 3) if np.allclose(op.imag, 0) else np.round(op, 3)
        print(f"  rate {rate:.4f}")
        for row in entries:
            print("     ", " ".join(f"{x:+.3f}" for x in row))
    print(f"  reassembly residual {np.linalg.norm(reconstruct(channels) - LD):.2e}\n")


if __name__ == "__main__":
    show_channels("lambda3_symmetric", gamma=1.0, dephasing=0.6, alpha=0.5)
    print("Dephasing rates above are (4 - alpha) Gd / 3 = 0.7 and alpha Gd = 0.3;")
    print("the two decay channels carry gamma / 2 each.\n")
    show_channels("degenerate4_clebsch_gordan", gamma=1.0, dephasing=0.5, alpha=1.5)
