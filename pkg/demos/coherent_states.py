"""Coherent states of the radial ladder and their Bessel-type normalization.

    python demos/coherent_states.py [output_dir]
"""

import cmath
import sys
from pathlib import Path

import numpy as np

from hydrogen_ladder import AtomConfig, coherent_radial, coherent_state, coherent_uncertainty, mean_occupation
from hydrogen_ladder.coherent import bessel_M
from hydrogen_ladder.export import svg_line_chart, write_text

out = Path(sys.argv[1] if len(sys.argv) > 1 else "demo_output")
cfg = AtomConfig.atomic_units()

for l in (0, 1, 2):
    for z in (0.5, 1 + 1j, cmath.rect(3, 0.4)):
        s = coherent_state(l, z)
        u = coherent_uncertainty(s)
        nbar = mean_occupation(s)
        print(
            f"l={l} z={z:.3f}  terms={s.coeffs.size:2d}  <N>={nbar:8.4f}  "
            f"sigma_q sigma_p={u.product:8.4f}  M_l(2|z|)={bessel_M(l, 2 * abs(z)):.6f}"
        )

# Larger |z| pushes the radial packet outward.
r = np.linspace(0, 120, 1200)
series = []
for z in (0.5, 1.5, 3.0):
    s = coherent_state(0, z)
    series.append((f"|z|={z}", r, r * r * np.abs(coherent_radial(s, cfg, r)) ** 2))
write_text(out / "coherent_density.svg", svg_line_chart(series, "Coherent-state radial density, l=0", "r / a0", "r^2 |R|^2"))
print(f"files in {out}/")
