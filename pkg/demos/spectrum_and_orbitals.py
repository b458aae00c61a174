"""Energy levels and the first few radial densities of hydrogen.

Writes a small spectrum table and an SVG of p(r) = r^2 R^2 for the circular
states, whose maxima sit on the old Bohr radii n^2 a0.

    python demos/spectrum_and_orbitals.py [output_dir]
"""

import sys
from pathlib import Path

import numpy as np

from hydrogen_ladder import AtomConfig, QuantumNumbers, degeneracy, energy_level, radial_R
from hydrogen_ladder.export import csv_text, svg_line_chart, write_text
from hydrogen_ladder.radial import bulge_count, density_mode, probability_density

out = Path(sys.argv[1] if len(sys.argv) > 1 else "demo_output")
cfg = AtomConfig()  # Z = 1, alpha = 1/137

rows = []
for n in range(1, 7):
    e = energy_level(QuantumNumbers(n, 0), cfg)
    rows.append((n, e, degeneracy(n)))
    print(f"n={n}  E={e:9.4f} eV  states={degeneracy(n)}")
write_text(out / "spectrum.csv", csv_text(["n", "energy_ev", "degeneracy"], rows))

# Circular orbits (l = n - 1) have a single bulge at n^2 a0.
series = []
r = np.linspace(0, 40 * cfg.a0, 800)
for n in range(1, 5):
    R = radial_R(n, n - 1, cfg)
    print(f"R_{n}{n - 1}: bulges={bulge_count(R)}  mode={density_mode(R) / cfg.a0:.6f} a0")
    series.append((f"n={n}, l={n - 1}", r / cfg.a0, probability_density(R, r) * cfg.a0))

# A state with several radial nodes, for contrast.
R40 = radial_R(4, 0, cfg)
print(f"R_40: bulges={bulge_count(R40)}")
series.append(("n=4, l=0", r / cfg.a0, probability_density(R40, r) * cfg.a0))

write_text(out / "densities.svg", svg_line_chart(series, "Radial probability densities", "r / a0", "p(r) a0"))
print(f"files in {out}/")
