"""Regenerate the M_l(x) reference table and compare it with the shipped copy.

    python demos/bessel_m_table.py [output_dir]
"""

import sys
from pathlib import Path

import numpy as np

from hydrogen_ladder.coherent import bessel_M, check_bessel_m_table
from hydrogen_ladder.export import csv_text, svg_line_chart, write_text

out = Path(sys.argv[1] if len(sys.argv) > 1 else "demo_output")
x = np.round(np.arange(51) * 0.1, 10)
values = np.array([[bessel_M(l, v) for l in range(6)] for v in x])
write_text(out / "bessel_m.csv", csv_text(["x"] + [f"M{l}" for l in range(6)], [[v, *row] for v, row in zip(x, values)]))

checks = check_bessel_m_table()
worst = max(checks, key=lambda c: c.error)
print(f"{sum(c.passed for c in checks)}/{len(checks)} entries within 1e-9; worst {worst.name} err={worst.error:.2e}")

series = [(f"M_{l}", x, values[:, l] / values[0, l]) for l in range(6)]
write_text(out / "bessel_m.svg", svg_line_chart(series, "M_l(x) / M_l(0)", "x", "ratio"))
print(f"files in {out}/")
