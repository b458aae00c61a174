"""Operator matrices in the |n l> basis and what truncation does to them.

    python demos/operator_matrices.py
"""

import numpy as np

from hydrogen_ladder import QuantumNumbers, TruncatedBasis, build_operator, commutator, uncertainty_product_nl
from hydrogen_ladder.operators import interior

np.set_printoptions(precision=4, suppress=True, linewidth=120)

basis = TruncatedBasis(l=0, n_max=5)
for kind in ("Aplus", "rho", "rho_p_rho"):
    print(kind)
    print(build_operator(kind, basis).entries)

# [A-, A+] = 2N holds except in the last row/column, where the truncation bites.
c = commutator(build_operator("Aminus", basis), build_operator("Aplus", basis))
print("[A-, A+] diagonal:", c.entries.diagonal().real)
print("interior matches 2N:", np.allclose(interior(c), interior(2 * build_operator("N", basis).entries)))

# P_rho needs rho^-1, so every entry depends on where the basis is cut.
for n_max in (4, 6, 12, 40):
    p = build_operator("p_rho", TruncatedBasis(0, n_max)).entries
    print(f"n_max={n_max:3d}  P_rho[0,0] = {p[0, 0].imag:+.6f}i")

print("sigma_q sigma_p on |n l>:")
for n in range(1, 5):
    print("  ", [round(uncertainty_product_nl(QuantumNumbers(n, l)), 12) for l in range(n)])
