"""Hydrogen-like atoms solved with radial ladder operators.

Energies, operator matrices, radial functions generated by repeated raising,
coherent states with their Bessel-type normalization, and the checks that tie
them to closed forms.
"""

__version__ = "0.1.0"

from .atom import (
    AtomConfig,
    QuantumNumbers,
    degeneracy,
    energy_level,
    ladder_eigenvalue,
    r_of_rho,
    rho_of_r,
    xi_scale,
)
from .coherent import (
    CoherentState,
    bessel_I,
    bessel_M,
    check_bessel_m_table,
    coherent_radial,
    coherent_state,
    coherent_state_polar,
    coherent_uncertainty,
    displacement_coefficients,
    load_bessel_m_table,
    mean_occupation,
)
from .exceptions import ConvergenceError, DomainError, SingularMatrixError, TruncationError
from .numerics import QuadratureSpec, integrate, integrate_semi_infinite, tridiag_solve
from .operators import OperatorMatrix, TruncatedBasis, build_operator, commutator, expectation, uncertainty_product_nl
from .radial import (
    PolyExp,
    RadialFunction,
    apply_ladder,
    assemble_psi,
    bulge_count,
    density_mode,
    moment,
    phi_nl,
    phi_oracle,
    radial_R,
    spherical_harmonic,
)
