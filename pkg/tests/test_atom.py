import math

import pytest

from hydrogen_ladder.atom import (
    ALPHA_CODATA,
    AtomConfig,
    QuantumNumbers,
    degeneracy,
    energy_level,
    ladder_eigenvalue,
    ladder_radicand,
    r_of_rho,
    rho_of_r,
    xi_scale,
)
from hydrogen_ladder.exceptions import DomainError


def test_quantum_numbers_validation():
    assert QuantumNumbers(3, 2).n_r == 0
    for n, l in [(0, 0), (2, 2), (1, -1)]:
        with pytest.raises(DomainError):
            QuantumNumbers(n, l)


def test_ground_energy_paper_constants(paper):
    e1 = energy_level(QuantumNumbers(1, 0), paper)
    assert -13.7 <= e1 <= -13.5


def test_codata_ground_energy():
    e1 = energy_level(QuantumNumbers(1, 0), AtomConfig(constants_mode="codata"))
    assert abs(e1 + 13.6057) < 1e-3
    assert AtomConfig(constants_mode="codata").alpha == ALPHA_CODATA


def test_energy_z_squared_scaling():
    for Z in (1, 2, 3, 7):
        ratio = energy_level(QuantumNumbers(2, 1), AtomConfig(Z=Z)) / energy_level(QuantumNumbers(2, 1), AtomConfig())
        assert abs(ratio - Z * Z) < 1e-12


def test_energy_independent_of_l(paper):
    es = {energy_level(QuantumNumbers(5, l), paper) for l in range(5)}
    assert len(es) == 1


def test_degeneracy_brute_force():
    for n in range(1, 15):
        count = sum(1 for l in range(n) for m in range(-l, l + 1) for s in (-1, 1))
        assert degeneracy(n) == count


def test_bohr_radius_nm():
    cfg = AtomConfig(constants_mode="codata")
    assert abs(cfg.a0 - 0.0529177) < 1e-6


@pytest.mark.parametrize("n,l", [(n, l) for n in range(1, 12) for l in range(n)])
def test_ladder_eigenvalue_factored_form(n, l):
    assert ladder_eigenvalue("+", n, l) ** 2 == pytest.approx(ladder_radicand("+", n, l), abs=1e-9)
    assert ladder_eigenvalue("-", n, l) ** 2 == pytest.approx(ladder_radicand("-", n, l), abs=1e-9)


def test_ladder_goldens():
    assert ladder_eigenvalue("+", QuantumNumbers(1, 0)) == math.sqrt(2)
    assert ladder_eigenvalue("+", QuantumNumbers(2, 1)) == 2.0
    assert ladder_eigenvalue("-", QuantumNumbers(4, 3)) == 0.0


def test_ladder_negative_radicand():
    with pytest.raises(DomainError):
        ladder_eigenvalue("-", 1, 3)
    with pytest.raises(ValueError):
        ladder_eigenvalue("x", 2, 0)


def test_rho_round_trip():
    cfg = AtomConfig(Z=3)
    assert abs(r_of_rho(rho_of_r(0.37, 4, cfg), 4, cfg) - 0.37) < 1e-15


def test_xi_scale_closed_form():
    cfg = AtomConfig.atomic_units(2)
    n = 3
    assert abs(xi_scale(n, cfg) - math.sqrt(1 / (2 * n)) * (2 * 2 / n) ** 1.5) < 1e-14


def test_config_rejects_bad_values():
    with pytest.raises(DomainError):
        AtomConfig(Z=0)
    with pytest.raises(DomainError):
        AtomConfig(constants_mode="cgs")
    with pytest.raises(DomainError):
        AtomConfig(alpha=2.0)
