import math
from fractions import Fraction

import numpy as np
import pytest
from scipy.special import eval_genlaguerre, sph_harm_y

from hydrogen_ladder import AtomConfig
from hydrogen_ladder.atom import ladder_eigenvalue
from hydrogen_ladder.exceptions import DomainError
from hydrogen_ladder.numerics import integrate
from hydrogen_ladder.radial import (
    PolyExp,
    apply_hn_operator,
    apply_ladder,
    apply_number_operator,
    assemble_psi,
    bulge_count,
    bulge_count_grid,
    density_mode,
    ground_phi,
    laguerre_old,
    laguerre_weighted_norm,
    moment,
    moment_quadrature,
    phi_nl,
    phi_oracle,
    radial_R,
    spherical_harmonic,
)
from hydrogen_ladder.validation import RADIAL_CLOSED_FORMS


def phi_scipy(n, l, rho):
    # normalized under rho d(rho), modern Laguerre convention, sign fixed to match
    norm = math.sqrt(math.factorial(n - l - 1) / math.factorial(n + l))
    return norm * rho**l * np.exp(-rho / 2) * eval_genlaguerre(n - l - 1, 2 * l + 1, rho)


def test_ground_phi_normalized():
    for l in range(5):
        g = ground_phi(l)
        val = integrate(lambda x: x * g(x) ** 2, 0.0, 200.0).value
        assert abs(val - 1) < 1e-12


def test_lowering_ground_gives_zero():
    assert apply_ladder("-", ground_phi(3)).is_zero


def test_raise_then_lower():
    p = phi_nl(5, 1)
    back = apply_ladder("-", apply_ladder("+", p))
    rho = np.linspace(0, 40, 50)
    # A- A+ |5 1> = a-_{6,1} a+_{5,1} |5 1> = 28 |5 1>
    assert np.allclose(back(rho), 28 * p(rho), atol=1e-11)


def test_ladder_step_matches_table():
    rho = np.linspace(0, 60, 200)
    for n in range(1, 10):
        for l in range(n):
            up = apply_ladder("+", phi_nl(n, l))
            a = ladder_eigenvalue("+", n, l)
            assert np.allclose(up(rho), a * phi_nl(n + 1, l)(rho), atol=1e-11 * a)
            if n > l + 1:
                down = apply_ladder("-", phi_nl(n, l))
                b = ladder_eigenvalue("-", n, l)
                assert np.allclose(down(rho), b * phi_nl(n - 1, l)(rho), atol=1e-11 * b)


@pytest.mark.parametrize("n", range(1, 31, 3))
def test_against_scipy_laguerre(n):
    rho = np.linspace(0, 6 * n + 20, 400)
    for l in range(n):
        a = phi_nl(n, l)(rho)
        b = phi_scipy(n, l, rho)
        sign = np.sign(a[np.argmax(np.abs(a))]) * np.sign(b[np.argmax(np.abs(a))])
        assert np.max(np.abs(a - sign * b)) <= 1e-12 * np.max(np.abs(a))


def test_oracle_equals_ladder_including_sign():
    rho = np.linspace(0, 150, 300)
    for n in range(1, 16):
        for l in range(n):
            a, b = phi_nl(n, l)(rho), phi_oracle(n, l)(rho)
            assert np.max(np.abs(a - b)) <= 1e-12 * np.max(np.abs(a))


def test_laguerre_old_low_orders():
    # L_2 = rho^2 - 4 rho + 2 in the e^rho d^k (rho^k e^-rho) convention
    assert laguerre_old(2) == (2, -4, 1)
    assert laguerre_old(3, 1) == (-18, 18, -3)


def test_weighted_norm_rho_2l_plus_1():
    for n in range(1, 8):
        for l in range(n):
            got = laguerre_weighted_norm(n, l, 2 * l + 1)
            want = Fraction(math.factorial(n + l) ** 3, math.factorial(n - l - 1))
            assert got == want
            assert laguerre_weighted_norm(n, l, 2 * l + 2) == 2 * n * want
            if n > l + 1:
                assert laguerre_weighted_norm(n, l, 2 * l + 1, n - 1) == 0


@pytest.mark.parametrize("key", sorted(RADIAL_CLOSED_FORMS))
def test_closed_forms(key, au):
    n, l = key
    r = np.linspace(0, 30, 100)
    got, want = radial_R(n, l, au)(r), RADIAL_CLOSED_FORMS[key](r)
    assert np.max(np.abs(got - want)) <= 1e-12 * np.max(np.abs(want))


def test_radial_at_bohr_radius(paper):
    R = radial_R(1, 0, paper)
    assert abs(R(paper.a0) - 2 * math.exp(-1) * paper.a0**-1.5) < 1e-12 * paper.a0**-1.5


def test_radial_normalization_in_nm():
    cfg = AtomConfig(Z=2)
    R = radial_R(3, 1, cfg)
    assert abs(integrate(lambda r: r * r * R(r) ** 2, 0.0, R.r_cut).value - 1) < 1e-10


def test_derivative_finite_difference(au):
    R = radial_R(4, 2, au)
    r, h = 7.3, 1e-5
    assert abs(R.derivative(r) - (R(r + h) - R(r - h)) / (2 * h)) < 1e-8


@pytest.mark.parametrize("n", range(1, 13))
def test_moment_closed_forms(n, au):
    for l in range(n):
        assert abs(moment(n, l, 1, au) / (0.5 * (3 * n * n - l * (l + 1))) - 1) < 1e-12
        assert abs(moment(n, l, -1, au) * n * n - 1) < 1e-12
        assert abs(moment(n, l, 2, au) / (0.5 * n * n * (5 * n * n + 1 - 3 * l * (l + 1))) - 1) < 1e-12
        assert abs(moment(n, l, 0, au) - 1) < 1e-14


def test_moment_divergent_and_quadrature(au):
    with pytest.raises(DomainError):
        moment(3, 0, -3, au)
    assert abs(moment(3, 1, -2, au) - 1 / (27 * 1.5)) < 1e-14
    assert abs(moment_quadrature(4, 1, 1, au) / moment(4, 1, 1, au) - 1) < 1e-9


def test_moment_units(paper):
    assert abs(moment(1, 0, 1, paper) - 1.5 * paper.a0) < 1e-15


def test_bulges(au):
    for n in range(1, 9):
        for l in range(n):
            R = radial_R(n, l, au)
            assert bulge_count(R) == n - l
            assert bulge_count_grid(R) == n - l


def test_circular_mode(paper):
    for n in range(1, 7):
        r = density_mode(radial_R(n, n - 1, paper))
        assert abs(r / (n * n * paper.a0) - 1) < 1e-10
    cfg = AtomConfig(Z=3)
    assert abs(density_mode(radial_R(2, 1, cfg)) / (4 * cfg.a0 / 3) - 1) < 1e-10


def test_differential_eigenrelations():
    rho = np.linspace(0.05, 40, 300)
    for n in range(1, 9):
        for l in range(n):
            p = phi_nl(n, l)
            assert np.allclose(apply_number_operator(p, rho), n * p(rho), atol=1e-9)
            assert np.allclose(apply_hn_operator(p, rho), l * (l + 1) * p(rho), atol=1e-8)


def test_polyexp_validation():
    with pytest.raises(DomainError):
        PolyExp(2, np.array([1.0, 0.0, 1.0]))
    with pytest.raises(DomainError):
        PolyExp(0, np.array([1.0, 0.0]))
    d = phi_nl(3, 1).to_dict()
    assert d["n"] == 3 and d["l"] == 1 and len(d["coeffs"]) == 2


@pytest.mark.parametrize("l,m", [(l, m) for l in range(5) for m in range(-l, l + 1)])
def test_spherical_harmonic_vs_scipy(l, m):
    th = np.linspace(0.01, math.pi - 0.01, 17)
    ph = np.linspace(0, 2 * math.pi, 17)
    assert np.allclose(spherical_harmonic(l, m, th, ph), sph_harm_y(l, m, th, ph), atol=1e-13)


def test_spherical_harmonic_orthonormal():
    th = np.linspace(0, math.pi, 201)
    ph = np.linspace(0, 2 * math.pi, 201)
    T, P = np.meshgrid(th, ph, indexing="ij")
    w = np.sin(T)
    pairs = [(2, 1), (2, -1), (3, 1), (1, 0)]
    for a in pairs:
        for b in pairs:
            f = np.conj(spherical_harmonic(*a, T, P)) * spherical_harmonic(*b, T, P) * w
            val = np.trapezoid(np.trapezoid(f, ph, axis=1), th)
            assert abs(val - (a == b)) < 1e-3


def test_assemble_psi(au):
    psi = assemble_psi(2, 1, -1, au, spin=(1.0, 0.0))
    v = psi(1.0, 0.4, 0.3)
    assert v == pytest.approx(radial_R(2, 1, au)(1.0) * spherical_harmonic(1, -1, 0.4, 0.3))
    with pytest.raises(DomainError):
        assemble_psi(2, 1, 2, au)
