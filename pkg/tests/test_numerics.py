import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hydrogen_ladder.exceptions import ConvergenceError, SingularMatrixError
from hydrogen_ladder.numerics import (
    QuadratureSpec,
    dd_polyval,
    integrate,
    integrate_semi_infinite,
    kahan_sum,
    log_factorial,
    sqrt_fraction_dd,
    tridiag_solve,
)


def test_integrate_polynomial_exact():
    res = integrate(lambda x: 3 * x**2, 0.0, 2.0)
    assert abs(res.value - 8.0) < 1e-13


def test_integrate_gamma_integrals():
    # int_0^inf x^k e^-x dx = k!
    for k in range(0, 12):
        spec = QuadratureSpec(abs_tol=1e-12 * math.factorial(k))
        res = integrate_semi_infinite(lambda x: x**k * np.exp(-x), 60.0 + 4 * k, 1.0, spec=spec)
        assert abs(res.value / math.factorial(k) - 1) < 1e-10


def test_integrate_peaked_function():
    res = integrate(lambda x: 1.0 / (1e-4 + x * x), -1.0, 1.0)
    exact = 2 * math.atan(1 / 1e-2) / 1e-2
    assert abs(res.value - exact) / exact < 1e-9


def test_integrate_raises_with_partial():
    spec = QuadratureSpec(panel_order=4, abs_tol=1e-14, max_depth=2)
    with pytest.raises(ConvergenceError) as info:
        integrate(lambda x: np.sqrt(np.abs(x - 0.3)), 0.0, 1.0, spec)
    assert info.value.partial is not None


def test_quadrature_spec_validates():
    with pytest.raises(ValueError):
        QuadratureSpec(panel_order=2)
    with pytest.raises(ValueError):
        QuadratureSpec(abs_tol=0.0)


def test_log_factorial():
    for k in (0, 1, 5, 20, 170, 300):
        assert abs(log_factorial(k) - math.lgamma(k + 1)) <= 1e-12 * max(1.0, math.lgamma(k + 1))


def test_kahan_sum_cancellation():
    vals = [1e16, 1.0, -1e16] * 1000
    assert kahan_sum(vals) == 1000.0


@settings(max_examples=50, deadline=None)
@given(st.integers(2, 40), st.integers(0, 10_000))
def test_tridiag_matches_dense(n, seed):
    rng = np.random.default_rng(seed)
    d = rng.uniform(4, 6, n)
    off = rng.uniform(-1, 1, n - 1)
    b = rng.normal(size=(n, 3)) + 1j * rng.normal(size=(n, 3))
    A = np.diag(d) + np.diag(off, 1) + np.diag(off, -1)
    x = tridiag_solve(d, off, b)
    assert np.allclose(A @ x, b, atol=1e-12)


def test_tridiag_singular():
    with pytest.raises(SingularMatrixError):
        tridiag_solve(np.array([1.0, 1.0]), np.array([1.0]), np.array([1.0, 2.0]), pivot_tol=1e-14)


def test_sqrt_fraction_dd_accuracy():
    hi, lo = sqrt_fraction_dd(Fraction(2))
    # sqrt(2) to ~32 digits
    ref = Fraction("1.4142135623730950488016887242096980785696")
    assert abs(Fraction(hi) + Fraction(lo) - ref) < Fraction(1, 10**30)


def test_dd_polyval_beats_naive():
    # (x - 1)^7 expanded, near the root
    coeffs = [-1, 7, -21, 35, -35, 21, -7, 1]
    x = np.array([1.001])
    got = dd_polyval(np.array(coeffs, float), np.zeros(8), x)
    assert abs(got[0] - 1e-21) < 1e-27
