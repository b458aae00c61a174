"""Shared numeric utilities.

Adaptive Gauss-Legendre quadrature, compensated summation, exact-ish
log-factorials, a tridiagonal solver and double-double polynomial evaluation.
Everything here is stateless.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterable, NamedTuple

import numpy as np

from .exceptions import ConvergenceError, DomainError, SingularMatrixError

__all__ = [
    "QuadratureSpec",
    "QuadResult",
    "integrate",
    "integrate_semi_infinite",
    "log_factorial",
    "kahan_sum",
    "tridiag_solve",
    "dd_polyval",
    "sqrt_fraction_dd",
]


@dataclass(frozen=True)
class QuadratureSpec:
    panel_order: int = 16
    abs_tol: float = 1e-10
    max_depth: int = 24

    def __post_init__(self):
        if self.panel_order < 4:
            raise ValueError(f"panel_order must be >= 4, got {self.panel_order}")
        if not self.abs_tol > 0:
            raise ValueError(f"abs_tol must be positive, got {self.abs_tol}")
        if self.max_depth < 1:
            raise ValueError(f"max_depth must be >= 1, got {self.max_depth}")


class QuadResult(NamedTuple):
    value: float
    error: float


DEFAULT_QUADRATURE = QuadratureSpec()


@lru_cache(maxsize=None)
def _gauss_legendre(order: int) -> tuple[np.ndarray, np.ndarray]:
    nodes, weights = np.polynomial.legendre.leggauss(order)
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return nodes, weights


def _panel_sums(f, lo, hi, order):
    """Gauss-Legendre estimate on each panel [lo[i], hi[i]] with one vectorized call to f."""
    nodes, weights = _gauss_legendre(order)
    half = 0.5 * (hi - lo)
    mid = 0.5 * (hi + lo)
    x = mid[:, None] + half[:, None] * nodes[None, :]
    fx = np.asarray(f(x.ravel())).reshape(x.shape)
    return half * (fx @ weights)


def integrate(
    f: Callable[[np.ndarray], np.ndarray],
    a: float,
    b: float,
    spec: QuadratureSpec = DEFAULT_QUADRATURE,
) -> QuadResult:
    """Adaptive composite Gauss-Legendre quadrature of ``f`` over ``[a, b]``.

    ``f`` must accept a 1-D array of abscissae and return values of the same
    shape. Panels are bisected breadth-first; a panel is accepted once the
    difference between its one-panel and two-panel estimates is below its
    share of ``spec.abs_tol`` (proportional to its width).

    Raises
    ------
    ConvergenceError
        If some panel is still unresolved after ``spec.max_depth`` bisections.
        The partial value and error are attached to the exception.
    """
    if a == b:
        return QuadResult(0.0, 0.0)
    if b < a:
        res = integrate(f, b, a, spec)
        return QuadResult(-res.value, res.error)

    order = spec.panel_order
    total_width = b - a
    lo = np.array([a], dtype=float)
    hi = np.array([b], dtype=float)
    coarse = _panel_sums(f, lo, hi, order)

    accepted: list[float] = []
    error = 0.0
    for _depth in range(spec.max_depth):
        mid = 0.5 * (lo + hi)
        left = _panel_sums(f, lo, mid, order)
        right = _panel_sums(f, mid, hi, order)
        fine = left + right
        err = np.abs(fine - coarse)
        ok = err <= spec.abs_tol * (hi - lo) / total_width
        accepted.extend(fine[ok].tolist())
        error += float(err[ok].sum())
        if ok.all():
            return QuadResult(math.fsum(accepted), error)
        bad = ~ok
        lo = np.concatenate([lo[bad], mid[bad]])
        hi = np.concatenate([mid[bad], hi[bad]])
        coarse = np.concatenate([left[bad], right[bad]])

    partial = math.fsum(accepted) + float(coarse.sum())
    error += float(np.abs(coarse).sum())
    raise ConvergenceError(
        f"quadrature did not converge within max_depth={spec.max_depth} "
        f"({lo.size} unresolved panels)",
        partial=partial,
        error=error,
    )


def integrate_semi_infinite(
    f: Callable[[np.ndarray], np.ndarray],
    cutoff: float,
    decay: float,
    a: float = 0.0,
    spec: QuadratureSpec = DEFAULT_QUADRATURE,
) -> QuadResult:
    """Integrate ``f`` over ``[a, inf)`` for integrands decaying like ``exp(-decay*x)``.

    The finite part ``[a, cutoff]`` goes through :func:`integrate`; the dropped
    tail is bounded by ``|f(cutoff)| / decay`` and added to the error estimate.
    """
    if decay <= 0:
        raise DomainError(f"decay rate must be positive, got {decay}")
    res = integrate(f, a, cutoff, spec)
    tail = abs(float(np.asarray(f(np.array([cutoff], dtype=float)))[0])) / decay
    return QuadResult(res.value, res.error + tail)


def log_factorial(k: int) -> float:
    if k < 0:
        raise DomainError(f"log_factorial needs k >= 0, got {k}")
    if k <= 256:
        return math.log(math.factorial(k))
    return math.lgamma(k + 1.0)


def kahan_sum(values: Iterable[float]) -> float:
    """Neumaier-compensated sum; robust to terms larger than the running total."""
    total = 0.0
    comp = 0.0
    for v in values:
        t = total + v
        if abs(total) >= abs(v):
            comp += (total - t) + v
        else:
            comp += (v - t) + total
        total = t
    return total + comp


def tridiag_solve(diag, off, rhs, lower=None, pivot_tol: float = 0.0):
    """Solve a tridiagonal system with the Thomas algorithm.

    Parameters
    ----------
    diag : (n,) array
        Main diagonal.
    off : (n-1,) array or scalar
        Superdiagonal. Also used as the subdiagonal unless ``lower`` is given.
    rhs : (n,) or (n, m) array
        Right-hand side(s); may be complex.
    lower : (n-1,) array, optional
        Subdiagonal for non-symmetric systems.

    Raises
    ------
    SingularMatrixError
        When a pivot's magnitude is ``<= pivot_tol`` (index on ``.pivot``).
    """
    diag = np.asarray(diag)
    n = diag.shape[0]
    upper = np.broadcast_to(np.asarray(off), (max(n - 1, 0),))
    low = upper if lower is None else np.broadcast_to(np.asarray(lower), (max(n - 1, 0),))
    rhs = np.asarray(rhs)
    if rhs.shape[0] != n:
        raise ValueError(f"rhs has {rhs.shape[0]} rows, system has {n}")

    dtype = np.result_type(diag, upper, low, rhs, float)
    c = np.zeros(max(n - 1, 0), dtype=dtype)
    d = np.array(rhs, dtype=dtype, copy=True)

    piv = diag[0]
    if abs(piv) <= pivot_tol:
        raise SingularMatrixError("zero pivot at index 0", pivot=0)
    if n > 1:
        c[0] = upper[0] / piv
    d[0] = d[0] / piv
    for i in range(1, n):
        piv = diag[i] - low[i - 1] * c[i - 1]
        if abs(piv) <= pivot_tol:
            raise SingularMatrixError(f"zero pivot at index {i}", pivot=i)
        if i < n - 1:
            c[i] = upper[i] / piv
        d[i] = (d[i] - low[i - 1] * d[i - 1]) / piv
    for i in range(n - 2, -1, -1):
        d[i] = d[i] - c[i] * d[i + 1]
    return d


# --- double-double arithmetic -------------------------------------------------

_SPLITTER = 134217729.0  # 2**27 + 1


def _two_sum(a, b):
    s = a + b
    bb = s - a
    return s, (a - (s - bb)) + (b - bb)


def _fast_two_sum(a, b):
    s = a + b
    return s, b - (s - a)


def _split(a):
    t = _SPLITTER * a
    hi = t - (t - a)
    return hi, a - hi


def _two_prod(a, b):
    p = a * b
    ah, al = _split(a)
    bh, bl = _split(b)
    return p, ((ah * bh - p) + ah * bl + al * bh) + al * bl


def dd_polyval(hi, lo, x):
    """Evaluate ``sum_k (hi[k] + lo[k]) * x**k`` with double-double Horner.

    The result is accurate to a few ulps unless the condition number of the
    evaluation exceeds ~1e16, which is what makes high-degree alternating
    polynomials (Laguerre-type) safe to evaluate in the power basis.
    """
    x = np.asarray(x, dtype=float)
    hi = np.asarray(hi, dtype=float)
    lo = np.asarray(lo, dtype=float)
    sh = np.full(x.shape, hi[-1])
    sl = np.full(x.shape, lo[-1])
    with np.errstate(over="ignore", invalid="ignore"):
        for k in range(hi.size - 2, -1, -1):
            p, e = _two_prod(sh, x)
            e = e + sl * x
            p, e = _fast_two_sum(p, e)
            s, t = _two_sum(p, hi[k])
            t = t + e + lo[k]
            sh, sl = _fast_two_sum(s, t)
    return sh + sl


def sqrt_fraction_dd(value: Fraction, bits: int = 110) -> tuple[float, float]:
    """Double-double ``(hi, lo)`` approximation of ``sqrt(value)`` for a rational ``value >= 0``."""
    value = Fraction(value)
    if value < 0:
        raise DomainError("square root of a negative rational")
    if value == 0:
        return 0.0, 0.0
    p, q = value.numerator, value.denominator
    # choose s so that isqrt(p * 4**s // q) has about `bits` bits
    s = max(0, (2 * bits - (p.bit_length() - q.bit_length())) // 2 + 1)
    root = math.isqrt((p << (2 * s)) // q)
    hi_int = int(float(root))
    lo_int = root - hi_int
    return math.ldexp(float(hi_int), -s), math.ldexp(float(lo_int), -s)
