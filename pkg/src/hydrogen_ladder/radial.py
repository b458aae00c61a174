"""Radial eigenfunctions generated by ladder operators.

Every bound radial function in rho-space has the form
``phi(rho) = exp(-rho/2) * sum_k c_k rho**k`` (a :class:`PolyExp`). The
creation operator maps this family into itself, so ``phi_nl`` is produced by
exact integer coefficient recurrences starting from the ground state
``rho**l exp(-rho/2)``; normalisation is applied once at the end from an exact
rational.

Coefficients are stored as double-double pairs (``coeffs`` + ``coeffs_lo``) and
evaluated with compensated Horner, because the power-basis representation of
high-``n`` states is badly conditioned (~1e7 at n = 20).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import numpy as np
from scipy.optimize import brentq

from .atom import AtomConfig, QuantumNumbers, ladder_eigenvalue, r_of_rho, rho_of_r, xi_scale
from .exceptions import DomainError
from .numerics import (
    DEFAULT_QUADRATURE,
    QuadratureSpec,
    dd_polyval,
    integrate_semi_infinite,
    sqrt_fraction_dd,
)

__all__ = [
    "PolyExp",
    "RadialFunction",
    "SpatialWavefunction",
    "ground_phi",
    "apply_ladder",
    "phi_nl",
    "phi_oracle",
    "laguerre_old",
    "laguerre_weighted_norm",
    "radial_R",
    "r_cut",
    "moment",
    "moment_quadrature",
    "probability_density",
    "bulge_count",
    "bulge_count_grid",
    "density_mode",
    "apply_number_operator",
    "apply_hn_operator",
    "spherical_harmonic",
    "assemble_psi",
]

ZERO_TOL = 1e-14


@dataclass(frozen=True, eq=False)
class PolyExp:
    """``exp(-rho/2) * sum_k (coeffs[k] + coeffs_lo[k]) * rho**k``.

    ``coeffs`` has length ``n`` (the implied principal number) and vanishes
    below index ``l``. The all-zero function is allowed; it is what lowering a
    ground state produces.
    """

    l: int
    coeffs: np.ndarray
    coeffs_lo: np.ndarray | None = None

    def __post_init__(self):
        hi = np.array(self.coeffs, dtype=float)
        lo = np.zeros_like(hi) if self.coeffs_lo is None else np.array(self.coeffs_lo, dtype=float)
        if hi.ndim != 1 or hi.size == 0 or lo.shape != hi.shape:
            raise ValueError("coeffs must be a non-empty 1-D array (coeffs_lo of the same shape)")
        hi.setflags(write=False)
        lo.setflags(write=False)
        object.__setattr__(self, "coeffs", hi)
        object.__setattr__(self, "coeffs_lo", lo)
        if self.is_zero:
            return
        if np.any(hi[: self.l] != 0.0):
            raise DomainError(f"coefficients below rho**{self.l} must vanish")
        if hi[-1] == 0.0:
            raise DomainError("leading coefficient must be nonzero; trim the coefficient array")

    @property
    def n(self) -> int:
        return self.coeffs.size

    @property
    def is_zero(self) -> bool:
        return bool(np.all(np.abs(self.coeffs) < ZERO_TOL))

    def __call__(self, rho):
        rho = np.asarray(rho, dtype=float)
        with np.errstate(over="ignore", invalid="ignore", under="ignore"):
            val = dd_polyval(self.coeffs, self.coeffs_lo, rho) * np.exp(-0.5 * rho)
        val = np.where(np.isfinite(val), val, 0.0)
        return val if val.ndim else float(val)

    def _poly_derivative(self, order: int):
        hi, lo = self.coeffs, self.coeffs_lo
        for _ in range(order):
            k = np.arange(1, hi.size, dtype=float)
            hi, lo = (hi[1:] * k, lo[1:] * k) if hi.size > 1 else (np.zeros(1), np.zeros(1))
        return hi, lo

    def derivative(self, rho, order: int = 1):
        """Value of the ``order``-th derivative (0, 1 or 2) of the full function."""
        rho = np.asarray(rho, dtype=float)
        p = [dd_polyval(*self._poly_derivative(j), rho) for j in range(order + 1)]
        e = np.exp(-0.5 * rho)
        if order == 0:
            return p[0] * e
        if order == 1:
            return (p[1] - 0.5 * p[0]) * e
        if order == 2:
            return (p[2] - p[1] + 0.25 * p[0]) * e
        raise ValueError("only derivatives up to order 2 are supported")

    def to_dict(self) -> dict:
        c = self.coeffs + self.coeffs_lo
        return {"l": self.l, "n": self.n, "coeffs": [float(v) for v in c[self.l :]]}


def _dd_coeffs(numerators: Sequence[int], norm_sq: Fraction):
    """Double-double coefficients ``num_k * sqrt(norm_sq)``."""
    hi = np.zeros(len(numerators))
    lo = np.zeros(len(numerators))
    for k, a in enumerate(numerators):
        if a == 0:
            continue
        h, t = sqrt_fraction_dd(a * a * norm_sq)
        s = 1.0 if a > 0 else -1.0
        hi[k], lo[k] = s * h, s * t
    return hi, lo


def ground_phi(l: int) -> PolyExp:
    """Ground state of the ``l`` column: ``rho**l exp(-rho/2) / sqrt((2l+1)!)``."""
    if l < 0:
        raise DomainError(f"l must be >= 0, got {l}")
    nums = [0] * l + [1]
    return PolyExp(l, *_dd_coeffs(nums, Fraction(1, math.factorial(2 * l + 1))))


def _raise_coeffs(c: Sequence, n: int) -> list:
    """Coefficients of (rho d/drho - rho/2 + n + 1) applied to exp(-rho/2) sum c_k rho^k."""
    out = [0 * c[0]] * (len(c) + 1)
    for k, ck in enumerate(c):
        out[k] += (k + n + 1) * ck
        out[k + 1] -= ck
    return out


def _lower_coeffs(c: Sequence, n: int) -> list:
    """Coefficients of (-rho d/drho - rho/2 + n - 1) applied to the same form."""
    return [(n - 1 - k) * ck for k, ck in enumerate(c)][: len(c) - 1]


def apply_ladder(sign: str, poly: PolyExp) -> PolyExp:
    """Unnormalised image of ``poly`` under ``A+`` or ``A-``.

    The principal number used in the operator is ``poly.n``. Lowering a
    ground state gives the zero function (``result.is_zero``), which marks
    the end of the ladder.
    """
    n = poly.n
    if sign == "+":
        hi = np.array(_raise_coeffs(list(poly.coeffs), n))
        lo = np.array(_raise_coeffs(list(poly.coeffs_lo), n))
    elif sign == "-":
        hi = np.array(_lower_coeffs(list(poly.coeffs), n))
        lo = np.array(_lower_coeffs(list(poly.coeffs_lo), n))
        if hi.size <= poly.l or np.all(np.abs(hi) < ZERO_TOL):
            return PolyExp(poly.l, np.zeros(max(hi.size, 1)))
    else:
        raise ValueError(f"sign must be '+' or '-', got {sign!r}")
    return PolyExp(poly.l, hi, lo)


@lru_cache(maxsize=None)
def _ladder_numerators(n: int, l: int) -> tuple[int, ...]:
    """Integer coefficients of A+^(n-l-1) [rho^l exp(-rho/2)]."""
    c = [0] * l + [1]
    for m in range(l + 1, n):
        c = _raise_coeffs(c, m)
    return tuple(c)


def _ladder_norm_sq(n: int, l: int) -> Fraction:
    # product of a+_{k,l}^2 for k = l+1..n-1 times (2l+1)! equals (n+l)!(n-l-1)!
    return Fraction(1, math.factorial(n + l) * math.factorial(n - l - 1))


@lru_cache(maxsize=None)
def phi_nl(n: int, l: int) -> PolyExp:
    """Normalised radial eigenfunction built by ``n - l - 1`` creation steps."""
    qn = QuantumNumbers(n, l)
    return PolyExp(qn.l, *_dd_coeffs(_ladder_numerators(qn.n, qn.l), _ladder_norm_sq(qn.n, qn.l)))


@lru_cache(maxsize=None)
def laguerre_old(k: int, m: int = 0) -> tuple[int, ...]:
    """Integer coefficients of ``d^m/drho^m [exp(rho) d^k/drho^k (rho^k exp(-rho))]``.

    This is the Rodrigues-form Laguerre polynomial without the ``1/k!``, and
    its ``m``-th derivative (the associated polynomial in that convention).
    """
    if k < 0 or m < 0:
        raise DomainError("k and m must be non-negative")
    q = [0] * k + [1]  # exp(-rho) * q(rho)
    for _ in range(k):
        dq = [j * q[j] for j in range(1, len(q))] + [0]
        q = [dq[j] - q[j] for j in range(len(q))]
    for _ in range(m):
        q = [j * q[j] for j in range(1, len(q))] or [0]
    return tuple(q)


@lru_cache(maxsize=None)
def _oracle_numerators(n: int, l: int) -> tuple[int, ...]:
    lag = laguerre_old(n + l, 2 * l + 1)
    return tuple([0] * l + [-a for a in lag])


def _oracle_norm_sq(n: int, l: int) -> Fraction:
    return Fraction(math.factorial(n - l - 1), math.factorial(n + l) ** 3)


def phi_oracle(n: int, l: int) -> PolyExp:
    """Closed Laguerre form of ``phi_nl`` with its leading minus sign.

    Built from exact integer Rodrigues polynomials, independently of the
    ladder recurrence.
    """
    qn = QuantumNumbers(n, l)
    return PolyExp(qn.l, *_dd_coeffs(_oracle_numerators(qn.n, qn.l), _oracle_norm_sq(qn.n, qn.l)))


def _exact_equal(n: int, l: int) -> bool:
    a, fa = _ladder_numerators(n, l), _ladder_norm_sq(n, l)
    b, fb = _oracle_numerators(n, l), _oracle_norm_sq(n, l)
    return len(a) == len(b) and all(
        (x > 0) == (y > 0) and x * x * fa == y * y * fb for x, y in zip(a, b)
    )


def laguerre_weighted_norm(n: int, l: int, weight_power: int, n_other: int | None = None) -> Fraction:
    """Exact ``int_0^inf rho**w exp(-rho) L_{n+l}^{2l+1} L_{n'+l}^{2l+1} drho``.

    With ``w = 2l+1`` this is the orthogonality integral of the Laguerre
    polynomials in the Rodrigues convention; ``w = 2l+2`` is the variant that
    carries an extra factor ``2n`` on the diagonal.
    """
    n_other = n if n_other is None else n_other
    a = laguerre_old(n + l, 2 * l + 1)
    b = laguerre_old(n_other + l, 2 * l + 1)
    total = 0
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                if bj:
                    total += ai * bj * math.factorial(weight_power + i + j)
    return Fraction(total)


def r_cut(n: int, cfg: AtomConfig) -> float:
    """Radial cutoff 40 n^2 a0 / Z used for quadrature and plotting."""
    return 40.0 * n * n * cfg.a0 / cfg.Z


@dataclass(frozen=True, eq=False)
class RadialFunction:
    """``R_nl(r) = xi_n * phi_nl(2 Z r / (n a0))`` in units of ``cfg.a0``."""

    qn: QuantumNumbers
    cfg: AtomConfig
    poly: PolyExp
    scale: float = field(default=0.0)

    def __post_init__(self):
        if not self.scale:
            object.__setattr__(self, "scale", xi_scale(self.qn.n, self.cfg))

    def __call__(self, r):
        return self.scale * self.poly(rho_of_r(np.asarray(r, dtype=float), self.qn.n, self.cfg))

    def derivative(self, r):
        k = 2.0 * self.cfg.Z / (self.qn.n * self.cfg.a0)
        return self.scale * k * self.poly.derivative(rho_of_r(np.asarray(r, dtype=float), self.qn.n, self.cfg))

    @property
    def decay(self) -> float:
        """Exponential decay rate of ``R`` in r."""
        return self.cfg.Z / (self.qn.n * self.cfg.a0)

    @property
    def r_cut(self) -> float:
        return r_cut(self.qn.n, self.cfg)


def radial_R(n: int, l: int, cfg: AtomConfig) -> RadialFunction:
    qn = QuantumNumbers(n, l)
    return RadialFunction(qn, cfg, phi_nl(qn.n, qn.l))


def moment(n: int, l: int, k: int, cfg: AtomConfig) -> float:
    """``<r^k>_nl`` evaluated exactly from Gamma integrals of the coefficient form."""
    qn = QuantumNumbers(n, l)
    if k < -2 * l - 2:
        raise DomainError(f"<r^{k}> diverges for l={l} (needs k >= {-2 * l - 2})")
    nums = _ladder_numerators(qn.n, qn.l)
    total = 0
    for i, a in enumerate(nums):
        if a:
            for j, b in enumerate(nums):
                if b:
                    total += a * b * math.factorial(2 + k + i + j)
    rho_moment = Fraction(total) * _ladder_norm_sq(qn.n, qn.l)  # int rho^(2+k) phi^2 drho
    value = rho_moment / (2 * qn.n)
    s = qn.n * cfg.a0 / (2.0 * cfg.Z)
    return float(value) * s**k


def moment_quadrature(
    n: int, l: int, k: int, cfg: AtomConfig, spec: QuadratureSpec = DEFAULT_QUADRATURE
) -> float:
    """Quadrature cross-check of :func:`moment`."""
    if k < -2 * l - 2:
        raise DomainError(f"<r^{k}> diverges for l={l} (needs k >= {-2 * l - 2})")
    rf = radial_R(n, l, cfg)
    res = integrate_semi_infinite(
        lambda r: r ** (2 + k) * rf(r) ** 2, rf.r_cut, 2 * rf.decay, spec=spec
    )
    return res.value


def probability_density(rf: RadialFunction, r):
    r = np.asarray(r, dtype=float)
    val = r * r * rf(r) ** 2
    return val if val.ndim else float(val)


def bulge_count_grid(rf: RadialFunction, samples: int = 20000) -> int:
    """Strict local maxima of ``p(r)`` sampled on ``[0, r_cut]``."""
    r = np.linspace(0.0, rf.r_cut, samples)
    p = probability_density(rf, r)
    interior = (p[1:-1] > p[:-2]) & (p[1:-1] > p[2:])
    return int(np.count_nonzero(interior))


def _density_slope_numerators(n: int, l: int) -> list[int]:
    """Integer polynomial H with d/drho[rho^2 phi^2] proportional to rho^(2l+1) e^-rho Q H.

    Here phi = exp(-rho/2) rho^l Q(rho); the maxima of the density are the
    positive roots of H = 2(l+1) Q + 2 rho Q' - rho Q.
    """
    q = list(_ladder_numerators(n, l)[l:])
    dq = [j * q[j] for j in range(1, len(q))] + [0]
    h = [2 * (l + 1) * q[j] + 2 * (dq[j - 1] if j else 0) - (q[j - 1] if j else 0) for j in range(len(q))]
    h.append(-q[-1])
    return h


def _poly_trim(p: list) -> list:
    while len(p) > 1 and p[-1] == 0:
        p.pop()
    return p


def _poly_rem(a: list, b: list) -> list:
    a = [Fraction(x) for x in a]
    b = [Fraction(x) for x in b]
    while len(a) >= len(b) and any(a):
        f = a[-1] / b[-1]
        shift = len(a) - len(b)
        for i, bi in enumerate(b):
            a[shift + i] -= f * bi
        a.pop()
        _poly_trim(a)
    return _poly_trim(a) if a else [Fraction(0)]


def _sign_changes(values) -> int:
    s = [v for v in values if v != 0]
    return sum(1 for x, y in zip(s, s[1:]) if (x > 0) != (y > 0))


def _positive_root_count(poly: list[int]) -> int:
    """Number of distinct roots in (0, inf) by a Sturm sequence in exact arithmetic."""
    p0 = _poly_trim([Fraction(c) for c in poly])
    while p0[0] == 0:  # strip roots at the origin
        p0 = p0[1:]
    p1 = _poly_trim([j * p0[j] for j in range(1, len(p0))] or [Fraction(0)])
    seq = [p0, p1]
    while len(seq[-1]) > 1:
        r = _poly_rem(seq[-2], seq[-1])
        if len(r) == 1 and r[0] == 0:
            break
        seq.append([-c for c in r])
    at_zero = [p[0] for p in seq]
    at_inf = [p[-1] for p in seq]
    return _sign_changes(at_zero) - _sign_changes(at_inf)


def bulge_count(rf: RadialFunction, samples: int = 20000) -> int:
    """Number of maxima of ``p(r) = r^2 R^2``.

    The count comes from the exact positive roots of the density's derivative;
    a grid scan with ``samples`` points is run as a cross-check and a mismatch
    is reported as a warning.
    """
    exact = _positive_root_count(_density_slope_numerators(rf.qn.n, rf.qn.l))
    grid = bulge_count_grid(rf, samples)
    if grid != exact:
        warnings.warn(
            f"grid scan found {grid} maxima for n={rf.qn.n}, l={rf.qn.l}; derivative roots give {exact}",
            RuntimeWarning,
            stacklevel=2,
        )
    return exact


def density_mode(rf: RadialFunction, samples: int = 20000) -> float:
    """Location of the global maximum of ``p(r)``, refined to machine precision."""
    r = np.linspace(0.0, rf.r_cut, samples)
    p = probability_density(rf, r)
    i = int(np.argmax(p))
    h = np.array(_density_slope_numerators(rf.qn.n, rf.qn.l), dtype=float)
    slope = lambda x: float(np.polynomial.polynomial.polyval(rho_of_r(x, rf.qn.n, rf.cfg), h))  # noqa: E731
    lo, hi = r[max(i - 1, 1)], r[min(i + 1, samples - 1)]
    return float(brentq(slope, lo, hi, xtol=1e-15 * hi, rtol=4 * np.finfo(float).eps))


def apply_number_operator(poly: PolyExp, rho, l: int | None = None):
    """``N phi`` with ``N = -rho d2/drho2 - 2 d/drho + rho/4 + l(l+1)/rho``."""
    l = poly.l if l is None else l
    rho = np.asarray(rho, dtype=float)
    f0, f1, f2 = (poly.derivative(rho, j) for j in range(3))
    return -rho * f2 - 2.0 * f1 + 0.25 * rho * f0 + l * (l + 1) * f0 / rho


def apply_hn_operator(poly: PolyExp, rho, n: int | None = None):
    """``H_N phi = rho^2 phi'' + 2 rho phi' - rho^2 phi / 4 + n rho phi``."""
    n = poly.n if n is None else n
    rho = np.asarray(rho, dtype=float)
    f0, f1, f2 = (poly.derivative(rho, j) for j in range(3))
    return rho * rho * f2 + 2.0 * rho * f1 - 0.25 * rho * rho * f0 + n * rho * f0


def _legendre_normalized(l: int, m: int, x):
    """Fully normalised associated Legendre function, Condon-Shortley phase included."""
    x = np.asarray(x, dtype=float)
    s = np.sqrt(np.clip(1.0 - x * x, 0.0, None))
    pmm = np.full_like(x, math.sqrt(1.0 / (4.0 * math.pi)))
    for k in range(1, m + 1):
        pmm = -pmm * math.sqrt((2 * k + 1) / (2.0 * k)) * s
    if l == m:
        return pmm
    pm1 = x * math.sqrt(2 * m + 3) * pmm
    if l == m + 1:
        return pm1
    prev, cur = pmm, pm1
    for ll in range(m + 2, l + 1):
        a = math.sqrt((4 * ll * ll - 1) / (ll * ll - m * m))
        b = math.sqrt(((ll - 1) ** 2 - m * m) / (4 * (ll - 1) ** 2 - 1))
        prev, cur = cur, a * (x * cur - b * prev)
    return cur


def spherical_harmonic(l: int, m: int, theta, phi):
    """Orthonormal ``Y_lm(theta, phi)`` with polar angle ``theta``."""
    if l < 0 or abs(m) > l:
        raise DomainError(f"need |m| <= l, got l={l}, m={m}")
    theta = np.asarray(theta, dtype=float)
    phi = np.asarray(phi, dtype=float)
    am = abs(m)
    y = _legendre_normalized(l, am, np.cos(theta)) * np.exp(1j * am * phi)
    if m < 0:
        y = (-1) ** am * np.conj(y)
    return y if y.ndim else complex(y)


@dataclass(frozen=True, eq=False)
class SpatialWavefunction:
    """``psi(r, theta, phi) = R_nl(r) Y_lm(theta, phi)`` with an inert spin label."""

    radial: RadialFunction
    m: int
    spin: tuple[float, float] | None = None

    def __post_init__(self):
        if abs(self.m) > self.radial.qn.l:
            raise DomainError(f"need |m| <= l, got l={self.radial.qn.l}, m={self.m}")

    def __call__(self, r, theta, phi):
        return self.radial(r) * spherical_harmonic(self.radial.qn.l, self.m, theta, phi)


def assemble_psi(n: int, l: int, m: int, cfg: AtomConfig, spin: tuple[float, float] | None = None):
    if abs(m) > l:
        raise DomainError(f"need |m| <= l, got l={l}, m={m}")
    return SpatialWavefunction(radial_R(n, l, cfg), m, spin)
