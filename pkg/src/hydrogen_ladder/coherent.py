"""Coherent states of the annihilation operator and the M_l normalisation.

A coherent state ``|z>`` in the ``l`` column has Fock coefficients

    c_n = M_l(2|z|) z**k / sqrt(k! (k+2l+1)!),   k = n - l - 1,

where ``M_l(x)**-2 = sum_k (x/2)**(2k) / (k! (k+2l+1)!)``. Everything is
evaluated through positive power series (no cancellation); factorials go
through log space so large cutoffs cannot overflow.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import NamedTuple

import numpy as np

from .atom import AtomConfig, QuantumNumbers, ladder_eigenvalue
from .exceptions import DomainError, TruncationError
from .numerics import kahan_sum, log_factorial
from .operators import TruncatedBasis, build_operator
from .radial import radial_R

__all__ = [
    "SERIES_RTOL",
    "bessel_I",
    "bessel_M",
    "BesselMTable",
    "TableCheck",
    "load_bessel_m_table",
    "check_bessel_m_table",
    "CoherentState",
    "coherent_state",
    "coherent_state_polar",
    "displacement_coefficients",
    "mean_occupation",
    "occupation_variance",
    "coherent_overlap",
    "CoherentUncertainty",
    "coherent_uncertainty",
    "coherent_radial",
]

SERIES_RTOL = 1e-18
_MAX_TERMS = 10_000


def _positive_series(first: float, ratio) -> float:
    """Sum ``t_0 = first, t_{k+1} = t_k * ratio(k)`` until terms drop below SERIES_RTOL of the sum."""
    terms = [first]
    total = first
    t = first
    for k in range(_MAX_TERMS):
        t *= ratio(k)
        terms.append(t)
        total += t
        if t <= SERIES_RTOL * total:
            break
    return kahan_sum(terms)


def bessel_I(order: int, x: float) -> float:
    """Modified Bessel function of the first kind for integer order, by power series."""
    if order < 0 or int(order) != order:
        raise DomainError(f"order must be a non-negative integer, got {order}")
    if x < 0:
        raise DomainError(f"x must be >= 0, got {x}")
    order = int(order)
    if x == 0:
        return 1.0 if order == 0 else 0.0
    h2 = (0.5 * x) ** 2
    first = math.exp(order * math.log(0.5 * x) - log_factorial(order))
    return _positive_series(first, lambda k: h2 / ((k + 1) * (k + 1 + order)))


def _m_series(l: int, x: float) -> float:
    h2 = (0.5 * x) ** 2
    first = math.exp(-log_factorial(2 * l + 1))
    if x == 0:
        return first
    return _positive_series(first, lambda k: h2 / ((k + 1) * (k + 2 * l + 2)))


def bessel_M(l: int, x: float) -> float:
    """Coherent-state normalisation ``M_l(x)``; finite at ``x = 0`` where it equals sqrt((2l+1)!)."""
    if l < 0 or int(l) != l:
        raise DomainError(f"l must be a non-negative integer, got {l}")
    if x < 0:
        raise DomainError(f"x must be >= 0, got {x}")
    return 1.0 / math.sqrt(_m_series(int(l), float(x)))


@dataclass(frozen=True, eq=False)
class BesselMTable:
    """Reference values of ``M_l(x)`` for l = 0..5 on x = 0.0, 0.1, ..., 5.0."""

    x: np.ndarray
    values: np.ndarray  # shape (len(x), 6), column l

    @property
    def orders(self) -> range:
        return range(self.values.shape[1])


class TableCheck(NamedTuple):
    x: float
    l: int
    reference: float
    computed: float
    error: float
    tolerance: float
    passed: bool

    @property
    def name(self) -> str:
        return f"bessel_m_table/l={self.l}/x={self.x:.1f}"


def load_bessel_m_table(path: str | Path | None = None) -> BesselMTable:
    if path is None:
        text = resources.files("hydrogen_ladder").joinpath("data/bessel_m_table.csv").read_text()
    else:
        text = Path(path).read_text()
    rows = list(csv.reader(text.splitlines()))
    header, body = rows[0], [r for r in rows[1:] if r]
    if header[0] != "x" or header[1:] != [f"M{l}" for l in range(len(header) - 1)]:
        raise ValueError(f"unexpected table header {header}")
    data = np.array([[float(v) for v in r] for r in body])
    return BesselMTable(data[:, 0], data[:, 1:])


def check_bessel_m_table(table: BesselMTable | None = None, tol: float = 1e-9) -> list[TableCheck]:
    """Compare every table entry with :func:`bessel_M`.

    Entries below 10 are checked to ``tol`` absolute, larger ones to ``tol`` relative.
    """
    table = load_bessel_m_table() if table is None else table
    out = []
    for i, x in enumerate(table.x):
        for l in table.orders:
            ref = float(table.values[i, l])
            got = bessel_M(l, float(x))
            if abs(ref) < 10:
                err, lim = abs(got - ref), tol
            else:
                err, lim = abs(got - ref) / abs(ref), tol
            out.append(TableCheck(float(x), l, ref, got, err, lim, err <= lim))
    return out


@dataclass(frozen=True, eq=False)
class CoherentState:
    """Eigenvector of ``A-`` with eigenvalue ``z``; ``coeffs[i]`` belongs to ``n = l + 1 + i``."""

    l: int
    z: complex
    coeffs: np.ndarray

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=complex)
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)
        object.__setattr__(self, "z", complex(self.z))

    @property
    def n_cut(self) -> int:
        return self.l + self.coeffs.size

    @property
    def n_values(self) -> np.ndarray:
        return np.arange(self.l + 1, self.n_cut + 1)

    @property
    def norm(self) -> float:
        return float(np.sqrt(kahan_sum((np.abs(self.coeffs) ** 2).tolist())))

    def padded(self, dim: int) -> np.ndarray:
        if dim < self.coeffs.size:
            raise TruncationError(f"cannot pad {self.coeffs.size} coefficients into dim {dim}")
        v = np.zeros(dim, dtype=complex)
        v[: self.coeffs.size] = self.coeffs
        return v


def _log_weight(l: int, k: int, abs_z: float) -> float:
    """log of |z|^(2k) / (k! (k+2l+1)!)."""
    return 2 * k * math.log(abs_z) - log_factorial(k) - log_factorial(k + 2 * l + 1)


def _cutoff(l: int, abs_z: float, tolerance: float) -> int:
    """Number of retained terms.

    Both the dropped probability mass and the boundary defect of the truncated
    eigenrelation (``a-_{n_cut+1} |c_{n_cut+1}|``, the only nonzero entry of
    ``A- c - z c`` on the retained block) must fall below ``tolerance``.
    """
    if abs_z == 0:
        return 1
    log_m2 = 2 * math.log(bessel_M(l, 2 * abs_z))
    z2 = abs_z * abs_z
    k = 0
    while True:
        ratio = z2 / ((k + 2) * (k + 2 * l + 3))  # t_{k+2} / t_{k+1}
        if ratio < 0.5:
            # geometric bound on the tail that starts at term k+1
            first = math.exp(log_m2 + _log_weight(l, k + 1, abs_z))
            tail = first / (1.0 - ratio)
            defect = math.sqrt(first * (k + 1) * (k + 2 * l + 2))
            if tail < tolerance and defect < tolerance:
                return k + 1
        k += 1
        if k > _MAX_TERMS:
            raise TruncationError(f"coherent state cutoff exceeded {_MAX_TERMS} terms for |z|={abs_z}")


def coherent_state(l: int, z: complex, tolerance: float = 1e-12) -> CoherentState:
    """Coherent state ``|z>`` in the ``l`` column.

    The expansion is cut once the dropped probability and the truncation
    defect of ``A-|z> = z|z>`` are both below ``tolerance``.
    """
    if l < 0:
        raise DomainError(f"l must be >= 0, got {l}")
    z = complex(z)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise DomainError(f"z must be finite, got {z}")
    abs_z = abs(z)
    count = _cutoff(l, abs_z, tolerance)
    if abs_z == 0:
        return CoherentState(l, z, np.array([1.0 + 0j]))
    log_m = math.log(bessel_M(l, 2 * abs_z))
    phase = z / abs_z
    k = np.arange(count)
    mags = np.array([math.exp(log_m + 0.5 * _log_weight(l, int(j), abs_z)) for j in k])
    return CoherentState(l, z, mags * phase**k)


def coherent_state_polar(l: int, modulus: float, angle: float, tolerance: float = 1e-12) -> CoherentState:
    """Same as :func:`coherent_state` with ``z = modulus * exp(i angle)``."""
    if modulus < 0:
        raise DomainError(f"modulus must be >= 0, got {modulus}")
    return coherent_state(l, modulus * complex(math.cos(angle), math.sin(angle)), tolerance)


def displacement_coefficients(l: int, z: complex, tolerance: float = 1e-12) -> np.ndarray:
    """Fock coefficients of ``D_l(z)|l+1, l>`` from powers of the truncated ``A+`` matrix.

    The displacement series ``M_l sqrt((2l+1)!) sum_k z^k/(k!(k+2l+1)!) A+^k``
    is applied term by term; the running vector absorbs one factor
    ``z / (k (k+2l+1))`` and one ``A+`` per step so nothing overflows.
    """
    z = complex(z)
    count = _cutoff(l, abs(z), tolerance)
    dim = max(count, 2)
    a_plus = build_operator("Aplus", TruncatedBasis(l, l + dim)).entries
    w = np.zeros(dim, dtype=complex)
    w[0] = bessel_M(l, 2 * abs(z)) / math.sqrt(math.factorial(2 * l + 1))
    total = w.copy()
    for k in range(1, count):
        w = (z / (k * (k + 2 * l + 1))) * (a_plus @ w)
        total += w
    return total[:count]


def mean_occupation(state: CoherentState) -> float:
    """Expected ``N`` from its own power series (independent of the stored coefficients)."""
    l = state.l
    abs_z = abs(state.z)
    if abs_z == 0:
        return float(l + 1)
    z2 = abs_z * abs_z
    # sum_k (k+l+1) |z|^(2k) / (k!(k+2l+1)!) as a ratio-driven series
    first = (l + 1) * math.exp(-log_factorial(2 * l + 1))
    series = _positive_series(first, lambda k: z2 * (k + l + 2) / ((k + l + 1) * (k + 1) * (k + 2 * l + 2)))
    return bessel_M(l, 2 * abs_z) ** 2 * series


def occupation_variance(state: CoherentState) -> float:
    p = np.abs(state.coeffs) ** 2
    n = state.n_values
    mean = float(np.dot(p, n))
    return float(np.dot(p, (n - mean) ** 2))


def coherent_overlap(a: CoherentState, b: CoherentState) -> complex:
    """``<a|b>`` over the common truncation."""
    if a.l != b.l:
        return 0j
    m = min(a.coeffs.size, b.coeffs.size)
    return complex(np.vdot(a.coeffs[:m], b.coeffs[:m]))


class CoherentUncertainty(NamedTuple):
    sigma_q: float
    sigma_p: float
    product: float
    mean_q: complex
    mean_p: complex


def coherent_uncertainty(state: CoherentState, n_max: int | None = None) -> CoherentUncertainty:
    """Quadrature spreads of ``q`` and ``p`` from truncated operator matrices."""
    need = state.n_cut + 2
    n_max = need if n_max is None else n_max
    if n_max < need:
        raise TruncationError(f"n_max={n_max} leaves no headroom; need n_max >= n_cut + 2 = {need}")
    basis = TruncatedBasis(state.l, n_max)
    v = state.padded(basis.dim)
    q = build_operator("q", basis).entries
    p = build_operator("p", basis).entries
    qv, pv = q @ v, p @ v
    mean_q, mean_p = np.vdot(v, qv), np.vdot(v, pv)
    var_q = (np.vdot(qv, qv) - mean_q * mean_q).real
    var_p = (np.vdot(pv, pv) - mean_p * mean_p).real
    sq, sp = math.sqrt(max(var_q, 0.0)), math.sqrt(max(var_p, 0.0))
    return CoherentUncertainty(sq, sp, sq * sp, complex(mean_q), complex(mean_p))


def coherent_radial(state: CoherentState, cfg: AtomConfig, r):
    """``R(z, r) = sum_n c_n R_nl(r)`` over the retained coefficients."""
    r = np.asarray(r, dtype=float)
    total = np.zeros(r.shape, dtype=complex)
    for n, c in zip(state.n_values, state.coeffs):
        total += c * radial_R(int(n), state.l, cfg)(r)
    return total if total.ndim else complex(total)


def _coefficient_ratio_check(state: CoherentState) -> float:
    """Largest deviation of ``c_{n+1}/c_n`` from ``z / a-_{n+1,l}``."""
    worst = 0.0
    for i in range(state.coeffs.size - 1):
        n = state.l + 1 + i
        expected = state.z / ladder_eigenvalue("-", QuantumNumbers(n + 1, state.l))
        worst = max(worst, abs(state.coeffs[i + 1] / state.coeffs[i] - expected) / abs(expected))
    return worst
