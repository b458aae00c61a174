"""Truncated matrix representations of the radial operators in the |n l> basis.

For a fixed orbital number ``l`` the basis is ``n = l+1, ..., n_max``. All
matrices are dense complex arrays (dimensions stay in the hundreds) and use
hbar = 1. Truncation corrupts the last row/column of any product, so identities
such as ``[A-, A+] = 2N`` hold on the interior block only.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

import numpy as np

from .atom import QuantumNumbers, ladder_eigenvalue
from .exceptions import DomainError, SingularMatrixError, TruncationError
from .numerics import tridiag_solve

__all__ = [
    "OPERATOR_KINDS",
    "DEFAULT_HEADROOM",
    "TruncatedBasis",
    "OperatorMatrix",
    "build_operator",
    "commutator",
    "expectation",
    "interior",
    "uncertainty_product_nl",
]

OperatorKind = Literal["N", "HN", "Aplus", "Aminus", "rho", "p_rho", "rho_p_rho", "q", "p", "custom"]
OPERATOR_KINDS = ("N", "HN", "Aplus", "Aminus", "rho", "p_rho", "rho_p_rho", "q", "p")
DEFAULT_HEADROOM = 64
MAX_RHO_CONDITION = 1e12


@dataclass(frozen=True)
class TruncatedBasis:
    l: int
    n_max: int | None = None

    def __post_init__(self):
        if self.l < 0:
            raise DomainError(f"l must be >= 0, got {self.l}")
        if self.n_max is None:
            object.__setattr__(self, "n_max", self.l + DEFAULT_HEADROOM)
        if self.n_max - self.l < 2:
            raise TruncationError(f"basis needs dim >= 2, got n_max={self.n_max} for l={self.l}")

    @property
    def dim(self) -> int:
        return self.n_max - self.l

    @property
    def n_values(self) -> np.ndarray:
        return np.arange(self.l + 1, self.n_max + 1)

    def index(self, n: int) -> int:
        if not self.l + 1 <= n <= self.n_max:
            raise TruncationError(f"n={n} outside truncated basis n={self.l + 1}..{self.n_max}")
        return n - self.l - 1


@dataclass(frozen=True, eq=False)
class OperatorMatrix:
    basis: TruncatedBasis
    entries: np.ndarray
    kind: OperatorKind = "custom"

    def __post_init__(self):
        entries = np.array(self.entries, dtype=complex)
        if entries.shape != (self.basis.dim, self.basis.dim):
            raise ValueError(f"entries shape {entries.shape} does not match basis dim {self.basis.dim}")
        entries.setflags(write=False)
        object.__setattr__(self, "entries", entries)

    def _check_basis(self, other: "OperatorMatrix"):
        if self.basis != other.basis:
            raise ValueError(f"basis mismatch: {self.basis} vs {other.basis}")

    def __matmul__(self, other):
        if isinstance(other, OperatorMatrix):
            self._check_basis(other)
            return OperatorMatrix(self.basis, self.entries @ other.entries)
        return self.entries @ np.asarray(other)

    def __add__(self, other: "OperatorMatrix"):
        self._check_basis(other)
        return OperatorMatrix(self.basis, self.entries + other.entries)

    def __sub__(self, other: "OperatorMatrix"):
        self._check_basis(other)
        return OperatorMatrix(self.basis, self.entries - other.entries)

    def __mul__(self, scalar):
        return OperatorMatrix(self.basis, self.entries * scalar)

    __rmul__ = __mul__

    @property
    def dagger(self) -> "OperatorMatrix":
        return OperatorMatrix(self.basis, self.entries.conj().T)

    @property
    def real(self) -> np.ndarray:
        return self.entries.real

    def element(self, n_row: int, n_col: int) -> complex:
        """Matrix element ``<n_row l| X |n_col l>``."""
        return complex(self.entries[self.basis.index(n_row), self.basis.index(n_col)])


def _ladder_diagonal(basis: TruncatedBasis) -> np.ndarray:
    # a+_{n,l} for n = l+1 .. n_max-1
    return np.array([ladder_eigenvalue("+", n, basis.l) for n in basis.n_values[:-1]])


def _rho_bands(basis: TruncatedBasis):
    return 2.0 * basis.n_values.astype(float), -_ladder_diagonal(basis)


def build_operator(kind: OperatorKind, basis: TruncatedBasis) -> OperatorMatrix:
    """Truncated matrix of one of the standard operators.

    ``rho`` and ``rho_p_rho`` follow from the ladder matrices; ``p_rho`` solves
    ``rho X = (i/2)(A- - A+)`` with the tridiagonal solver, so its entries
    depend on ``n_max`` (the inverse of a truncated rho is not the truncation
    of the inverse).
    """
    dim = basis.dim
    if kind == "N":
        m = np.diag(basis.n_values.astype(float))
    elif kind == "HN":
        m = basis.l * (basis.l + 1) * np.eye(dim)
    elif kind == "Aplus":
        m = np.diag(_ladder_diagonal(basis), -1)
    elif kind == "Aminus":
        m = np.diag(_ladder_diagonal(basis), 1)
    elif kind == "rho":
        d, off = _rho_bands(basis)
        m = np.diag(d) + np.diag(off, 1) + np.diag(off, -1)
    elif kind == "rho_p_rho":
        a = _ladder_diagonal(basis)
        m = 0.5j * (np.diag(a, 1) - np.diag(a, -1))
    elif kind == "p_rho":
        a = _ladder_diagonal(basis)
        rhs = 0.5j * (np.diag(a, 1) - np.diag(a, -1))
        d, off = _rho_bands(basis)
        try:
            m = tridiag_solve(d, off, rhs, pivot_tol=1e-300)
        except SingularMatrixError as exc:
            raise SingularMatrixError(
                f"rho is singular in the truncation l={basis.l}, n_max={basis.n_max}",
                pivot=exc.pivot,
                condition=np.inf,
            ) from exc
        dense_rho = np.diag(d) + np.diag(off, 1) + np.diag(off, -1)
        cond = np.linalg.cond(dense_rho)
        if cond > MAX_RHO_CONDITION:
            raise SingularMatrixError(f"rho is ill-conditioned (cond ~ {cond:.3g})", condition=cond)
    elif kind == "q":
        a = _ladder_diagonal(basis)
        m = (np.diag(a, -1) + np.diag(a, 1)) / np.sqrt(2.0)
    elif kind == "p":
        a = _ladder_diagonal(basis)
        m = 1j * (np.diag(a, -1) - np.diag(a, 1)) / np.sqrt(2.0)
    else:
        raise ValueError(f"unknown operator kind {kind!r}; expected one of {OPERATOR_KINDS}")
    return OperatorMatrix(basis, m, kind)


def commutator(x: OperatorMatrix, y: OperatorMatrix) -> OperatorMatrix:
    if x.entries.shape != y.entries.shape:
        raise ValueError(f"dimension mismatch: {x.entries.shape} vs {y.entries.shape}")
    x._check_basis(y)
    return OperatorMatrix(x.basis, x.entries @ y.entries - y.entries @ x.entries)


def interior(op: OperatorMatrix | np.ndarray, drop: int = 1) -> np.ndarray:
    """Leading block with the last ``drop`` rows and columns removed."""
    m = op.entries if isinstance(op, OperatorMatrix) else np.asarray(op)
    k = m.shape[0] - drop
    return m[:k, :k]


def expectation(op: OperatorMatrix, qn: QuantumNumbers) -> complex:
    """Diagonal element ``<n l| op |n l>``; needs ``n < n_max`` for headroom."""
    basis = op.basis
    if qn.l != basis.l:
        raise ValueError(f"state has l={qn.l}, operator basis has l={basis.l}")
    if qn.n >= basis.n_max:
        raise TruncationError(f"n={qn.n} needs n < n_max={basis.n_max} for an exact expectation value")
    return op.element(qn.n, qn.n)


def uncertainty_product_nl(qn: QuantumNumbers, n_max: int | None = None) -> float:
    """sigma_q * sigma_p on the basis state ``|n l>`` from explicit matrices."""
    basis = TruncatedBasis(qn.l, n_max if n_max is not None else max(qn.n + 2, qn.l + DEFAULT_HEADROOM))
    if qn.n > basis.n_max - 2:
        raise TruncationError(f"n={qn.n} needs n <= n_max - 2 = {basis.n_max - 2} for q^2 and p^2")
    q = build_operator("q", basis)
    p = build_operator("p", basis)
    i = basis.index(qn.n)
    var_q = ((q @ q).entries[i, i] - q.entries[i, i] ** 2).real
    var_p = ((p @ p).entries[i, i] - p.entries[i, i] ** 2).real
    if abs(var_q - var_p) > 1e-10 * max(1.0, abs(var_q)):
        raise ArithmeticError(f"sigma_q^2={var_q} and sigma_p^2={var_p} disagree")
    return float(np.sqrt(var_q * var_p))
