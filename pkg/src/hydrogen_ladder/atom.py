"""Physical parameters, quantum numbers, energy spectrum and ladder eigenvalues.

Internally lengths are measured in Bohr radii and energies in units of the
reduced-mass rest energy; conversion to nm / eV happens in the functions that
take an :class:`AtomConfig`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

import numpy as np

from .exceptions import DomainError

__all__ = [
    "HBAR_C_EV_NM",
    "ELECTRON_REST_ENERGY_EV",
    "ALPHA_PAPER",
    "ALPHA_CODATA",
    "QuantumNumbers",
    "AtomConfig",
    "ScaledCoordinate",
    "energy_level",
    "degeneracy",
    "ladder_radicand",
    "ladder_eigenvalue",
    "rho_of_r",
    "r_of_rho",
    "xi_scale",
]

HBAR_C_EV_NM = 197.3269804
ELECTRON_REST_ENERGY_EV = 510998.95
ALPHA_PAPER = 1.0 / 137.0
ALPHA_CODATA = 7.2973525693e-3

ConstantsMode = Literal["paper", "codata"]


@dataclass(frozen=True)
class QuantumNumbers:
    """Principal and orbital quantum numbers of the state ``|n l>``."""

    n: int
    l: int

    def __post_init__(self):
        for name in ("n", "l"):
            v = getattr(self, name)
            if isinstance(v, bool) or not isinstance(v, (int, np.integer)):
                raise DomainError(f"{name} must be an integer, got {v!r}")
            object.__setattr__(self, name, int(v))
        if self.n < 1:
            raise DomainError(f"n must be >= 1, got n={self.n}")
        if self.l < 0:
            raise DomainError(f"l must be >= 0, got l={self.l}")
        if self.n < self.l + 1:
            raise DomainError(f"n must be >= l + 1, got n={self.n}, l={self.l}")

    @property
    def n_r(self) -> int:
        """Radial quantum number (number of radial nodes)."""
        return self.n - self.l - 1


def _qn(n, l=None) -> QuantumNumbers:
    if isinstance(n, QuantumNumbers):
        return n
    return QuantumNumbers(n, l)


@dataclass(frozen=True)
class AtomConfig:
    """Hydrogen-like atom parameters.

    ``mu_c2``, ``alpha`` and ``a0`` default from ``constants_mode``; ``a0`` is
    derived as hbar*c / (mu c^2 alpha) in nm unless given explicitly.
    """

    Z: int = 1
    constants_mode: ConstantsMode = "paper"
    mu_c2: float | None = None
    alpha: float | None = None
    a0: float | None = None

    def __post_init__(self):
        if self.constants_mode not in ("paper", "codata"):
            raise DomainError(f"constants_mode must be 'paper' or 'codata', got {self.constants_mode!r}")
        if isinstance(self.Z, bool) or not isinstance(self.Z, (int, np.integer)) or self.Z < 1:
            raise DomainError(f"Z must be a positive integer, got {self.Z!r}")
        object.__setattr__(self, "Z", int(self.Z))
        if self.mu_c2 is None:
            object.__setattr__(self, "mu_c2", ELECTRON_REST_ENERGY_EV)
        if self.alpha is None:
            alpha = ALPHA_PAPER if self.constants_mode == "paper" else ALPHA_CODATA
            object.__setattr__(self, "alpha", alpha)
        if not self.mu_c2 > 0:
            raise DomainError(f"mu_c2 must be positive, got {self.mu_c2}")
        if not 0 < self.alpha < 1:
            raise DomainError(f"alpha must lie in (0, 1), got {self.alpha}")
        if self.a0 is None:
            object.__setattr__(self, "a0", HBAR_C_EV_NM / (self.mu_c2 * self.alpha))
        if not self.a0 > 0:
            raise DomainError(f"a0 must be positive, got {self.a0}")

    @classmethod
    def atomic_units(cls, Z: int = 1) -> "AtomConfig":
        """Configuration with lengths measured in Bohr radii (a0 = 1)."""
        return cls(Z=Z, a0=1.0)


@dataclass(frozen=True)
class ScaledCoordinate:
    """A point on the dimensionless radial axis, tied to the ``n`` of its scale."""

    rho: float
    n_context: int
    cfg: AtomConfig

    @property
    def r(self) -> float:
        return r_of_rho(self.rho, self.n_context, self.cfg)

    @classmethod
    def from_r(cls, r: float, n: int, cfg: AtomConfig) -> "ScaledCoordinate":
        return cls(rho_of_r(r, n, cfg), n, cfg)


def energy_level(qn: QuantumNumbers, cfg: AtomConfig) -> float:
    """Bound-state energy in eV; depends on ``n`` only."""
    return -0.5 * cfg.mu_c2 * (cfg.Z * cfg.alpha) ** 2 / qn.n**2


def degeneracy(n: int) -> int:
    """Number of states at level ``n`` counting both spin projections."""
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    return 2 * n * n


def ladder_radicand(sign: str, n: int, l: int) -> int:
    """Integer ``n(n +- 1) - l(l+1)``, the square of the ladder eigenvalue."""
    if sign == "+":
        return n * (n + 1) - l * (l + 1)
    if sign == "-":
        return n * (n - 1) - l * (l + 1)
    raise ValueError(f"sign must be '+' or '-', got {sign!r}")


def ladder_eigenvalue(sign: str, qn: QuantumNumbers | int, l: int | None = None) -> float:
    """Eigenvalue of ``A+`` or ``A-`` acting on ``|n l>``.

    Evaluated in the factored form sqrt((n -+ l)(n +- l +- 1)), which is an
    integer product so no cancellation occurs.
    """
    if isinstance(qn, QuantumNumbers):
        n, l = qn.n, qn.l
    else:
        n = int(qn)
    if sign == "+":
        radicand = (n - l) * (n + l + 1)
    elif sign == "-":
        radicand = (n + l) * (n - l - 1)
    else:
        raise ValueError(f"sign must be '+' or '-', got {sign!r}")
    if radicand < 0:
        raise DomainError(f"negative ladder radicand {radicand} for sign={sign}, n={n}, l={l}")
    return math.sqrt(radicand)


def _scale(n: int, cfg: AtomConfig) -> float:
    return 2.0 * cfg.Z / (n * cfg.a0)


def rho_of_r(r, n: int, cfg: AtomConfig):
    return np.multiply(r, _scale(n, cfg)) if np.ndim(r) else float(r) * _scale(n, cfg)


def r_of_rho(rho, n: int, cfg: AtomConfig):
    s = n * cfg.a0 / (2.0 * cfg.Z)
    return np.multiply(rho, s) if np.ndim(rho) else float(rho) * s


def xi_scale(n: int, cfg: AtomConfig) -> float:
    """Jacobian factor linking ``R_nl(r)`` to ``phi_nl(rho)``; evaluated in log space."""
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    log_xi = -0.5 * math.log(2 * n) + 1.5 * (math.log(2 * cfg.Z) - math.log(n) - math.log(cfg.a0))
    return math.exp(log_xi)
