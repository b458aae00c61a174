"""Self-validation suite behind ``hydrogen-ladder validate``.

Each check is a named callable returning ``(residual, tolerance)``; it passes
when ``residual <= tolerance``. The ``fast`` level covers the reference table
and closed-form goldens, ``full`` adds quadrature and oracle sweeps.
"""

from __future__ import annotations

import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Callable

import numpy as np

from .atom import AtomConfig, QuantumNumbers, degeneracy, energy_level, ladder_eigenvalue
from .coherent import (
    bessel_I,
    bessel_M,
    coherent_radial,
    coherent_state,
    coherent_uncertainty,
    displacement_coefficients,
    load_bessel_m_table,
    mean_occupation,
)
from .numerics import QuadratureSpec, integrate
from .operators import TruncatedBasis, build_operator, uncertainty_product_nl
from .radial import (
    bulge_count,
    bulge_count_grid,
    density_mode,
    moment,
    moment_quadrature,
    phi_nl,
    phi_oracle,
    radial_R,
)

__all__ = ["CheckRecord", "ValidationReport", "build_checks", "run_validation"]

Check = Callable[[], tuple[float, float]]

S2, S3, S6, S10 = math.sqrt(2), math.sqrt(3), math.sqrt(6), math.sqrt(10)

# Leading blocks of the standard operator matrices, keyed by (kind, l).
MATRIX_GOLDENS = {
    ("N", 0): np.diag([1.0, 2.0, 3.0]),
    ("HN", 0): np.zeros((3, 3)),
    ("Aplus", 0): np.array([[0, 0, 0, 0], [S2, 0, 0, 0], [0, S6, 0, 0], [0, 0, 2 * S3, 0]]),
    ("Aminus", 0): np.array([[0, S2, 0, 0], [0, 0, S6, 0], [0, 0, 0, 2 * S3], [0, 0, 0, 0]]),
    ("rho", 0): np.array([[2, -S2, 0, 0], [-S2, 4, -S6, 0], [0, -S6, 6, -2 * S3], [0, 0, -2 * S3, 8]]),
    ("rho_p_rho", 0): 0.5j * np.array([[0, S2, 0, 0], [-S2, 0, S6, 0], [0, -S6, 0, 2 * S3], [0, 0, -2 * S3, 0]]),
    ("N", 1): np.diag([2.0, 3.0, 4.0]),
    ("HN", 1): 2 * np.eye(3),
    ("Aplus", 1): np.array([[0, 0, 0, 0], [2, 0, 0, 0], [0, S10, 0, 0], [0, 0, 3 * S2, 0]]),
    ("Aminus", 1): np.array([[0, 2, 0, 0], [0, 0, S10, 0], [0, 0, 0, 3 * S2], [0, 0, 0, 0]]),
    ("rho", 1): np.array([[4, -2, 0], [-2, 6, -S10], [0, -S10, 8]]),
    ("rho_p_rho", 1): 0.5j * np.array([[0, 2, 0, 0], [-2, 0, S10, 0], [0, -S10, 0, 3 * S2], [0, 0, -3 * S2, 0]]),
}

# Leading 3x3 of P_rho, which matches a 4-state truncation of rho^-1.
P_RHO_GOLDEN = {
    0: 0.5j * np.array(
        [
            [-3 / 5, 2 * S2 / 5, 2 * S3 / 5],
            [-3 * S2 / 5, -1 / 5, 2 * S6 / 5],  # (2,2) printed as +1/5
            [-4 * S3 / 15, -4 * S6 / 15, 1 / 5],
        ]
    ),
    1: 0.5j * np.array(
        [
            [-31 / 105, 43 / 105, 11 * S10 / 105],
            [-62 / 105, -19 / 105, 22 * S10 / 105],
            [-2 * S10 / 21, -4 * S10 / 21, 1 / 21],
        ]
    ),
}


def _radial_closed_forms(Z: float = 1.0, a0: float = 1.0) -> dict[tuple[int, int], Callable]:
    k = Z / a0
    return {
        (1, 0): lambda r: 2 * k**1.5 * np.exp(-k * r),
        (2, 0): lambda r: 2 * (k / 2) ** 1.5 * (1 - k * r / 2) * np.exp(-k * r / 2),
        (3, 0): lambda r: 2 * (k / 3) ** 1.5 * (1 - 2 * k * r / 3 + 2 / 27 * (k * r) ** 2) * np.exp(-k * r / 3),
        (2, 1): lambda r: (1 / S3) * (k / 2) ** 1.5 * (k * r) * np.exp(-k * r / 2),
        (3, 1): lambda r: (4 * S2 / 9) * (k / 3) ** 1.5 * (k * r) * (1 - k * r / 6) * np.exp(-k * r / 3),
        (3, 2): lambda r: (2 * S2 / (27 * math.sqrt(5))) * (k / 3) ** 1.5 * (k * r) ** 2 * np.exp(-k * r / 3),
    }


RADIAL_CLOSED_FORMS = _radial_closed_forms()


@dataclass
class CheckRecord:
    name: str
    status: str
    residual: float
    tolerance: float
    runtime_ms: float
    message: str = ""


@dataclass
class ValidationReport:
    level: str
    records: list[CheckRecord] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.status == "pass" for r in self.records)

    @property
    def counts(self) -> dict[str, int]:
        n_pass = sum(r.status == "pass" for r in self.records)
        return {"total": len(self.records), "pass": n_pass, "fail": len(self.records) - n_pass}

    def failures(self) -> list[CheckRecord]:
        return [r for r in self.records if r.status != "pass"]

    def to_dict(self, include_timing: bool = True) -> dict:
        recs = []
        for r in self.records:
            d = asdict(r)
            if not include_timing:
                d.pop("runtime_ms")
            recs.append(d)
        return {
            "level": self.level,
            "status": "pass" if self.passed else "fail",
            "summary": self.counts,
            "checks": recs,
        }


def _max_rel(a, b) -> float:
    a, b = np.asarray(a), np.asarray(b)
    return float(np.max(np.abs(a - b)) / max(np.max(np.abs(b)), 1e-300))


def _fast_checks(table_path: str | Path | None) -> dict[str, Check]:
    checks: dict[str, Check] = {}
    table = load_bessel_m_table(table_path)

    def table_entry(x, l, ref):
        def run():
            got = bessel_M(l, x)
            err = abs(got - ref) if abs(ref) < 10 else abs(got - ref) / abs(ref)
            return err, 1e-9

        return run

    for i, x in enumerate(table.x):
        for l in table.orders:
            checks[f"bessel_m_table/l={l}/x={x:.1f}"] = table_entry(float(x), l, float(table.values[i, l]))

    for l in range(6):
        def ident(l=l):
            worst = 0.0
            for x in np.linspace(0.1, 5.0, 50):
                lhs = bessel_M(l, x) ** -2 * (x / 2) ** (2 * l + 1)
                worst = max(worst, abs(lhs - bessel_I(2 * l + 1, x)) / bessel_I(2 * l + 1, x))
            return worst, 1e-12

        checks[f"bessel_m/series_identity/l={l}"] = ident

    paper = AtomConfig(constants_mode="paper")
    checks["energy/E1_paper"] = lambda: (abs(energy_level(QuantumNumbers(1, 0), paper) + 13.6), 0.1)

    def n2_scaling():
        e1 = energy_level(QuantumNumbers(1, 0), paper)
        return max(abs(energy_level(QuantumNumbers(n, 0), paper) * n * n - e1) / abs(e1) for n in range(1, 21)), 1e-12

    checks["energy/n2_scaling"] = n2_scaling
    checks["energy/degeneracy"] = lambda: (
        float(sum(abs(degeneracy(n) - 2 * n * n) for n in range(1, 11))),
        0.0,
    )

    def ladder_golden():
        got = [ladder_eigenvalue("+", QuantumNumbers(1, 0)), ladder_eigenvalue("+", QuantumNumbers(2, 1))]
        got += [ladder_eigenvalue("-", QuantumNumbers(l + 1, l)) for l in range(10)]
        return float(np.max(np.abs(np.array(got) - np.array([S2, 2.0] + [0.0] * 10)))), 1e-15

    checks["ladder/eigenvalue_goldens"] = ladder_golden

    for (kind, l), ref in MATRIX_GOLDENS.items():
        def mat(kind=kind, l=l, ref=ref):
            m = build_operator(kind, TruncatedBasis(l, l + 8)).entries
            k = ref.shape[0]
            return float(np.max(np.abs(m[:k, :k] - ref))), 1e-12

        checks[f"matrix_golden/{kind}/l={l}"] = mat

    for l, ref in P_RHO_GOLDEN.items():
        def prho(l=l, ref=ref):
            m = build_operator("p_rho", TruncatedBasis(l, l + 4)).entries[:3, :3]
            return float(np.max(np.abs(m - ref))), 1e-12

        checks[f"matrix_golden/p_rho_4state/l={l}"] = prho

    r = np.linspace(0.0, 30.0, 100)
    au = AtomConfig.atomic_units()
    for (n, l), f in RADIAL_CLOSED_FORMS.items():
        checks[f"radial_golden/R{n}{l}"] = lambda n=n, l=l, f=f: (_max_rel(radial_R(n, l, au)(r), f(r)), 1e-12)

    for n in range(1, 13):
        def moments(n=n):
            worst = 0.0
            for l in range(n):
                r1 = moment(n, l, 1, au)
                rm1 = moment(n, l, -1, au)
                worst = max(worst, abs(r1 / (0.5 * (3 * n * n - l * (l + 1))) - 1), abs(rm1 * n * n - 1))
            return worst, 1e-10

        checks[f"moments/r_and_inverse_r/n={n}"] = moments

    for l in range(3):
        def diag(l=l):
            basis = TruncatedBasis(l, l + 16)
            rho = build_operator("rho", basis)
            rho2 = (rho @ rho).entries
            worst = 0.0
            for n in range(l + 1, l + 14):
                i = basis.index(n)
                worst = max(
                    worst,
                    abs(rho.entries[i, i] - 2 * n),
                    abs(rho2[i, i] - (6 * n * n - 2 * l * (l + 1))),
                )
            return worst, 1e-12

        checks[f"matrix/rho_moments/l={l}"] = diag

    def unc_nl():
        worst = 0.0
        for n in range(1, 13):
            for l in range(n):
                worst = max(worst, abs(uncertainty_product_nl(QuantumNumbers(n, l)) - (n * n - l * (l + 1))))
        return worst, 1e-10

    checks["uncertainty/basis_states"] = unc_nl

    for z in (0.5, 1 + 1j, 3.0):
        for l in range(4):
            def coh(z=z, l=l):
                s = coherent_state(l, z)
                nbar = mean_occupation(s)
                u = coherent_uncertainty(s)
                basis = TruncatedBasis(l, s.n_cut + 2)
                v = s.padded(basis.dim)
                am = build_operator("Aminus", basis).entries
                eig = float(np.max(np.abs((am @ v - z * v)[: s.coeffs.size])))
                res = max(
                    abs(u.sigma_q**2 - nbar),
                    abs(u.sigma_p**2 - nbar),
                    abs(u.product - nbar),
                    eig,
                    abs(s.norm**2 - 1) * 100,
                    float(np.max(np.abs(displacement_coefficients(l, z) - s.coeffs))),
                )
                return res, 1e-8

            checks[f"coherent/state/l={l}/z={z}"] = coh
    return checks


def _full_checks() -> dict[str, Check]:
    checks: dict[str, Check] = {}
    au = AtomConfig.atomic_units()
    spec = QuadratureSpec(abs_tol=1e-11)

    for l in range(3):
        def gram_rho(l=l):
            ns = range(l + 1, 13)
            worst = 0.0
            for a in ns:
                for b in ns:
                    if b < a:
                        continue
                    pa, pb = phi_nl(a, l), phi_nl(b, l)
                    val = integrate(lambda x: x * pa(x) * pb(x), 0.0, 80.0 * max(a, b), spec).value
                    worst = max(worst, abs(val - (a == b)))
            return worst, 1e-8

        def gram_r(l=l):
            ns = range(l + 1, 13)
            worst = 0.0
            for a in ns:
                for b in ns:
                    if b < a:
                        continue
                    ra, rb = radial_R(a, l, au), radial_R(b, l, au)
                    val = integrate(lambda r: r * r * ra(r) * rb(r), 0.0, 40.0 * max(a, b) ** 2, spec).value
                    worst = max(worst, abs(val - (a == b)))
            return worst, 1e-8

        checks[f"orthonormality/rho_measure/l={l}"] = gram_rho
        checks[f"orthonormality/r_measure/l={l}"] = gram_r

    for n in range(1, 21):
        def oracle(n=n):
            rho = np.linspace(0.0, 200.0, 2001)
            worst = 0.0
            for l in range(n):
                a, b = phi_nl(n, l)(rho), phi_oracle(n, l)(rho)
                worst = max(worst, float(np.max(np.abs(a - b)) / np.max(np.abs(a))))
            return worst, 1e-10

        checks[f"oracle/ladder_vs_laguerre/n={n}"] = oracle

    def bulges():
        bad = 0
        for n in range(1, 9):
            for l in range(n):
                rf = radial_R(n, l, au)
                bad += (bulge_count(rf) != n - l) + (bulge_count_grid(rf) != n - l)
        return float(bad), 0.0

    checks["structure/bulge_count"] = bulges

    def modes():
        return max(abs(density_mode(radial_R(n, n - 1, au)) / (n * n) - 1) for n in range(1, 7)), 1e-8

    checks["structure/circular_mode"] = modes

    def moment_quad():
        worst = 0.0
        for n in range(1, 7):
            for l in range(n):
                for k in (-1, 1, 2):
                    exact = moment(n, l, k, au)
                    worst = max(worst, abs(moment_quadrature(n, l, k, au) - exact) / exact)
        return worst, 1e-8

    checks["moments/quadrature_cross_check"] = moment_quad

    def coherent_norm():
        worst = 0.0
        for l in range(3):
            s = coherent_state(l, 1.0)
            f = lambda r: r * r * np.abs(coherent_radial(s, au, r)) ** 2  # noqa: E731
            val = integrate(f, 0.0, 40.0 * s.n_cut**2, spec).value
            worst = max(worst, abs(val - 1))
        return worst, 1e-7

    checks["coherent/radial_normalization"] = coherent_norm
    return checks


def build_checks(level: str = "fast", table_path: str | Path | None = None) -> dict[str, Check]:
    if level not in ("fast", "full"):
        raise ValueError(f"level must be 'fast' or 'full', got {level!r}")
    checks = _fast_checks(table_path)
    if level == "full":
        checks.update(_full_checks())
    return checks


def _run_one(name: str, fn: Check) -> CheckRecord:
    t0 = time.perf_counter()
    try:
        residual, tol = fn()
        status = "pass" if residual <= tol else "fail"
        msg = ""
    except Exception as exc:  # a crashing check is a failed check
        residual, tol, status, msg = math.inf, 0.0, "fail", f"{type(exc).__name__}: {exc}"
    ms = (time.perf_counter() - t0) * 1e3
    return CheckRecord(name, status, float(residual), float(tol), ms, msg)


def run_validation(
    level: str = "fast", table_path: str | Path | None = None, workers: int | None = None
) -> ValidationReport:
    """Run every check of ``level``; records are sorted by name."""
    checks = build_checks(level, table_path)
    if workers and workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            records = list(pool.map(lambda item: _run_one(*item), checks.items()))
    else:
        records = [_run_one(name, fn) for name, fn in checks.items()]
    records.sort(key=lambda r: r.name)
    return ValidationReport(level, records)
