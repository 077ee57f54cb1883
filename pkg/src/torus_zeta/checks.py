"""Cross-checks between independently computed sides of each identity."""
from __future__ import annotations

import cmath
import math
import random
from dataclasses import dataclass, field

from .cohomology import CohomologyAction, anosov_check, eigen_degrees, lefschetz_numbers, spectral_radius
from .dynamics import FlowParams, euler_product_partial, euler_tail_bound, orbit_table
from .exactlinalg import IntMatrix, det_exact, mat_pow
from .specialfn import hurwitz_dz_at_zero, regdet_factor, regularized_product
from .zeta import (
    PoleError,
    ZetaRational,
    evaluate,
    functional_equation_exact,
    functional_equation_residual,
    order_details,
    special_value,
    special_value_series,
    theta_spectrum,
)

PRODUCT_GRID_S = (0.1, 0.25, 0.5, 0.7, 0.9)
PRODUCT_GRID_ETA = (1j, 2j * math.pi / math.log(2), -1j, 1 + 1j)
DZ_GRID_S = (0.3, 0.5, 1.0, 2 + 1j, 3.5 - 0.5j)
DZ_GRID_ETA = (1, math.e, 1j, -1j, 1 + 1j)


@dataclass
class CheckResult:
    name: str
    passed: bool
    residual: float | None = None
    tolerance: float | None = None
    detail: str = ""
    data: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        out = {"name": self.name, "passed": self.passed, "residual": self.residual, "tolerance": self.tolerance}
        if self.detail:
            out["detail"] = self.detail
        return out


def sample_points(action: CohomologyAction, r: float, precision: int = 12) -> list[complex]:
    """Three s values where the log-series ratio rho * r^-Re(s) is 0.3."""
    rho = max(spectral_radius(action, precision), 1.0)
    s0 = (math.log(rho) - math.log(0.3)) / math.log(r)
    return [complex(s0), complex(s0, 1.0), complex(s0 + 0.5, -0.7)]


def check_lefschetz_vs_det(A: IntMatrix, action: CohomologyAction, m_max: int = 20) -> CheckResult:
    lef = lefschetz_numbers(action, m_max)
    bad = []
    n = A.n
    for m in range(1, m_max + 1):
        det = det_exact(IntMatrix.identity(n) - mat_pow(A, m))
        if det != lef[m - 1]:
            bad.append(f"m={m}: Lambda={lef[m - 1]} det={det}")
    return CheckResult("lefschetz_equals_det", not bad, 0.0 if not bad else None, 0.0, "; ".join(bad))


def check_euler_product(
    A: IntMatrix, z: ZetaRational, r: float, points: list[complex], m_max: int = 40, tol: float = 1e-8
) -> list[CheckResult]:
    out = []
    signed_t = orbit_table(A, m_max, FlowParams(r, "signed"))
    for s in points:
        direct = evaluate(z, s, r)
        prod = euler_product_partial(signed_t, s, FlowParams(r, "signed"))
        tail = euler_tail_bound(signed_t, s)
        # |exp(x + t) - exp(x)| <= |exp(x)| (e^|t| - 1)
        allowed = tol + abs(direct) * math.expm1(tail)
        res = abs(prod - direct)
        out.append(CheckResult(f"euler_product_signed[s={s}]", res < allowed, res, allowed, data={"s": s}))
    return out


def unsigned_relation(A: IntMatrix, z: ZetaRational, r: float, s: complex, m_max: int = 40) -> dict:
    """How the literal (unsigned) Euler product relates to the rational value."""
    t = orbit_table(A, m_max, FlowParams(r, "unsigned"))
    signs = {row.fix_signed > 0 for row in t.rows}
    prod = euler_product_partial(t, s, FlowParams(r, "unsigned"))
    direct = evaluate(z, s, r)
    if signs == {True}:
        relation, res = "equal", abs(prod - direct)
    elif signs == {False}:
        relation, res = "reciprocal", abs(prod - 1 / direct)
    else:
        relation, res = "neither (fixed-point indices change sign with m)", None
    return {"unsigned_product": prod, "relation": relation, "residual": res}


def check_product_grid(tol: float = 1e-9) -> list[CheckResult]:
    out = []
    for eta in PRODUCT_GRID_ETA:
        for s in PRODUCT_GRID_S:
            p = regularized_product(eta, s, tol=math.inf)
            out.append(
                CheckResult(f"regularized_product[eta={eta:.6g},s={s}]", p.discrepancy < tol, p.discrepancy, tol)
            )
    return out


def check_dz_grid(tol: float = 1e-6) -> list[CheckResult]:
    out = []
    for eta in DZ_GRID_ETA:
        for s in DZ_GRID_S:
            v = hurwitz_dz_at_zero(s, eta)
            out.append(CheckResult(f"hurwitz_dz_at_zero[s={s},eta={eta:.6g}]", v.discrepancy < tol, v.discrepancy, tol))
    return out


def regdet_product(action: CohomologyAction, s: complex, r: float, precision: int = 12) -> complex:
    """prod over degrees and eigenvalues of the regularized factors, with exponents (-1)^(i+1)."""
    value = 1 + 0j
    for i, roots in enumerate(eigen_degrees(action, precision)):
        for alpha in roots:
            f = regdet_factor(alpha, s, r, tol=math.inf)
            value *= f if i % 2 else 1 / f
    return value


def check_regdet_end_to_end(
    action: CohomologyAction, z: ZetaRational, r: float, points: list[complex], tol: float = 1e-8
) -> list[CheckResult]:
    out = []
    for s in points:
        res = abs(regdet_product(action, s, r) - evaluate(z, s, r))
        out.append(CheckResult(f"regularized_determinant[s={s}]", res < tol, res, tol))
    return out


def check_functional_equation(
    action: CohomologyAction, z: ZetaRational, r: float, n_points: int = 10, tol: float = 1e-10, seed: int = 7
) -> list[CheckResult]:
    if not action.duality_enabled:
        return [CheckResult("functional_equation", True, None, None, "skipped: action is not duality-enabled")]
    poly = functional_equation_exact(z, action)
    out = [CheckResult("functional_equation_exact", poly.is_zero(), 0.0 if poly.is_zero() else None, 0.0,
                       "" if poly.is_zero() else f"residual numerator {poly}")]
    rng = random.Random(seed)
    done = 0
    while done < n_points:
        s = complex(rng.uniform(-1, 1), rng.uniform(-2, 2))
        try:
            res = abs(functional_equation_residual(z, action, s, r))
        except PoleError:
            continue
        out.append(CheckResult(f"functional_equation[s={s:.6g}]", res < tol, res, tol))
        done += 1
    return out


def check_special_values(
    action: CohomologyAction, z: ZetaRational, r: float, m_max: int = 60, tol: float = 1e-8, precision: int = 12
) -> list[CheckResult]:
    rho = max(spectral_radius(action, precision), 1.0)
    k = math.ceil(math.log(2 * rho) / math.log(r))
    direct = special_value(z, action, k, r, precision)
    series = special_value_series(action, k, r, m_max, precision)
    allowed = tol + abs(direct.value) * math.expm1(series.tail_bound)
    res = abs(series.value - direct.value)
    return [
        CheckResult(f"special_value_series[k={k}]", res < allowed and series.order == direct.order, res, allowed,
                    data={"k": k, "order": direct.order, "direct": direct.value, "series": series.value})
    ]


def check_orders(action: CohomologyAction, z: ZetaRational, r: float, precision: int = 12) -> list[CheckResult]:
    """Order computed from eigenvalue multiplicities vs from polynomial vanishing, at resonant points."""
    ks = {0j}
    for roots in eigen_degrees(action, precision):
        for a in roots:
            if a != 0:
                ks.add(cmath.log(a) / math.log(r))
    out = []
    for k in sorted(ks, key=lambda w: (w.real, w.imag)):
        a, b, _ = order_details(z, action, k, r, precision)
        out.append(CheckResult(f"order_methods_agree[k={k:.6g}]", a == b, float(abs(a - b)), 0.0,
                               "" if a == b else f"eigenvalue count {a} vs polynomial vanishing {b}"))
    return out


def check_spectrum(action: CohomologyAction, r: float, tol: float = 1e-10, precision: int = 12) -> list[CheckResult]:
    out = []
    log_r = math.log(r)
    for i in range(action.d + 1):
        entries = theta_spectrum(action, i, r, range(-2, 3), precision)
        worst = max((e.exp_residual(r) for e in entries), default=0.0)
        spacing = 0.0
        for a, b in zip(entries, entries[1:]):
            if a.alpha == b.alpha and b.v == a.v + 1:
                spacing = max(spacing, abs((b.theta - a.theta) - 2j * math.pi / log_r))
        ok = worst < tol and spacing < 1e-12 * max(1.0, 2 * math.pi / log_r)
        out.append(CheckResult(f"theta_spectrum[degree={i}]", ok, max(worst, spacing), tol))
    return out


def run_identity_suite(action: CohomologyAction, z: ZetaRational, r: float, precision: int = 12,
                       m_max: int = 40) -> list[CheckResult]:
    results: list[CheckResult] = []
    points = sample_points(action, r, precision)
    A = action.monodromy
    if A is not None:
        results.append(check_lefschetz_vs_det(A, action))
        if anosov_check(A, precision).passed:
            results.extend(check_euler_product(A, z, r, points, m_max))
        else:
            results.append(CheckResult("euler_product", True, None, None, "skipped: monodromy not hyperbolic"))
    results.extend(check_product_grid())
    results.extend(check_dz_grid())
    results.extend(check_regdet_end_to_end(action, z, r, points))
    results.extend(check_functional_equation(action, z, r))
    results.extend(check_special_values(action, z, r, precision=precision))
    results.extend(check_orders(action, z, r, precision))
    results.extend(check_spectrum(action, r, precision=precision))
    return results
