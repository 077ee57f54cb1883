"""The zeta function of the suspension flow as a rational function of u = r^(-s).

Factors P_i(u) = det(1 - φ*_i u) are kept per degree with exponent (-1)^(i+1);
nothing is cancelled between numerator and denominator.
"""
from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .cohomology import (
    CohomologyAction,
    eigen_degrees,
    euler_characteristic,
    lefschetz_numbers,
)
from .dynamics import ConvergenceError, _term
from .exactlinalg import IntPolynomial, char_poly, poly_roots

__all__ = [
    "PoleError",
    "DualityError",
    "OrderMismatch",
    "ZetaFactor",
    "ZetaRational",
    "ThetaEigenvalue",
    "SpecialValue",
    "SeriesValue",
    "build_zeta",
    "evaluate",
    "evaluate_exact",
    "log_derivative",
    "lefschetz_log_derivative",
    "order_at",
    "order_details",
    "special_value",
    "special_value_series",
    "functional_equation_residual",
    "functional_equation_exact",
    "theta_spectrum",
    "r_power",
]

POLE_TOL = 1e-12
RESONANCE_TOL = 1e-8


class PoleError(ZeroDivisionError):
    """A denominator factor vanishes at the requested point."""


class DualityError(ValueError):
    """Operation needs Poincaré-duality data the action does not satisfy."""


class OrderMismatch(ArithmeticError):
    """The two order computations disagree."""


@dataclass(frozen=True)
class ZetaFactor:
    degree: int
    poly: IntPolynomial
    exponent: int


@dataclass(frozen=True)
class ZetaRational:
    factors: tuple[ZetaFactor, ...]

    @property
    def numerator(self) -> IntPolynomial:
        out = IntPolynomial([1])
        for f in self.factors:
            if f.exponent > 0:
                out = out * f.poly
        return out

    @property
    def denominator(self) -> IntPolynomial:
        out = IntPolynomial([1])
        for f in self.factors:
            if f.exponent < 0:
                out = out * f.poly
        return out

    def formal_degrees(self) -> tuple[int, int]:
        """(sum of Betti numbers over odd degrees, over even degrees)."""
        num = sum(f.poly.degree for f in self.factors if f.exponent > 0)
        den = sum(f.poly.degree for f in self.factors if f.exponent < 0)
        return num, den


def build_zeta(action: CohomologyAction) -> ZetaRational:
    factors = []
    for i, M in enumerate(action.phi_star):
        # det(1 - M u) = u^n charpoly(1/u)
        P = char_poly(M).reversed(M.n)
        factors.append(ZetaFactor(i, P, 1 if i % 2 else -1))
    return ZetaRational(tuple(factors))


def r_power(r: float, k: complex) -> complex:
    """r^k = exp(k log r) with the real logarithm of r."""
    k = complex(k)
    if k.imag == 0:
        return complex(r ** k.real)
    return cmath.exp(k * math.log(r))


def _u(s: complex, r: float) -> complex:
    return r_power(r, -complex(s))


def evaluate(z: ZetaRational, s: complex, r: float) -> complex:
    u = _u(s, r)
    value = 1 + 0j
    for f in z.factors:
        p = f.poly(u)
        if not cmath.isfinite(p):
            raise OverflowError(f"factor P_{f.degree}(u) overflows at s = {s}")
        if f.exponent < 0:
            if abs(p) < POLE_TOL:
                raise PoleError(f"factor P_{f.degree} vanishes at s = {s} (|P| = {abs(p):.2e})")
            value /= p
        else:
            value *= p
    if not cmath.isfinite(value):
        raise OverflowError(f"zeta overflows at s = {s}")
    return value


def evaluate_exact(z: ZetaRational, u: Fraction | int) -> Fraction:
    """Exact value at a rational u."""
    u = Fraction(u)
    value = Fraction(1)
    for f in z.factors:
        p = f.poly(u)
        if f.exponent < 0:
            if p == 0:
                raise PoleError(f"factor P_{f.degree} vanishes at u = {u}")
            value /= p
        else:
            value *= p
    return value


def log_derivative(z: ZetaRational, s: complex, r: float) -> complex:
    """-(d/ds) log ζ from the rational form."""
    log_r = math.log(r)
    u = _u(s, r)
    total = 0j
    for f in z.factors:
        total += f.exponent * f.poly.derivative()(u) / f.poly(u)
    return total * log_r * u


def lefschetz_log_derivative(action: CohomologyAction, s: complex, r: float, m_max: int) -> complex:
    """log r * sum_{m<=m_max} Λ(φ^m) r^(-sm)."""
    u = _u(s, r)
    return math.log(r) * sum(_term(L, u, m) for m, L in enumerate(lefschetz_numbers(action, m_max), 1))


# --- orders and special values ---------------------------------------------


def _integer_target(t: complex) -> int | None:
    if t.imag != 0:
        return None
    n = round(t.real)
    if n != 0 and abs(t.real - n) <= 1e-12 * abs(n):
        return n
    return None


def _rational_u(r: float, k: complex) -> Fraction | None:
    """r^(-k) as an exact rational when k = 0 or (r, k) are integers."""
    k = complex(k)
    if k == 0:
        return Fraction(1)
    if k.imag == 0 and float(k.real).is_integer() and float(r).is_integer():
        return Fraction(int(r)) ** (-int(k.real))
    return None


@dataclass(frozen=True)
class DegreeResonance:
    degree: int
    multiplicity: int
    exact: bool
    margin: float  # distance from r^k to the nearest non-matching eigenvalue


def _degree_resonances(action: CohomologyAction, t: complex, precision: int) -> list[DegreeResonance]:
    n = _integer_target(t)
    out = []
    eigs = None
    for i, M in enumerate(action.phi_star):
        p = char_poly(M)
        if n is not None and p.degree >= 1 and p(n) == 0:
            mult, q = p.integer_root_multiplicity(n)
            rest = poly_roots(q, precision) if q.degree >= 1 else []
            margin = min((abs(a - t) for a in rest), default=math.inf)
            out.append(DegreeResonance(i, mult, True, margin))
            continue
        if eigs is None:
            eigs = eigen_degrees(action, precision)
        tol = RESONANCE_TOL * max(1.0, abs(t))
        hit = [a for a in eigs[i] if abs(a - t) <= tol]
        miss = [abs(a - t) for a in eigs[i] if abs(a - t) > tol]
        out.append(DegreeResonance(i, len(hit), False, min(miss, default=math.inf)))
    return out


def _poly_multiplicity_at(p: IntPolynomial, u0: complex, n: int | None, precision: int) -> int:
    """Vanishing order of p at u0; exact when u0 = 1/n for an integer n."""
    if p.degree < 1:
        return 0
    if n is not None:
        lin = IntPolynomial([1, -n])
        mult = 0
        while True:
            res = p.divmod_exact(lin)
            if res is None or not res[1].is_zero():
                return mult
            p, mult = res[0], mult + 1
    tol = RESONANCE_TOL * max(1.0, abs(u0))
    return sum(1 for w in poly_roots(p, precision) if abs(w - u0) <= tol)


def order_details(z: ZetaRational, action: CohomologyAction, k: complex, r: float, precision: int = 12):
    """(order by eigenvalue multiplicities, order by vanishing of numerator/denominator, resonances)."""
    t = r_power(r, k)
    res = _degree_resonances(action, t, precision)
    by_eigen = sum((-1) ** (d.degree + 1) * d.multiplicity for d in res)
    n = _integer_target(t)
    u0 = 1 / t
    by_poly = _poly_multiplicity_at(z.numerator, u0, n, precision) - _poly_multiplicity_at(
        z.denominator, u0, n, precision
    )
    return by_eigen, by_poly, res


def order_at(z: ZetaRational, action: CohomologyAction, k: complex, r: float, precision: int = 12) -> int:
    """Order of ζ at s = k (positive for zeros, negative for poles)."""
    a, b, _ = order_details(z, action, k, r, precision)
    if a != b:
        raise OrderMismatch(f"order at s={k}: eigenvalue count gives {a}, polynomial vanishing gives {b}")
    return a


@dataclass(frozen=True)
class SpecialValue:
    order: int
    value: complex
    rational_part: Fraction | None  # value = rational_part * (log r)^order when known exactly
    resonances: tuple[DegreeResonance, ...]


def special_value(
    z: ZetaRational, action: CohomologyAction, k: complex, r: float, precision: int = 12
) -> SpecialValue:
    """lim_{s->k} (s-k)^(-ord) ζ(s), factor by factor.

    Each resonant factor (1 - r^(k-s))^m is replaced by (log r)^m; the rest of
    the factor is evaluated at u = r^(-k), exactly when that is possible.
    """
    order = order_at(z, action, k, r, precision)
    t = r_power(r, k)
    res = _degree_resonances(action, t, precision)
    u0 = 1 / t
    u_exact = _rational_u(r, k)
    log_r = math.log(r)
    n = _integer_target(t)
    eigs = None
    value = 1 + 0j
    rational: Fraction | None = Fraction(1) if u_exact is not None else None
    for f, d in zip(z.factors, res):
        if d.exact:
            q = f.poly
            lin = IntPolynomial([1, -n])
            for _ in range(d.multiplicity):
                q = q.divmod_exact(lin)[0]
            part = q(u0)
            if rational is not None:
                rational *= q(u_exact) ** f.exponent
        elif d.multiplicity == 0:
            part = f.poly(u0)
            if rational is not None:
                rational *= f.poly(u_exact) ** f.exponent
        else:
            if eigs is None:
                eigs = eigen_degrees(action, precision)
            tol = RESONANCE_TOL * max(1.0, abs(t))
            part = math.prod((1 - a * u0 for a in eigs[f.degree] if abs(a - t) > tol), start=1 + 0j)
            rational = None
        value *= (part * log_r**d.multiplicity) ** f.exponent
    return SpecialValue(order, value, rational, tuple(res))


@dataclass(frozen=True)
class SeriesValue:
    order: int
    value: complex
    tail_bound: float
    m_max: int
    ratio: float


def special_value_series(
    action: CohomologyAction, k: complex, r: float, m_max: int, precision: int = 12
) -> SeriesValue:
    """(log r)^ord exp(sum_{m<=m_max} (r^(-km) Λ(φ^m) + ord)/m), with a tail bound.

    Refuses (ConvergenceError) unless every eigenvalue other than r^k has
    modulus below r^Re(k).
    """
    t = r_power(r, k)
    bound = r ** complex(k).real
    tol = RESONANCE_TOL * max(1.0, abs(t))
    eigs = eigen_degrees(action, precision)
    nonres = [(i, a) for i, roots in enumerate(eigs) for a in roots if abs(a - t) > tol]
    for i, a in nonres:
        if not abs(a) < bound:
            raise ConvergenceError(
                f"series diverges: eigenvalue alpha = {a:.10g} of phi*_{i} has |alpha| = {abs(a):.10g} "
                f">= r^Re(k) = {bound:.10g}"
            )
    order = sum((-1) ** (i + 1) * sum(1 for a in roots if abs(a - t) <= tol) for i, roots in enumerate(eigs))
    u = 1 / t
    total = 0j
    for m, L in enumerate(lefschetz_numbers(action, m_max), 1):
        total += (_term(L, u, m) + order) / m
    q = max((abs(a) for _, a in nonres), default=0.0) / bound
    tail = len(nonres) * q ** (m_max + 1) / ((m_max + 1) * (1 - q)) if nonres else 0.0
    value = math.log(r) ** order * cmath.exp(total)
    return SeriesValue(order, value, tail, m_max, q)


# --- functional equation ----------------------------------------------------


def _require_duality(action: CohomologyAction) -> None:
    if not action.duality_enabled:
        failed = "; ".join(f"{c.name}: {c.detail}" for c in action.report.failed())
        raise DualityError(f"action is not duality-enabled ({failed or 'duality checks failed'})")


def functional_equation_residual(z: ZetaRational, action: CohomologyAction, s: complex, r: float) -> complex:
    """ζ(s) - (-r^s)^χ ζ(-s), with (-r^s)^χ = (-1)^χ r^(sχ)."""
    _require_duality(action)
    chi = euler_characteristic(action)
    factor = (-1) ** chi * r_power(r, complex(s) * chi)
    return evaluate(z, s, r) - factor * evaluate(z, -complex(s), r)


def functional_equation_exact(z: ZetaRational, action: CohomologyAction) -> IntPolynomial:
    """Numerator of ζ(u) - (-1)^χ u^(-χ) ζ(1/u), cleared of denominators; zero iff the identity holds."""
    _require_duality(action)
    chi = euler_characteristic(action)
    N, D = z.numerator, z.denominator
    nN, nD = z.formal_degrees()
    N_rev, D_rev = N.reversed(nN), D.reversed(nD)
    e = chi + nN - nD
    sign = IntPolynomial([(-1) ** chi])
    lhs, rhs = N * D_rev, sign * N_rev * D
    shift = IntPolynomial([0] * abs(e) + [1])
    if e >= 0:
        return lhs * shift - rhs
    return lhs - rhs * shift


# --- spectrum of the generator ---------------------------------------------


@dataclass(frozen=True)
class ThetaEigenvalue:
    degree: int
    alpha: complex
    v: int
    theta: complex

    def exp_residual(self, r: float) -> float:
        return abs(cmath.exp(self.theta * math.log(r)) - self.alpha)


def theta_spectrum(
    action: CohomologyAction, i: int, r: float, v_window: Iterable[int], precision: int = 12
) -> list[ThetaEigenvalue]:
    """θ = (log|α| + i Arg α + 2πiv)/log r for α in Sp(φ*_i), v in the window."""
    if not r > 1:
        raise ValueError("r must exceed 1")
    if not 0 <= i <= action.d:
        raise ValueError(f"degree {i} outside 0..{action.d}")
    log_r = math.log(r)
    window = list(v_window)
    out = []
    for alpha in eigen_degrees(action, precision)[i]:
        if alpha == 0:
            warnings.warn(f"eigenvalue 0 of phi*_{i} skipped: log undefined", RuntimeWarning, stacklevel=2)
            continue
        base = complex(math.log(abs(alpha)), cmath.phase(alpha))
        for v in window:
            out.append(ThetaEigenvalue(i, alpha, v, (base + 2j * math.pi * v) / log_r))
    return out
