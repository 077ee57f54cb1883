"""Periodic points and orbits of a toral automorphism and its suspension flow."""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .exactlinalg import IntMatrix, char_poly, det_exact, poly_roots

__all__ = [
    "ConvergenceError",
    "FlowParams",
    "OrbitRow",
    "OrbitTable",
    "mobius",
    "fixed_point_count",
    "orbit_table",
    "euler_product_partial",
    "euler_tail_bound",
    "growth_rate",
]

CONVERGENCE_MARGIN = 1e-9


class ConvergenceError(ValueError):
    """Requested point lies outside the domain where the series/product converges."""


@dataclass(frozen=True)
class FlowParams:
    r: float
    convention: str = "signed"

    def __post_init__(self):
        if not self.r > 1:
            raise ValueError(f"suspension scale r must exceed 1, got {self.r}")
        if self.convention not in ("signed", "unsigned"):
            raise ValueError(f"convention must be 'signed' or 'unsigned', got {self.convention!r}")

    @property
    def log_r(self) -> float:
        return math.log(self.r)


@dataclass(frozen=True)
class OrbitRow:
    m: int
    fix_signed: int
    fix_unsigned: int
    exact_period_points: int
    orbit_count: int
    log_norm: float


@dataclass(frozen=True)
class OrbitTable:
    rows: tuple[OrbitRow, ...]
    r: float
    growth_rate: float
    dim: int

    @property
    def m_max(self) -> int:
        return len(self.rows)

    def column(self, name: str) -> list:
        return [getattr(row, name) for row in self.rows]


def mobius(n: int) -> int:
    if n < 1:
        raise ValueError("Mobius function needs n >= 1")
    result, k = 1, 2
    while k * k <= n:
        if n % k == 0:
            n //= k
            if n % k == 0:
                return 0
            result = -result
        k += 1
    return -result if n > 1 else result


def _fix_from_power(P: IntMatrix, m: int) -> tuple[int, int]:
    signed = det_exact(IntMatrix.identity(P.n) - P)
    if signed == 0:
        raise ArithmeticError(f"det(A^{m} - I) = 0: infinitely many fixed points (non-hyperbolic monodromy)")
    return signed, abs(signed)


def fixed_point_count(A: IntMatrix, m: int) -> tuple[int, int]:
    """(det(I - A^m), #Fix(A^m)) for the induced torus map."""
    if m < 1:
        raise ValueError("period must be >= 1")
    P = IntMatrix.identity(A.n)
    for _ in range(m):
        P = P @ A
    return _fix_from_power(P, m)


def growth_rate(A: IntMatrix, precision: int = 12) -> float:
    """Exponential growth rate of #Fix(A^m): the product of eigenvalue moduli above one."""
    return math.prod(max(1.0, abs(z)) for z in poly_roots(char_poly(A), precision))


def orbit_table(A: IntMatrix, m_max: int, params: FlowParams) -> OrbitTable:
    if m_max < 0:
        raise ValueError("m_max must be non-negative")
    fix = []
    P = IntMatrix.identity(A.n)
    for m in range(1, m_max + 1):
        P = P @ A
        fix.append(_fix_from_power(P, m))
    rows = []
    for m in range(1, m_max + 1):
        exact = sum(mobius(m // k) * fix[k - 1][1] for k in range(1, m + 1) if m % k == 0)
        count, rem = divmod(exact, m)
        if rem:
            raise ArithmeticError(f"{exact} points of exact period {m} do not split into orbits")
        signed, unsigned = fix[m - 1]
        rows.append(OrbitRow(m, signed, unsigned, exact, count, m * params.log_r))
    return OrbitTable(tuple(rows), params.r, growth_rate(A) if A.n else 1.0, A.n)


def _term(n: int, u: complex, m: int) -> complex:
    """n * u**m without overflowing on huge n or underflowing early on small u."""
    if n == 0:
        return 0j
    if abs(n) < 1e300:
        return n * u**m
    logmag = math.log(abs(n)) + m * math.log(abs(u))
    if logmag < -745:
        return 0j
    return math.copysign(1, n) * cmath.exp(logmag + 1j * m * cmath.phase(u))


def _neg_log1m_over_x(x: complex) -> complex:
    """-log(1 - x) / x, accurate for small x."""
    if abs(x) < 0.5:
        acc, term, j = 0j, 1 + 0j, 1
        while True:
            add = term / j
            acc += add
            if abs(add) < 1e-18 * abs(acc):
                return acc
            term *= x
            j += 1
    return -cmath.log(1 - x) / x


def _domain_check(table: OrbitTable, s: complex) -> None:
    bound = table.growth_rate * (1 + CONVERGENCE_MARGIN)
    rs = table.r ** complex(s).real
    if not rs > bound:
        raise ConvergenceError(
            f"r^Re(s) = {rs:.6g} does not exceed the fixed-point growth rate {table.growth_rate:.6g} "
            "(times 1+1e-9); the Euler product diverges here"
        )


def euler_product_partial(table: OrbitTable, s: complex, params: FlowParams | None = None) -> complex:
    """Truncated Euler product over orbits of period <= table.m_max.

    ``signed`` weights period-m points by det(I - A^m), i.e. returns
    exp(sum_m det(I - A^m) u^m / m); ``unsigned`` is the literal product
    prod_m (1 - u^m)^(-orbit_count(m)). Here u = r^(-s).
    """
    convention = params.convention if params is not None else "signed"
    if params is not None and params.r != table.r:
        raise ValueError("flow parameters and orbit table disagree on r")
    if not table.rows:
        return 1 + 0j
    _domain_check(table, s)
    u = cmath.exp(-complex(s) * math.log(table.r))
    total = 0j
    if convention == "signed":
        for row in table.rows:
            total += _term(row.fix_signed, u, row.m) / row.m
    else:
        for row in table.rows:
            if row.orbit_count:
                total += _term(row.orbit_count, u, row.m) * _neg_log1m_over_x(u**row.m)
    return cmath.exp(total)


def euler_tail_bound(table: OrbitTable, s: complex, total_betti: int | None = None) -> float:
    """Bound on |log-series tail| beyond table.m_max, geometric in growth_rate * |u|."""
    q = table.growth_rate * table.r ** (-complex(s).real)
    if q >= 1:
        return math.inf
    # |det(I - A^m)| <= sum over degrees of |tr ∧^i A^m| <= 2^d * growth^m
    c = total_betti if total_betti is not None else 2**table.dim
    M = table.m_max
    return c * q ** (M + 1) / ((M + 1) * (1 - q))
