"""Action of the monodromy on the cohomology of the fiber.

A :class:`CohomologyAction` carries one integer matrix per degree. For a toral
fiber the matrices are the exterior powers of the monodromy matrix (stored as
``∧^i A`` rather than ``∧^i A^T``; every quantity derived from them is a trace,
determinant or characteristic polynomial and so does not see the transpose).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

from .exactlinalg import (
    IntMatrix,
    IntPolynomial,
    char_poly,
    det_exact,
    exterior_power,
    mat_pow,
    poly_roots,
)

__all__ = [
    "Check",
    "ValidationReport",
    "CohomologyAction",
    "CohomologyError",
    "from_toral",
    "from_explicit",
    "lefschetz_number",
    "lefschetz_numbers",
    "euler_characteristic",
    "anosov_check",
    "cyclotomic_polynomial",
    "eigen_degrees",
    "integer_roots",
    "spectral_radius",
]

CUP_PRODUCT_CAVEAT = (
    "duality checked only through necessary conditions (top-degree identity, Betti symmetry, "
    "determinant reciprocity); cup-product compatibility is assumed"
)
COUNTABILITY_CAVEAT = (
    "explicit action: finiteness of periodic points of the underlying diffeomorphism cannot be "
    "decided from cohomology data alone"
)


class CohomologyError(ValueError):
    """Inconsistent or unusable cohomology data."""


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    detail: str = ""

    def __post_init__(self):
        if not self.passed and not self.detail:
            raise ValueError(f"failed check {self.name!r} needs a detail message")


@dataclass(frozen=True)
class ValidationReport:
    checks: tuple[Check, ...] = ()
    anosov_certificate: str | None = None
    notes: tuple[str, ...] = ()

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failed(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    def get(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "checks": [{"name": c.name, "passed": c.passed, "detail": c.detail} for c in self.checks],
            "anosov_certificate": self.anosov_certificate,
            "notes": list(self.notes),
        }


@dataclass(frozen=True)
class CohomologyAction:
    d: int
    betti: tuple[int, ...]
    phi_star: tuple[IntMatrix, ...]
    source: str
    duality_enabled: bool
    report: ValidationReport = field(default_factory=ValidationReport)
    monodromy: IntMatrix | None = None

    @property
    def total_betti(self) -> int:
        return sum(self.betti)

    def char_polys(self) -> list[IntPolynomial]:
        return [char_poly(M) for M in self.phi_star]


def _duality_checks(d: int, betti: Sequence[int], mats: Sequence[IntMatrix]) -> list[Check]:
    checks = []
    top_ok = betti[d] == 1 and mats[d].rows == ((1,),)
    checks.append(
        Check(
            "top_degree_identity",
            top_ok,
            "" if top_ok else f"H^{d} must be 1-dimensional with trivial action, got beta={betti[d]}, "
            f"matrix={mats[d].tolist()}",
        )
    )
    sym_ok = all(betti[i] == betti[d - i] for i in range(d + 1))
    checks.append(
        Check("betti_symmetry", sym_ok, "" if sym_ok else f"Betti numbers not palindromic: {list(betti)}")
    )
    bad = []
    for i in range(d // 2 + 1):
        prod = det_exact(mats[i]) * det_exact(mats[d - i])
        if prod != 1:
            bad.append(f"det(phi*_{i})*det(phi*_{d - i}) = {prod}")
    checks.append(Check("determinant_reciprocity", not bad, "; ".join(bad)))
    return checks


def _finish(d, betti, mats, source, checks, require_duality, notes, monodromy=None) -> CohomologyAction:
    dual = _duality_checks(d, betti, mats)
    duality_ok = all(c.passed for c in dual)
    if require_duality and not duality_ok:
        msg = "; ".join(f"{c.name}: {c.detail}" for c in dual if not c.passed)
        raise CohomologyError(f"duality requested but fails: {msg}")
    notes = list(notes)
    if duality_ok:
        notes.append(CUP_PRODUCT_CAVEAT)
    report = ValidationReport(tuple(checks + dual), None, tuple(notes))
    return CohomologyAction(d, tuple(betti), tuple(mats), source, duality_ok, report, monodromy)


def from_toral(A: IntMatrix, require_duality: bool = False) -> CohomologyAction:
    """Cohomology action of the linear automorphism x -> Ax of the d-torus."""
    det = det_exact(A)
    if abs(det) != 1:
        raise CohomologyError(f"det A = {det}; a torus diffeomorphism needs det = +-1")
    if det == -1 and require_duality:
        raise CohomologyError("det A = -1 is orientation reversing; duality features unavailable")
    d = A.n
    mats = [exterior_power(A, i) for i in range(d + 1)]
    betti = [math.comb(d, i) for i in range(d + 1)]
    checks = [
        Check(
            "orientation_preserving",
            det == 1,
            "" if det == 1 else "det A = -1: zeta and orbit data available, duality disabled",
        )
    ]
    return _finish(d, betti, mats, "toral", checks, require_duality, [], monodromy=A)


def from_explicit(
    d: int,
    betti: Sequence[int],
    matrices: Sequence[IntMatrix | Sequence[Sequence[int]]],
    require_duality: bool = False,
) -> CohomologyAction:
    """Cohomology action given degree by degree."""
    if d < 0:
        raise CohomologyError("fiber dimension must be non-negative")
    betti = [int(b) for b in betti]
    if len(betti) != d + 1:
        raise CohomologyError(f"expected {d + 1} Betti numbers, got {len(betti)}")
    if any(b < 0 for b in betti):
        raise CohomologyError(f"negative Betti number in {betti}")
    if len(matrices) != d + 1:
        raise CohomologyError(f"expected {d + 1} matrices, got {len(matrices)}")
    mats = [M if isinstance(M, IntMatrix) else IntMatrix(M) for M in matrices]
    for i, (b, M) in enumerate(zip(betti, mats)):
        if M.n != b:
            raise CohomologyError(f"phi*_{i} is {M.n}x{M.n} but beta({i}) = {b}")
    if betti[0] != 1:
        raise CohomologyError(f"beta(0) = {betti[0]}; the fiber must be connected")
    if mats[0].rows != ((1,),):
        raise CohomologyError(f"phi*_0 must be [[1]], got {mats[0].tolist()}")
    nonunimodular = [i for i, M in enumerate(mats) if abs(det_exact(M)) != 1]
    checks = [
        Check(
            "unimodular",
            not nonunimodular,
            "" if not nonunimodular else f"|det phi*_i| != 1 in degrees {nonunimodular}; "
            "not the action of a diffeomorphism on integral cohomology",
        )
    ]
    return _finish(d, betti, mats, "explicit", checks, require_duality, [COUNTABILITY_CAVEAT])


def lefschetz_numbers(action: CohomologyAction, m_max: int) -> list[int]:
    """[Λ(φ^1), ..., Λ(φ^m_max)], reusing powers between consecutive m."""
    out = [0] * m_max
    for i, M in enumerate(action.phi_star):
        if M.n == 0:
            continue
        P = IntMatrix.identity(M.n)
        sign = -1 if i % 2 else 1
        for m in range(m_max):
            P = P @ M
            out[m] += sign * P.trace()
    return out


def lefschetz_number(action: CohomologyAction, m: int) -> int:
    if m < 0:
        raise ValueError("Lefschetz number needs m >= 0")
    return sum((-1) ** i * mat_pow(M, m).trace() for i, M in enumerate(action.phi_star))


def euler_characteristic(action: CohomologyAction) -> int:
    return sum((-1) ** i * b for i, b in enumerate(action.betti))


def _euler_phi(n: int) -> int:
    result, k, m = n, 2, n
    while k * k <= m:
        if m % k == 0:
            while m % k == 0:
                m //= k
            result -= result // k
        k += 1
    if m > 1:
        result -= result // m
    return result


_CYCLOTOMIC: dict[int, IntPolynomial] = {}


def cyclotomic_polynomial(n: int) -> IntPolynomial:
    if n < 1:
        raise ValueError("cyclotomic index must be positive")
    if n not in _CYCLOTOMIC:
        p = IntPolynomial([-1] + [0] * (n - 1) + [1])
        for k in range(1, n):
            if n % k == 0:
                p = p.divmod_exact(cyclotomic_polynomial(k))[0]
        _CYCLOTOMIC[n] = p
    return _CYCLOTOMIC[n]


def anosov_check(A: IntMatrix, precision: int = 12) -> ValidationReport:
    """Exact test for roots of unity among the eigenvalues, plus a numeric hyperbolicity test.

    No cyclotomic factor means det(A^m - I) != 0 for every m, so every fixed
    point count is finite. Hyperbolicity additionally excludes eigenvalues of
    modulus one that are not roots of unity (possible from degree 4 on).
    """
    det = det_exact(A)
    checks = [Check("unimodular", abs(det) == 1, "" if abs(det) == 1 else f"det A = {det}")]
    p = char_poly(A)
    n = A.n
    # phi(k) >= sqrt(k/2) bounds the indices worth testing
    hits = [k for k in range(1, 2 * n * n + 3) if _euler_phi(k) <= n and cyclotomic_polynomial(k).divides(p)]
    tested = [k for k in range(1, 2 * n * n + 3) if _euler_phi(k) <= n]
    checks.append(
        Check(
            "no_cyclotomic_factor",
            not hits,
            ""
            if not hits
            else "char poly divisible by "
            + ", ".join(f"Phi_{k} = {cyclotomic_polynomial(k)}" for k in hits)
            + " (eigenvalue is a root of unity)",
        )
    )
    roots = poly_roots(p, precision)
    gap = min(abs(abs(z) - 1) for z in roots)
    tol = 10.0 ** (-precision / 2)
    checks.append(
        Check(
            "hyperbolic",
            gap > tol,
            "" if gap > tol else f"eigenvalue of modulus 1 (min | |alpha| - 1 | = {gap:.3e})",
        )
    )
    cert = None
    if all(c.passed for c in checks):
        cert = (
            f"char poly {p} has no factor Phi_k for k in {tested}; "
            f"det(A^m - I) != 0 for all m >= 1; min | |alpha| - 1 | = {gap:.6g}"
        )
    return ValidationReport(tuple(checks), cert)


def integer_roots(p: IntPolynomial, precision: int = 12) -> dict[int, int]:
    """Integer roots of ``p`` with exact multiplicities."""
    out: dict[int, int] = {}
    if p.degree < 1:
        return out
    q = p
    for z in poly_roots(p, precision):
        n = round(z.real)
        if n in out or abs(z - n) > 1e-6 * (1 + abs(n)):
            continue
        mult, q2 = q.integer_root_multiplicity(n)
        if mult:
            out[n] = mult
            q = q2
    return out


def eigen_degrees(action: CohomologyAction, precision: int = 12) -> list[list[complex]]:
    """Eigenvalues of φ*_i for every degree, integer eigenvalues extracted exactly."""
    out = []
    for M in action.phi_star:
        p = char_poly(M)
        ints = integer_roots(p, precision)
        q = p
        roots: list[complex] = []
        for n, mult in ints.items():
            q = q.integer_root_multiplicity(n)[1]
            roots.extend([complex(n)] * mult)
        if q.degree >= 1:
            roots.extend(poly_roots(q, precision))
        roots.sort(key=lambda z: (round(z.real, 10), round(z.imag, 10)))
        out.append(roots)
    return out


def spectral_radius(action: CohomologyAction, precision: int = 12) -> float:
    """Largest |α| over all degrees; the growth rate of Λ(φ^m)."""
    return max((abs(z) for roots in eigen_degrees(action, precision) for z in roots), default=0.0)
