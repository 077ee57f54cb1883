"""JSON-safe encoding of exact results.

Integers and polynomial coefficients are written as decimal strings so that
values beyond 64 bits survive any JSON reader; the ``*_from_json`` functions
invert the encoders exactly.
"""
from __future__ import annotations

import math
from typing import Any

from .dynamics import OrbitRow, OrbitTable
from .exactlinalg import IntPolynomial
from .zeta import ZetaFactor, ZetaRational


def complex_to_json(z: complex) -> dict[str, float]:
    z = complex(z)
    return {"re": _finite(z.real), "im": _finite(z.imag)}


def complex_from_json(obj: dict) -> complex:
    return complex(float(obj["re"]), float(obj["im"]))


def _finite(x: float):
    return x if math.isfinite(x) else str(x)


def poly_to_json(p: IntPolynomial) -> list[str]:
    return [str(c) for c in p.coeffs]


def poly_from_json(obj: list) -> IntPolynomial:
    return IntPolynomial(int(c) for c in obj)


ORBIT_INT_FIELDS = ("fix_signed", "fix_unsigned", "exact_period_points", "orbit_count")


def orbit_table_to_json(table: OrbitTable) -> dict[str, Any]:
    return {
        "r": table.r,
        "growth_rate": table.growth_rate,
        "dim": table.dim,
        "rows": [
            {"m": row.m, **{f: str(getattr(row, f)) for f in ORBIT_INT_FIELDS}, "log_norm": row.log_norm}
            for row in table.rows
        ],
    }


def orbit_table_from_json(obj: dict) -> OrbitTable:
    rows = tuple(
        OrbitRow(int(r["m"]), *(int(r[f]) for f in ORBIT_INT_FIELDS), float(r["log_norm"])) for r in obj["rows"]
    )
    return OrbitTable(rows, float(obj["r"]), float(obj["growth_rate"]), int(obj["dim"]))


def zeta_to_json(z: ZetaRational) -> dict[str, Any]:
    return {
        "variable": "u = r^(-s)",
        "factors": [
            {"degree": f.degree, "exponent": f.exponent, "coefficients": poly_to_json(f.poly), "display": _u(f.poly)}
            for f in z.factors
        ],
        "numerator": poly_to_json(z.numerator),
        "denominator": poly_to_json(z.denominator),
    }


def zeta_from_json(obj: dict) -> ZetaRational:
    return ZetaRational(
        tuple(ZetaFactor(int(f["degree"]), poly_from_json(f["coefficients"]), int(f["exponent"])) for f in obj["factors"])
    )


def _u(p: IntPolynomial) -> str:
    from .exactlinalg import format_poly

    return format_poly(p.coeffs, "u")
