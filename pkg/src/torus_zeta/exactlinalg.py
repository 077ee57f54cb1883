"""Exact integer matrix and polynomial algebra.

Everything here works over Python's arbitrary precision ``int``; floating point
only appears in :func:`poly_roots`, which runs on top of ``mpmath``.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import mpmath

__all__ = [
    "IntMatrix",
    "IntPolynomial",
    "RootFindingError",
    "mat_pow",
    "det_exact",
    "char_poly",
    "exterior_power",
    "poly_roots",
    "squarefree_decomposition",
]


class RootFindingError(ArithmeticError):
    """Simultaneous iteration did not converge within its budget."""


@dataclass(frozen=True)
class IntMatrix:
    rows: tuple[tuple[int, ...], ...]

    def __init__(self, rows: Iterable[Iterable[int]]):
        data = tuple(tuple(_as_int(x) for x in row) for row in rows)
        n = len(data)
        if any(len(row) != n for row in data):
            raise ValueError(f"matrix is not square: {[len(r) for r in data]} x {n}")
        object.__setattr__(self, "rows", data)

    @classmethod
    def identity(cls, n: int) -> IntMatrix:
        return cls([[int(i == j) for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, n: int) -> IntMatrix:
        return cls([[0] * n for _ in range(n)])

    @classmethod
    def block_diag(cls, *blocks: IntMatrix) -> IntMatrix:
        n = sum(b.n for b in blocks)
        out = [[0] * n for _ in range(n)]
        off = 0
        for b in blocks:
            for i in range(b.n):
                for j in range(b.n):
                    out[off + i][off + j] = b.rows[i][j]
            off += b.n
        return cls(out)

    @property
    def n(self) -> int:
        return len(self.rows)

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.rows[i][j]

    def __matmul__(self, other: IntMatrix) -> IntMatrix:
        if self.n != other.n:
            raise ValueError("dimension mismatch")
        cols = list(zip(*other.rows))
        return IntMatrix([[sum(a * b for a, b in zip(row, col)) for col in cols] for row in self.rows])

    def __add__(self, other: IntMatrix) -> IntMatrix:
        return IntMatrix([[a + b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __sub__(self, other: IntMatrix) -> IntMatrix:
        return IntMatrix([[a - b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def scale(self, c: int) -> IntMatrix:
        return IntMatrix([[c * a for a in r] for r in self.rows])

    def transpose(self) -> IntMatrix:
        return IntMatrix(zip(*self.rows))

    def trace(self) -> int:
        return sum(self.rows[i][i] for i in range(self.n))

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self.rows]

    def __repr__(self) -> str:
        return f"IntMatrix({self.tolist()})"


def _as_int(x) -> int:
    if isinstance(x, bool):
        raise TypeError("booleans are not matrix entries")
    if isinstance(x, int):
        return x
    if isinstance(x, Fraction) and x.denominator == 1:
        return int(x)
    if isinstance(x, float) and x.is_integer():
        return int(x)
    if isinstance(x, str):
        return int(x.strip())
    # numpy integer scalars and friends
    if hasattr(x, "__index__"):
        return x.__index__()
    raise TypeError(f"non-integer matrix entry: {x!r}")


@dataclass(frozen=True)
class IntPolynomial:
    """Integer polynomial, coefficients in ascending degree order."""

    coeffs: tuple[int, ...]

    def __init__(self, coeffs: Iterable[int]):
        c = [_as_int(x) for x in coeffs]
        while c and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "coeffs", tuple(c))

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __call__(self, x):
        acc = 0 * x
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __mul__(self, other: IntPolynomial) -> IntPolynomial:
        if self.is_zero() or other.is_zero():
            return IntPolynomial([])
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return IntPolynomial(out)

    def __pow__(self, k: int) -> IntPolynomial:
        out = IntPolynomial([1])
        for _ in range(k):
            out = out * self
        return out

    def __add__(self, other: IntPolynomial) -> IntPolynomial:
        a, b = self.coeffs, other.coeffs
        n = max(len(a), len(b))
        return IntPolynomial([(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)])

    def __neg__(self) -> IntPolynomial:
        return IntPolynomial([-c for c in self.coeffs])

    def __sub__(self, other: IntPolynomial) -> IntPolynomial:
        return self + (-other)

    def reversed(self, degree: int | None = None) -> IntPolynomial:
        """x^degree * p(1/x); ``degree`` defaults to the actual degree."""
        d = self.degree if degree is None else degree
        if d < self.degree:
            raise ValueError("reversal degree below polynomial degree")
        padded = list(self.coeffs) + [0] * (d + 1 - len(self.coeffs))
        return IntPolynomial(padded[::-1])

    def derivative(self) -> IntPolynomial:
        return IntPolynomial([i * c for i, c in enumerate(self.coeffs)][1:])

    def divmod_exact(self, divisor: IntPolynomial) -> tuple[IntPolynomial, IntPolynomial] | None:
        """Division over the integers; None when a non-integer quotient coefficient appears."""
        if divisor.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dd, lead = divisor.degree, divisor.coeffs[-1]
        if len(rem) - 1 < dd:
            return IntPolynomial([]), self
        quot = [0] * (len(rem) - dd)
        for k in range(len(rem) - 1 - dd, -1, -1):
            q, r = divmod(rem[k + dd], lead)
            if r:
                return None
            quot[k] = q
            if q:
                for j, c in enumerate(divisor.coeffs):
                    rem[k + j] -= q * c
        return IntPolynomial(quot), IntPolynomial(rem[:dd])

    def divides(self, other: IntPolynomial) -> bool:
        """True when self divides other in Z[x]."""
        res = other.divmod_exact(self)
        return res is not None and res[1].is_zero()

    def content(self) -> int:
        g = 0
        for c in self.coeffs:
            g = math.gcd(g, c)
        return g

    def primitive(self) -> IntPolynomial:
        if self.is_zero():
            return self
        g = self.content()
        if self.coeffs[-1] < 0:
            g = -g
        return IntPolynomial([c // g for c in self.coeffs])

    def integer_root_multiplicity(self, a: int) -> tuple[int, IntPolynomial]:
        """Multiplicity of the integer ``a`` as a root and the deflated cofactor."""
        lin = IntPolynomial([-a, 1])
        mult, p = 0, self
        while not p.is_zero() and p(a) == 0:
            p = p.divmod_exact(lin)[0]
            mult += 1
        return mult, p

    def __str__(self) -> str:
        return format_poly(self.coeffs)


def format_poly(coeffs: Sequence[int], var: str = "x") -> str:
    terms = []
    for k in range(len(coeffs) - 1, -1, -1):
        c = coeffs[k]
        if c == 0:
            continue
        mono = "" if k == 0 else (var if k == 1 else f"{var}^{k}")
        mag = abs(c)
        body = str(mag) if (mag != 1 or not mono) else ""
        if body and mono:
            body += "*"
        body += mono
        if not terms:
            terms.append(("-" if c < 0 else "") + body)
        else:
            terms.append(("- " if c < 0 else "+ ") + body)
    return " ".join(terms) if terms else "0"


def mat_pow(A: IntMatrix, m: int) -> IntMatrix:
    if m < 0:
        raise ValueError("negative matrix power")
    result = IntMatrix.identity(A.n)
    base = A
    while m:
        if m & 1:
            result = result @ base
        m >>= 1
        if m:
            base = base @ base
    return result


def det_exact(A: IntMatrix) -> int:
    """Bareiss fraction-free elimination with row pivoting."""
    M = [list(r) for r in A.rows]
    n = len(M)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if M[k][k] == 0:
            for i in range(k + 1, n):
                if M[i][k]:
                    M[k], M[i] = M[i], M[k]
                    sign = -sign
                    break
            else:
                return 0
        pivot = M[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                # exact by Sylvester's identity
                M[i][j] = (M[i][j] * pivot - M[i][k] * M[k][j]) // prev
        prev = pivot
    return sign * M[n - 1][n - 1]


def char_poly(A: IntMatrix) -> IntPolynomial:
    """det(xI - A) by Faddeev-LeVerrier; every division is checked to be exact."""
    n = A.n
    coeffs = [0] * (n + 1)
    coeffs[n] = 1
    I = IntMatrix.identity(n)
    Mk = IntMatrix.zeros(n)
    c = 1
    for k in range(1, n + 1):
        Mk = A @ Mk + I.scale(c)
        q, r = divmod(-(A @ Mk).trace(), k)
        if r:
            raise ArithmeticError("Faddeev-LeVerrier produced a non-integer coefficient")
        c = q
        coeffs[n - k] = c
    return IntPolynomial(coeffs)


def exterior_power(A: IntMatrix, k: int) -> IntMatrix:
    """k-th compound matrix; rows and columns indexed by k-subsets in lexicographic order."""
    n = A.n
    if not 0 <= k <= n:
        raise ValueError(f"exterior power degree {k} outside 0..{n}")
    if k == 0:
        return IntMatrix([[1]])
    subsets = list(itertools.combinations(range(n), k))
    rows = A.rows
    return IntMatrix(
        [
            [det_exact(IntMatrix([[rows[i][j] for j in J] for i in I])) for J in subsets]
            for I in subsets
        ]
    )


# --- polynomial roots -------------------------------------------------------


def _qtrim(a: list[Fraction]) -> list[Fraction]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _qdivmod(a: list[Fraction], b: list[Fraction]) -> tuple[list[Fraction], list[Fraction]]:
    rem = list(a)
    if len(rem) < len(b):
        return [], _qtrim(rem)
    quot = [Fraction(0)] * (len(rem) - len(b) + 1)
    for k in range(len(quot) - 1, -1, -1):
        q = rem[k + len(b) - 1] / b[-1]
        quot[k] = q
        for j, c in enumerate(b):
            rem[k + j] -= q * c
    return _qtrim(quot), _qtrim(rem[: len(b) - 1])


def _qgcd(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    while b:
        a, b = b, _qdivmod(a, b)[1]
    return [c / a[-1] for c in a]


def _qderiv(a: list[Fraction]) -> list[Fraction]:
    return _qtrim([i * c for i, c in enumerate(a)][1:])


def _qsub(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    n = max(len(a), len(b))
    return _qtrim([(a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0) for i in range(n)])


def _to_primitive(a: list[Fraction]) -> IntPolynomial:
    lcm = 1
    for q in a:
        lcm = lcm * q.denominator // math.gcd(lcm, q.denominator)
    return IntPolynomial([int(q * lcm) for q in a]).primitive()


def squarefree_decomposition(p: IntPolynomial) -> list[tuple[IntPolynomial, int]]:
    """Yun's algorithm: p = c * prod f_j^j with each f_j squarefree and pairwise coprime."""
    if p.degree < 1:
        return []
    a = [Fraction(c) for c in p.coeffs]
    b = _qderiv(a)
    g = _qgcd(a, b)
    c = _qdivmod(a, g)[0]
    d = _qsub(_qdivmod(b, g)[0], _qderiv(c))
    out = []
    i = 1
    while len(c) > 1:
        g = _qgcd(c, d) if d else c
        if len(g) > 1:
            out.append((_to_primitive(g), i))
        c = _qdivmod(c, g)[0]
        d = _qsub(_qdivmod(d, g)[0], _qderiv(c)) if d else []
        i += 1
    return out


def _aberth(coeffs: Sequence[int], precision: int) -> list:
    """All roots of a squarefree integer polynomial by Aberth-Ehrlich iteration."""
    deg = len(coeffs) - 1
    if deg == 1:
        return [mpmath.mpf(-coeffs[0]) / coeffs[1]]
    lead = mpmath.mpf(coeffs[-1])
    monic = [mpmath.mpf(c) / lead for c in coeffs]
    radius = 1 + max(abs(c) for c in monic[:-1])
    # offset angle keeps starting points off the real axis and off symmetry lines
    z = [radius * mpmath.expj(2 * mpmath.pi * k / deg + 0.4) for k in range(deg)]
    tol = mpmath.mpf(10) ** (-precision - 2)
    dmonic = [k * monic[k] for k in range(1, deg + 1)]
    for _ in range(1000):
        max_step = 0
        for k in range(deg):
            zk = z[k]
            pv = mpmath.polyval(monic[::-1], zk)
            dv = mpmath.polyval(dmonic[::-1], zk)
            if pv == 0:
                continue
            ratio = pv / dv if dv != 0 else mpmath.mpf(10) ** 10
            repulse = mpmath.fsum(1 / (zk - z[j]) for j in range(deg) if j != k)
            step = ratio / (1 - ratio * repulse)
            z[k] = zk - step
            max_step = max(max_step, abs(step))
        if max_step < tol:
            return z
    raise RootFindingError(f"no convergence after 1000 sweeps on degree-{deg} polynomial {list(coeffs)}")


def poly_roots(p: IntPolynomial, precision: int = 12) -> list[complex]:
    """All complex roots of ``p`` with multiplicity, sorted by (real, imag).

    Multiplicities come from an exact squarefree decomposition, so only simple
    roots are ever iterated on numerically.
    """
    if p.is_zero():
        raise ValueError("the zero polynomial has no finite root set")
    if not 1 <= precision <= 15:
        raise ValueError("precision must lie in 1..15 digits (results are returned as doubles)")
    roots: list[complex] = []
    with mpmath.workdps(precision + 15):
        for factor, mult in squarefree_decomposition(p):
            for z in _aberth(factor.coeffs, precision):
                z = complex(z)
                if abs(z.imag) <= 10.0 ** (-precision - 3) * (1 + abs(z)):
                    z = complex(z.real, 0.0)
                roots.extend([z] * mult)
    digits = max(precision - 2, 1)
    roots.sort(key=lambda z: (round(z.real, digits), round(z.imag, digits)))
    return roots
