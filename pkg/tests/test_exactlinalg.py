import math
from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from torus_zeta.exactlinalg import (
    IntMatrix,
    IntPolynomial,
    char_poly,
    det_exact,
    exterior_power,
    mat_pow,
    poly_roots,
    squarefree_decomposition,
)

CAT = IntMatrix([[2, 1], [1, 1]])


def square_matrices(max_n=5, bound=10):
    return st.integers(1, max_n).flatmap(
        lambda n: st.lists(
            st.lists(st.integers(-bound, bound), min_size=n, max_size=n), min_size=n, max_size=n
        ).map(IntMatrix)
    )


def fraction_det(rows):
    """Gaussian elimination over Q; an oracle independent of the fraction-free code."""
    a = [[Fraction(x) for x in row] for row in rows]
    n, det = len(a), Fraction(1)
    for c in range(n):
        p = next((r for r in range(c, n) if a[r][c] != 0), None)
        if p is None:
            return 0
        if p != c:
            a[c], a[p] = a[p], a[c]
            det = -det
        det *= a[c][c]
        for r in range(c + 1, n):
            f = a[r][c] / a[c][c]
            a[r] = [x - f * y for x, y in zip(a[r], a[c])]
    return int(det)


def test_mat_pow_examples():
    assert mat_pow(CAT, 0) == IntMatrix.identity(2)
    assert mat_pow(CAT, 2) == IntMatrix([[5, 3], [3, 2]])
    assert mat_pow(CAT, 3) == IntMatrix([[13, 8], [8, 5]])


def test_mat_pow_big_integers():
    # entries of A^200 are Fibonacci numbers far beyond 64 bits
    P = mat_pow(CAT, 200)
    a, b = 0, 1
    for _ in range(401):
        a, b = b, a + b
    assert P[0, 0] == a and P[0, 0] > 2**200


def test_det_examples():
    assert det_exact(IntMatrix.identity(2)) == 1
    assert det_exact(IntMatrix([[-1, -1], [-1, 0]])) == -1
    assert det_exact(IntMatrix([[4, 3], [3, 1]])) == -5
    assert det_exact(IntMatrix([[0, 1], [1, 0]])) == -1


def test_char_poly_examples():
    assert char_poly(CAT).coeffs == (1, -3, 1)
    assert char_poly(IntMatrix.identity(2)).coeffs == (1, -2, 1)
    companion = IntMatrix([[0, 0, 5], [1, 0, 2], [0, 1, 0]])
    assert char_poly(companion).coeffs == (-5, -2, 0, 1)


def test_exterior_power_examples():
    assert exterior_power(CAT, 0) == IntMatrix([[1]])
    assert exterior_power(CAT, 2) == IntMatrix([[1]])
    assert exterior_power(IntMatrix.identity(3), 2) == IntMatrix.identity(3)
    with pytest.raises(ValueError):
        exterior_power(CAT, 3)


def test_exterior_power_is_minor_matrix():
    A = IntMatrix([[1, 2, 0], [3, -1, 4], [2, 2, 5]])
    W = exterior_power(A, 2)
    subsets = list(combinations(range(3), 2))
    for a, I in enumerate(subsets):
        for b, J in enumerate(subsets):
            assert W[a, b] == fraction_det([[A[i, j] for j in J] for i in I])


def test_poly_roots_examples():
    r = poly_roots(IntPolynomial([1, -3, 1]))
    assert r[0] == pytest.approx((3 - math.sqrt(5)) / 2, abs=1e-12)
    assert r[1] == pytest.approx((3 + math.sqrt(5)) / 2, abs=1e-12)
    assert poly_roots(IntPolynomial([-1, 0, 1])) == [-1, 1]
    assert poly_roots(IntPolynomial([1, -2, 1])) == [1, 1]


def test_poly_roots_multiplicity_exact():
    # (x-1)^3 (x^2+1)^2
    p = IntPolynomial([-1, 1]) ** 3 * IntPolynomial([1, 0, 1]) ** 2
    roots = poly_roots(p)
    assert len(roots) == 7
    assert sum(abs(z - 1) < 1e-12 for z in roots) == 3
    assert sum(abs(z - 1j) < 1e-12 for z in roots) == 2
    assert set(squarefree_decomposition(p)) == {(IntPolynomial([-1, 1]), 3), (IntPolynomial([1, 0, 1]), 2)}


def test_poly_roots_rejects_zero():
    with pytest.raises(ValueError):
        poly_roots(IntPolynomial([]))


def test_polynomial_invariants():
    assert IntPolynomial([1, 2, 0, 0]).coeffs == (1, 2)
    assert IntPolynomial([0, 0]).is_zero()
    rev = char_poly(CAT).reversed(2)
    assert rev(0) == 1


@settings(max_examples=60, deadline=None)
@given(square_matrices())
def test_alternating_trace_of_exterior_powers(A):
    n = A.n
    lhs = sum((-1) ** i * exterior_power(A, i).trace() for i in range(n + 1))
    assert lhs == det_exact(IntMatrix.identity(n) - A)


@settings(max_examples=60, deadline=None)
@given(square_matrices())
def test_det_matches_rational_elimination(A):
    assert det_exact(A) == fraction_det(A.rows)


@settings(max_examples=40, deadline=None)
@given(square_matrices(max_n=4).flatmap(lambda A: st.tuples(st.just(A), square_matrices(max_n=4).filter(lambda B: B.n == A.n) | st.just(A))), st.integers(0, 4))
def test_exterior_power_functorial(AB, k):
    A, B = AB
    k = min(k, A.n)
    assert exterior_power(A @ B, k) == exterior_power(A, k) @ exterior_power(B, k)


@settings(max_examples=40, deadline=None)
@given(square_matrices(max_n=4))
def test_cayley_hamilton(A):
    p = char_poly(A)
    acc = IntMatrix.zeros(A.n)
    for c in reversed(p.coeffs):  # Horner in A
        acc = acc @ A + IntMatrix.identity(A.n).scale(c)
    assert acc == IntMatrix.zeros(A.n)


@settings(max_examples=40, deadline=None)
@given(square_matrices(max_n=5, bound=6), st.integers(6, 12))
def test_poly_roots_backsubstitution(A, precision):
    p = char_poly(A)
    roots = poly_roots(p, precision)
    assert len(roots) == p.degree
    bound = 10 ** (-precision + 2) * (1 + max(abs(c) for c in p.coeffs))
    for z in roots:
        assert abs(p(z)) <= bound * max(1.0, abs(z)) ** p.degree
    assert roots == sorted(roots, key=lambda z: (z.real, z.imag))


@settings(max_examples=40, deadline=None)
@given(square_matrices(max_n=5, bound=6))
def test_det_is_product_of_eigenvalues(A):
    prod = 1 + 0j
    for z in poly_roots(char_poly(A)):
        prod *= z
    assert abs(prod - det_exact(A)) < 1e-8 * max(1.0, abs(det_exact(A)))
