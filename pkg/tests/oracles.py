"""Independent reference computations used by the tests."""
from fractions import Fraction
from itertools import product


def lattice_fixed_points(A, m):
    """Count x in [0,1)^2 with (A^m - I)x integral by enumerating the integer points k = Bx.

    Uses plain list arithmetic, not the package's matrix code.
    """
    P = [[1, 0], [0, 1]]
    for _ in range(m):
        P = [[sum(P[i][t] * A[t][j] for t in range(2)) for j in range(2)] for i in range(2)]
    B = [[P[0][0] - 1, P[0][1]], [P[1][0], P[1][1] - 1]]
    det = B[0][0] * B[1][1] - B[0][1] * B[1][0]
    if det == 0:
        raise ValueError("infinitely many fixed points")
    inv = [[Fraction(B[1][1], det), Fraction(-B[0][1], det)], [Fraction(-B[1][0], det), Fraction(B[0][0], det)]]
    corners = [(B[0][0] * a + B[0][1] * b, B[1][0] * a + B[1][1] * b) for a, b in product((0, 1), repeat=2)]
    xs = [c[0] for c in corners]
    ys = [c[1] for c in corners]
    count = 0
    for k0 in range(min(xs), max(xs) + 1):
        for k1 in range(min(ys), max(ys) + 1):
            x0 = inv[0][0] * k0 + inv[0][1] * k1
            x1 = inv[1][0] * k0 + inv[1][1] * k1
            if 0 <= x0 < 1 and 0 <= x1 < 1:
                count += 1
    return count


def brute_hurwitz(z, s, n_terms):
    """Partial sum of (s+n)^-z plus the integral tail from n_terms to infinity."""
    total = sum((s + n) ** -z for n in range(n_terms))
    tail = (s + n_terms) ** (1 - z) / (z - 1)
    return total + tail
