import sys
import random

import pytest

from torus_zeta.cohomology import anosov_check, from_explicit, from_toral
from torus_zeta.exactlinalg import IntMatrix, det_exact

CAT = IntMatrix([[2, 1], [1, 1]])


def genus2():
    return from_explicit(2, [1, 4, 1], [IntMatrix([[1]]), IntMatrix.block_diag(CAT, CAT), IntMatrix([[1]])])


def circle():
    return from_explicit(1, [1, 1], [IntMatrix([[1]]), IntMatrix([[1]])])


def random_sl(rng: random.Random, n: int, steps: int = 6) -> IntMatrix:
    """Product of random elementary transvections: always det 1."""
    A = IntMatrix.identity(n)
    for _ in range(steps):
        i, j = rng.sample(range(n), 2)
        E = [[int(a == b) for b in range(n)] for a in range(n)]
        E[i][j] = rng.choice([-2, -1, 1, 2])
        A = A @ IntMatrix(E)
    return A


def random_hyperbolic(rng: random.Random, n: int) -> IntMatrix:
    while True:
        A = random_sl(rng, n)
        if anosov_check(A).passed:
            assert det_exact(A) == 1
            return A


@pytest.fixture
def cat_action():
    return from_toral(CAT)


@pytest.fixture
def genus2_action():
    return genus2()


@pytest.fixture
def circle_action():
    return circle()


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.RESULTS:
        terminalreporter.write_line(line)
