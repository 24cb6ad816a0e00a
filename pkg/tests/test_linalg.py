import itertools
import random
from fractions import Fraction

import pytest
import sympy

from gainv.linalg import SingularMatrixError, exact_det, exact_solve, inverse, matmul


def leibniz_det(A):
    n = len(A)
    total = Fraction(0)
    for perm in itertools.permutations(range(n)):
        inversions = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        prod = Fraction(1)
        for i, j in enumerate(perm):
            prod *= A[i][j]
        total += -prod if inversions % 2 else prod
    return total


def test_identity_det():
    for n in range(6):
        assert exact_det([[int(i == j) for j in range(n)] for i in range(n)]) == 1


def test_small_solve():
    assert exact_solve([[2]], [4]) == [2]


def test_singular():
    assert exact_det([[1, 2], [2, 4]]) == 0
    with pytest.raises(SingularMatrixError):
        exact_solve([[1, 2], [2, 4]], [1, 1])


def test_needs_row_swap():
    A = [[0, 1], [1, 0]]
    assert exact_det(A) == -1
    assert exact_solve(A, [3, 5]) == [5, 3]


@pytest.mark.parametrize("seed", range(20))
def test_det_against_leibniz(seed):
    rng = random.Random(seed)
    n = rng.randint(1, 5)
    A = [[Fraction(rng.randint(-9, 9), rng.randint(1, 4)) for _ in range(n)] for _ in range(n)]
    assert exact_det(A) == leibniz_det(A)


@pytest.mark.parametrize("seed", range(20))
def test_solve_against_sympy(seed):
    rng = random.Random(100 + seed)
    n = rng.randint(1, 6)
    A = [[Fraction(rng.randint(-9, 9), rng.randint(1, 3)) for _ in range(n)] for _ in range(n)]
    b = [Fraction(rng.randint(-9, 9)) for _ in range(n)]
    if leibniz_det(A) == 0 if n <= 5 else sympy.Matrix(A).det() == 0:
        return
    x = exact_solve(A, b)
    ref = sympy.Matrix(A).LUsolve(sympy.Matrix(b))
    assert [Fraction(str(v)) for v in ref] == [Fraction(v) for v in x]


def test_inverse():
    A = [[2, 1], [7, 4]]
    assert matmul(A, inverse(A)) == [[1, 0], [0, 1]]
