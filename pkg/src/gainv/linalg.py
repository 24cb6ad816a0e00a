"""Exact determinants and linear solves by fraction-free (Bareiss) elimination.

Rational inputs are scaled row-wise to integers first, so all elimination
happens in ``int`` and every Bareiss division is exact.
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm
from typing import Sequence


class SingularMatrixError(ArithmeticError):
    pass


def _integer_rows(A):
    rows, scale = [], Fraction(1)
    for row in A:
        d = 1
        for a in row:
            d = lcm(d, Fraction(a).denominator)
        rows.append([int(Fraction(a) * d) for a in row])
        scale *= d
    return rows, scale


def _bareiss(M, ncols):
    """In-place fraction-free elimination on the first ``ncols`` columns.

    Returns the sign of the row permutation, or 0 if a pivot column is zero.
    """
    n = len(M)
    sign, prev = 1, 1
    for k in range(min(n, ncols)):
        if M[k][k] == 0:
            for r in range(k + 1, n):
                if M[r][k] != 0:
                    M[k], M[r] = M[r], M[k]
                    sign = -sign
                    break
            else:
                return 0
        piv = M[k][k]
        for i in range(k + 1, n):
            a = M[i][k]
            row_i, row_k = M[i], M[k]
            for j in range(k + 1, len(row_i)):
                row_i[j] = (piv * row_i[j] - a * row_k[j]) // prev
            row_i[k] = 0
        prev = piv
    return sign


def exact_det(A: Sequence[Sequence]) -> Fraction | int:
    n = len(A)
    if any(len(r) != n for r in A):
        raise ValueError("determinant needs a square matrix")
    if n == 0:
        return 1
    M, scale = _integer_rows(A)
    sign = _bareiss(M, n)
    if sign == 0:
        return 0
    det = Fraction(sign * M[n - 1][n - 1]) / scale
    return det.numerator if det.denominator == 1 else det


def exact_solve(A: Sequence[Sequence], rhs: Sequence) -> list:
    """The unique solution of ``A x = rhs`` for square invertible ``A``."""
    n = len(A)
    if any(len(r) != n for r in A) or len(rhs) != n:
        raise ValueError("exact_solve needs a square system")
    if n == 0:
        return []
    aug = [list(r) + [b] for r, b in zip(A, rhs)]
    M, _ = _integer_rows(aug)
    if _bareiss(M, n) == 0 or M[n - 1][n - 1] == 0:
        raise SingularMatrixError("matrix is singular")
    x = [Fraction(0)] * n
    for i in range(n - 1, -1, -1):
        acc = Fraction(M[i][n])
        for j in range(i + 1, n):
            acc -= M[i][j] * x[j]
        x[i] = acc / M[i][i]
    return [v.numerator if v.denominator == 1 else v for v in x]


def matmul(A, B):
    return [[sum((a * b for a, b in zip(row, col)), Fraction(0)) for col in zip(*B)]
            for row in A]


def matvec(A, x):
    return [sum((a * b for a, b in zip(row, x)), Fraction(0)) for row in A]


def inverse(A):
    n = len(A)
    cols = [exact_solve(A, [1 if i == j else 0 for i in range(n)]) for j in range(n)]
    return [[cols[j][i] for j in range(n)] for i in range(n)]
