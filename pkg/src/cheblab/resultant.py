"""Exact polynomial discriminants via Sylvester matrices.

Independent cross-check for the closed-form conductor arithmetic: the
discriminant is computed as a resultant determinant with fraction-free
(Bareiss) integer elimination, never through the p^p * a^(p-1) formula.
"""

from __future__ import annotations


def bareiss_determinant(matrix: list[list[int]]) -> int:
    """Exact determinant of an integer matrix by fraction-free elimination."""
    m = [row[:] for row in matrix]
    n = len(m)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for r in range(k + 1, n):
                if m[r][k] != 0:
                    m[k], m[r] = m[r], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
            m[i][k] = 0
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def sylvester_matrix(f: list[int], g: list[int]) -> list[list[int]]:
    """Sylvester matrix of two polynomials given big-endian coefficients."""
    n, m = len(f) - 1, len(g) - 1
    size = n + m
    rows = []
    for shift in range(m):
        rows.append([0] * shift + f + [0] * (m - 1 - shift))
    for shift in range(n):
        rows.append([0] * shift + g + [0] * (n - 1 - shift))
    assert all(len(r) == size for r in rows)
    return rows


def resultant(f: list[int], g: list[int]) -> int:
    return bareiss_determinant(sylvester_matrix(f, g))


def discriminant(f: list[int]) -> int:
    """disc(f) = (-1)^(n(n-1)/2) resultant(f, f') / lc(f), big-endian coeffs."""
    n = len(f) - 1
    deriv = [c * (n - i) for i, c in enumerate(f[:-1])]
    res = resultant(f, deriv)
    sign = -1 if (n * (n - 1) // 2) % 2 else 1
    value, rem = divmod(sign * res, f[0])
    if rem:
        raise ArithmeticError("resultant not divisible by leading coefficient")
    return value


def xp_minus_a_discriminant(p: int, a: int) -> int:
    """disc(X^p - a) computed from the Sylvester determinant."""
    return discriminant([1] + [0] * (p - 1) + [-a])
