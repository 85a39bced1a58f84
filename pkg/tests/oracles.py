"""Independent brute-force oracles the test suite checks the library against.

Everything here is deliberately written with plain Python loops (and exact
Fraction arithmetic where rank is concerned) so that no code path is shared
with the package implementations being tested.
"""

from fractions import Fraction

import numpy as np


def convolve_brute(x, y):
    """Direct piecewise-sum linear convolution, plain Python loops."""
    m, n = len(x), len(y)
    out = [0.0] * (m + n - 1)
    for l in range(m + n - 1):
        acc = 0.0
        for j in range(m):
            k = l - j
            if 0 <= k < n:
                acc += x[j] * y[k]
        out[l] = acc
    return np.array(out)


def antidiagonal_sums_brute(w):
    """Anti-diagonal sums via explicit cell enumeration."""
    w = np.asarray(w)
    m, n = w.shape
    out = [0.0] * (m + n - 1)
    for k in range(m):
        for l in range(n):
            out[k + l] += w[k, l]
    return np.array(out)


def rank_fraction(mat) -> int:
    """Exact rank by Gaussian elimination over the rationals.

    Intended for integer-valued inputs, where float-to-Fraction conversion
    is exact.
    """
    rows = [[Fraction(v).limit_denominator(10**12) for v in row] for row in np.asarray(mat)]
    n_rows = len(rows)
    n_cols = len(rows[0])
    rank = 0
    row = 0
    for col in range(n_cols):
        pivot = None
        for r in range(row, n_rows):
            if rows[r][col] != 0:
                pivot = r
                break
        if pivot is None:
            continue
        rows[row], rows[pivot] = rows[pivot], rows[row]
        for r in range(row + 1, n_rows):
            if rows[r][col] != 0:
                factor = rows[r][col] / rows[row][col]
                rows[r] = [a - factor * b for a, b in zip(rows[r], rows[row])]
        rank += 1
        row += 1
        if row == n_rows:
            break
    return rank


def operator_matrix(m, n):
    """The (m+n-1) x (mn) coefficient matrix of the anti-diagonal sums,
    acting on row-major vectorized matrices."""
    a = np.zeros((m + n - 1, m * n))
    for k in range(m):
        for l in range(n):
            a[k + l, k * n + l] = 1.0
    return a
