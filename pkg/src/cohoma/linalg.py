"""Small exact linear algebra over the rationals (rank, solve)."""
from fractions import Fraction


def rank(rows):
    """Rank of a list of rows (lists of exact numbers)."""
    m = [list(map(Fraction, r)) for r in rows if any(r)]
    if not m:
        return 0
    ncol = len(m[0])
    r = 0
    for c in range(ncol):
        piv = next((i for i in range(r, len(m)) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        p = m[r][c]
        for i in range(r + 1, len(m)):
            if m[i][c]:
                k = m[i][c] / p
                row_i = m[i]
                row_r = m[r]
                for j in range(c, ncol):
                    row_i[j] -= k * row_r[j]
        r += 1
        if r == len(m):
            break
    return r


def solve(a, b):
    """Solve a x = b exactly (a: list of rows). Returns x or None if inconsistent."""
    n = len(a[0]) if a else 0
    m = [list(map(Fraction, row)) + [Fraction(bi)] for row, bi in zip(a, b)]
    pivots = []
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, len(m)) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        p = m[r][c]
        m[r] = [v / p for v in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                k = m[i][c]
                m[i] = [vi - k * vr for vi, vr in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    for i in range(r, len(m)):
        if m[i][n]:
            return None
    x = [Fraction(0)] * n
    for i, c in enumerate(pivots):
        x[c] = m[i][n]
    return x


def matmul(a, b):
    return [[sum(a[i][k] * b[k][j] for k in range(len(b))) for j in range(len(b[0]))]
            for i in range(len(a))]


def matsub(a, b):
    return [[x - y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def commutator(a, b):
    return matsub(matmul(a, b), matmul(b, a))
