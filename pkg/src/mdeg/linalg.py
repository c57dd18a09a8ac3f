"""Small dense linear algebra over exact fields (Q or Q(t)).

Matrices are lists of rows.  Entries are either ``mpq`` or ``TScalar``;
every routine only uses field operations and truthiness for zero tests.
"""

from __future__ import annotations

from itertools import combinations

from .arith import ArithmeticError_, TScalar, mpq


class SingularMatrixError(ArithmeticError_):
    pass


def shape(a):
    return len(a), (len(a[0]) if a else 0)


def copy(a):
    return [list(r) for r in a]


def identity(n, one=None):
    one = mpq(1) if one is None else one
    zero = one - one
    return [[one if i == j else zero for j in range(n)] for i in range(n)]


def transpose(a):
    return [list(c) for c in zip(*a)] if a else []


def matmul(a, b):
    m, k = shape(a)
    k2, n = shape(b)
    if k != k2:
        raise ValueError(f"shape mismatch {m}x{k} @ {k2}x{n}")
    bt = transpose(b)
    out = []
    for row in a:
        out_row = []
        for col in bt:
            acc = None
            for x, y in zip(row, col):
                if x and y:
                    acc = x * y if acc is None else acc + x * y
            out_row.append(acc if acc is not None else (row[0] - row[0] if row else mpq(0)))
        out.append(out_row)
    return out


def matvec(a, v):
    return [r[0] for r in matmul(a, [[x] for x in v])]


def row_echelon(a):
    """Return (echelon form, pivot columns, sign) via fraction-field elimination."""
    a = copy(a)
    m, n = shape(a)
    pivots = []
    r = 0
    sign = 1
    for c in range(n):
        if r >= m:
            break
        p = next((i for i in range(r, m) if a[i][c]), None)
        if p is None:
            continue
        if p != r:
            a[p], a[r] = a[r], a[p]
            sign = -sign
        inv = 1 / a[r][c]
        for i in range(r + 1, m):
            if a[i][c]:
                f = a[i][c] * inv
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
    return a, pivots, sign


def rank(a) -> int:
    if not a or not a[0]:
        return 0
    return len(row_echelon(a)[1])


def det(a):
    m, n = shape(a)
    if m != n:
        raise ValueError("determinant of non-square matrix")
    if m == 0:
        return mpq(1)
    e, piv, sign = row_echelon(a)
    if len(piv) < n:
        return a[0][0] - a[0][0]
    acc = e[0][0]
    for i in range(1, n):
        acc = acc * e[i][i]
    return acc if sign > 0 else -acc


def inverse(a):
    m, n = shape(a)
    if m != n:
        raise ValueError("inverse of non-square matrix")
    one = _one_like(a)
    zero = one - one
    aug = [list(r) + [one if i == j else zero for j in range(n)] for i, r in enumerate(a)]
    for c in range(n):
        p = next((i for i in range(c, n) if aug[i][c]), None)
        if p is None:
            raise SingularMatrixError("matrix is singular")
        aug[p], aug[c] = aug[c], aug[p]
        inv = 1 / aug[c][c]
        aug[c] = [x * inv for x in aug[c]]
        for i in range(n):
            if i != c and aug[i][c]:
                f = aug[i][c]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[c])]
    return [r[n:] for r in aug]


def solve(a, b):
    """Solve a x = b for square invertible a; b is a matrix (list of rows)."""
    return matmul(inverse(a), b)


def nullspace_dim(a, ncols=None) -> int:
    n = ncols if ncols is not None else shape(a)[1]
    return n - rank(a) if a else n


def minors(a, k):
    """Yield (rows, cols, det) for all k x k minors."""
    m, n = shape(a)
    for rows in combinations(range(m), k):
        for cols in combinations(range(n), k):
            sub = [[a[i][j] for j in cols] for i in rows]
            yield rows, cols, det(sub)


def _one_like(a):
    for r in a:
        for x in r:
            if isinstance(x, TScalar):
                return TScalar.coerce(1)
    return mpq(1)


def to_tscalar(a):
    return [[TScalar.coerce(x) for x in r] for r in a]
