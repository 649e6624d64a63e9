"""Exact integer and rational linear algebra over immutable tuple matrices.

Matrices are tuples of row tuples of Python ints and vectors are tuples of
ints, so every value is hashable and safe to share between workers. All
arithmetic is exact: determinants use fraction-free elimination, rational
solves return `fractions.Fraction` entries in lowest terms, and nothing in
this module ever touches floating point.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from .errors import InvariantViolation, RankError, ShapeError, SingularityError

Vec = tuple[int, ...]
Mat = tuple[tuple[int, ...], ...]
FracVec = tuple[Fraction, ...]


def matrix(rows) -> Mat:
    """Build a matrix tuple from an iterable of rows, checking rectangularity."""
    m = tuple(tuple(int(x) for x in row) for row in rows)
    if m and any(len(row) != len(m[0]) for row in m):
        raise ShapeError("rows have inconsistent lengths")
    return m


def vector(entries) -> Vec:
    return tuple(int(x) for x in entries)


def shape(m: Mat) -> tuple[int, int]:
    return (len(m), len(m[0]) if m else 0)


def identity(n: int) -> Mat:
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def transpose(m: Mat) -> Mat:
    return tuple(tuple(col) for col in zip(*m)) if m else ()


def mat_mul(a: Mat, b: Mat) -> Mat:
    ra, ca = shape(a)
    rb, cb = shape(b)
    if ca != rb:
        raise ShapeError(f"cannot multiply {ra}x{ca} by {rb}x{cb}")
    bt = transpose(b)
    return tuple(tuple(sum(x * y for x, y in zip(row, col)) for col in bt) for row in a)


def mat_vec(a: Mat, x) -> tuple:
    ra, ca = shape(a)
    if ca != len(x):
        raise ShapeError(f"cannot apply {ra}x{ca} to a vector of length {len(x)}")
    return tuple(sum(e * v for e, v in zip(row, x)) for row in a)


def dot(u, v):
    if len(u) != len(v):
        raise ShapeError("dot product of vectors with different lengths")
    return sum(x * y for x, y in zip(u, v))


def det(m: Mat) -> int:
    """Exact determinant by Bareiss fraction-free elimination."""
    r, c = shape(m)
    if r != c:
        raise ShapeError(f"determinant of a non-square {r}x{c} matrix")
    n = r
    if n == 0:
        return 1
    a = [list(row) for row in m]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k]:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        pivot = a[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                # Bareiss: the division by the previous pivot is exact.
                a[i][j] = (pivot * a[i][j] - a[i][k] * a[k][j]) // prev
        prev = pivot
    return sign * a[n - 1][n - 1]


def _drop(m: Mat, row: int, col: int) -> Mat:
    return tuple(
        tuple(x for j, x in enumerate(r) if j != col)
        for i, r in enumerate(m)
        if i != row
    )


def adjugate(m: Mat) -> Mat:
    """Adjugate matrix: m @ adjugate(m) == det(m) * I, also for singular m."""
    return _adjugate_cached(matrix(m))


@lru_cache(maxsize=None)
def _adjugate_cached(m: Mat) -> Mat:
    r, c = shape(m)
    if r != c:
        raise ShapeError(f"adjugate of a non-square {r}x{c} matrix")
    n = r
    if n == 0:
        return ()
    if n == 1:
        return ((1,),)
    return tuple(
        tuple((-1) ** (i + j) * det(_drop(m, j, i)) for j in range(n))
        for i in range(n)
    )


def is_unimodular(u: Mat) -> bool:
    """True iff `u` is square with determinant +1 or -1."""
    r, c = shape(u)
    if r != c:
        return False
    return abs(det(u)) == 1


def unimodular_inverse(u: Mat) -> Mat:
    """Exact integer inverse of a unimodular matrix."""
    d = det(u)
    if abs(d) != 1:
        raise SingularityError("matrix is not unimodular, integer inverse undefined")
    adj = adjugate(u)
    if d == 1:
        return adj
    return tuple(tuple(-x for x in row) for row in adj)


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, x, y) with g = gcd(a, b) >= 0 and g == x*a + y*b."""
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


def hnf(a: Mat) -> tuple[Mat, Mat]:
    """Hermite decomposition a = h_full @ q with q unimodular.

    The top n x n block of `h_full` is lower triangular with positive
    diagonal and 0 <= h[i][j] < h[i][i] for j < i; rows below the top block
    carry the same column operations but are otherwise unconstrained. The
    decomposition is computed by integer column operations, so it requires
    every row prefix of `a` to have full rank (callers choose the row order).

    Returns:
        (h_full, q) with a == h_full @ q exactly.
    """
    return _hnf_cached(matrix(a))


@lru_cache(maxsize=None)
def _hnf_cached(a: Mat) -> tuple[Mat, Mat]:
    m, n = shape(a)
    if n == 0 or m < n:
        raise ShapeError(f"hermite form needs an m x n matrix with m >= n >= 1, got {m}x{n}")
    work = [list(row) for row in a]
    q = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    for i in range(n):
        if all(work[i][j] == 0 for j in range(i, n)):
            raise RankError(f"rows 0..{i} are linearly dependent")
        for j in range(i + 1, n):
            if work[i][j] == 0:
                continue
            piv, other = work[i][i], work[i][j]
            g, x, y = _xgcd(piv, other)
            p, qq = piv // g, other // g
            for r in range(m):
                ci, cj = work[r][i], work[r][j]
                work[r][i] = x * ci + y * cj
                work[r][j] = p * cj - qq * ci
            for r in range(n):
                qi, qj = q[i][r], q[j][r]
                q[i][r] = p * qi + qq * qj
                q[j][r] = -y * qi + x * qj
        if work[i][i] < 0:
            for r in range(m):
                work[r][i] = -work[r][i]
            for r in range(n):
                q[i][r] = -q[i][r]
        for j in range(i):
            qq = work[i][j] // work[i][i]
            if qq:
                for r in range(m):
                    work[r][j] -= qq * work[r][i]
                for r in range(n):
                    q[i][r] += qq * q[j][r]
    h_full = matrix(work)
    qm = matrix(q)
    if mat_mul(h_full, qm) != a:
        raise InvariantViolation("hermite decomposition readback failed")
    return h_full, qm


def solve_rational(m: Mat, b) -> FracVec:
    """Exact rational solution x of m @ x == b for nonsingular integer m."""
    d = det(m)
    if d == 0:
        raise SingularityError("cannot solve a singular system")
    adj = adjugate(m)
    return tuple(Fraction(sum(adj[i][j] * b[j] for j in range(len(b))), d) for i in range(len(b)))


def max_minors(a: Mat) -> tuple[tuple[tuple[int, ...], int], ...]:
    """All n+1 maximal minors of an (n+1) x n matrix.

    Returns one (base, minor) pair per omitted row, where `base` is the
    ascending tuple of the n row indices forming the minor. Zero minors of
    degenerate bases are included.
    """
    m, n = shape(a)
    if m != n + 1:
        raise ShapeError(f"expected an (n+1) x n matrix, got {m}x{n}")
    out = []
    for omit in range(m):
        base = tuple(i for i in range(m) if i != omit)
        minor = det(tuple(a[i] for i in base))
        out.append((base, minor))
    return tuple(out)


def delta_value(a: Mat) -> int:
    """The largest absolute value among the maximal minors of `a`."""
    return max(abs(minor) for _, minor in max_minors(a))
