"""Canonical (normalized) defining systems for Delta-modular simplices.

A normalized system is the block Hermite form

    [ I_s  0 ]           [ 0 ]
    [  B   T ]  x  <=    [ h ],      c^T x <= c0
with
  1. the (n+1) x n matrix in Hermite form and det(H) equal to the delta of
     the whole matrix,
  2. T lower triangular with diagonal entries >= 2 (so k <= log2(delta)),
  3. 0 <= h_i < H_ii,
  4. every row of (A | b) primitive,
  5. c inside the half-open fundamental parallelepiped of -H^T,
  6. all matrix entries bounded by delta in absolute value.

Conditions 5 and 6 follow from the others for genuine simplices; the
validator still checks them so any violation flags a bug immediately.

On top of the classical form this module pins one extra tie-break: the
identity-block coordinates are sorted by (column of B, entry of c). The
pair moves as a unit under any permutation of identity-block coordinates,
so the sort makes every such permutation redundant and the canonical form
per (base, non-unit row placement/order) choice unique.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import (
    InvalidSystemError,
    InvariantViolation,
    PreconditionError,
    ShapeError,
)
from .exact_linalg import (
    Mat,
    Vec,
    adjugate,
    delta_value,
    det,
    hnf,
    identity,
    matrix,
    solve_rational,
    transpose,
    unimodular_inverse,
    vector,
)
from .simplex_model import (
    AffineUnimodularMap,
    InequalitySystem,
    apply_map,
    compose,
    identity_map,
    validate_simplex,
)

NORMALIZED_FORMAT = "delta-simplex/normalized-v1"


@dataclass(frozen=True)
class NormalizedSystem:
    """A system in canonical block Hermite form, plus its delta."""

    n: int
    s: int
    k: int
    H: Mat
    h: Vec
    c: Vec
    c0: int
    delta: int

    def __post_init__(self):
        object.__setattr__(self, "H", tuple(tuple(row) for row in self.H))
        object.__setattr__(self, "h", tuple(self.h))
        object.__setattr__(self, "c", tuple(self.c))
        if self.s + self.k != self.n:
            raise ShapeError("block sizes must add up to the dimension")
        if len(self.H) != self.n or any(len(row) != self.n for row in self.H):
            raise ShapeError("H must be n x n")
        if len(self.h) != self.n or len(self.c) != self.n:
            raise ShapeError("h and c must have length n")

    def full_matrix(self) -> Mat:
        return self.H + (self.c,)

    def full_rhs(self) -> Vec:
        return self.h + (self.c0,)

    def system(self) -> InequalitySystem:
        return InequalitySystem(self.n, self.full_matrix(), self.full_rhs())

    def B(self) -> Mat:
        return tuple(row[: self.s] for row in self.H[self.s :])

    def T(self) -> Mat:
        return tuple(row[self.s :] for row in self.H[self.s :])


def _primitive_row(row: Vec, rhs: int) -> tuple[Vec, int]:
    g = 0
    for x in row:
        g = math.gcd(g, x)
    g = math.gcd(g, rhs)
    if g == 0:
        raise InvalidSystemError("system contains an all-zero row")
    if g == 1:
        return row, rhs
    return tuple(x // g for x in row), rhs // g


def primitivize(sys: InequalitySystem) -> InequalitySystem:
    """Divide every row of (A | b) by the gcd of its n+1 entries."""
    rows = []
    rhs = []
    for a, b0 in sys.rows():
        ra, rb = _primitive_row(a, b0)
        rows.append(ra)
        rhs.append(rb)
    return InequalitySystem(sys.n, matrix(rows), vector(rhs))


def is_hnf_matrix(m: Mat) -> bool:
    """Square, lower triangular, positive diagonal, rows reduced mod the diagonal."""
    n = len(m)
    if any(len(row) != n for row in m):
        return False
    for i in range(n):
        if m[i][i] <= 0:
            return False
        for j in range(n):
            if j > i and m[i][j] != 0:
                return False
            if j < i and not 0 <= m[i][j] < m[i][i]:
                return False
    return True


def reduce_rhs(h_mat: Mat, b) -> tuple[Vec, Vec]:
    """Unique translation taking H x <= b to H x <= h with 0 <= h_i < H_ii.

    Returns (h, x0) with h == b - H @ x0. Working down the rows, each x0
    coordinate is forced by the triangular structure, which is what makes
    the translation unique.
    """
    if not is_hnf_matrix(h_mat):
        raise PreconditionError("matrix is not in Hermite form")
    n = len(h_mat)
    cur = list(b)
    x0 = [0] * n
    for i in range(n):
        q = cur[i] // h_mat[i][i]
        x0[i] = q
        if q:
            for r in range(i, n):
                cur[r] -= q * h_mat[r][i]
    return tuple(cur), tuple(x0)


def _permutation_columns(sigma: list[int]) -> Mat:
    # Column a of the returned matrix is e_{sigma[a]}; used as a map matrix it
    # renames coordinate a of the new system to coordinate sigma[a] of the old.
    n = len(sigma)
    return tuple(tuple(1 if sigma[a] == j else 0 for a in range(n)) for j in range(n))


def _apply_symmetric_permutation(cur, total, row_src, sigma):
    n = cur.n
    step = AffineUnimodularMap(_permutation_columns(sigma), (0,) * n)
    moved = apply_map(cur, step)
    rows = [moved.A[sigma[a]] for a in range(n)] + [moved.A[n]]
    rhs = [moved.b[sigma[a]] for a in range(n)] + [moved.b[n]]
    src = [row_src[sigma[a]] for a in range(n)] + [row_src[n]]
    return (
        InequalitySystem(n, matrix(rows), vector(rhs)),
        compose(total, step),
        src,
    )


def _normalize_primitive(prim: InequalitySystem, base: tuple[int, ...], delta: int):
    """Normalization pipeline for a primitive system and a maximal base.

    Trusted entry point: the caller guarantees `prim` is primitive, defines a
    simplex, and that |det| on `base` equals `delta`.
    """
    n = prim.n
    omitted = next(i for i in range(n + 1) if i not in base)
    order = list(base) + [omitted]
    cur = InequalitySystem(
        n,
        matrix(prim.A[i] for i in order),
        vector(prim.b[i] for i in order),
    )
    row_src = list(order)
    total = identity_map(n)

    # Base block to Hermite form; the omitted row rides along.
    h_full, q = hnf(matrix(cur.A[:n]))
    step = AffineUnimodularMap(unimodular_inverse(q), (0,) * n)
    cur = apply_map(cur, step)
    total = compose(total, step)

    # Gather unit-diagonal coordinates in front, keeping the relative order
    # of the non-unit rows so the T block stays lower triangular.
    diag = [cur.A[i][i] for i in range(n)]
    s = sum(1 for d in diag if d == 1)
    k = n - s
    sigma = [i for i in range(n) if diag[i] == 1] + [i for i in range(n) if diag[i] != 1]
    if sigma != list(range(n)):
        cur, total, row_src = _apply_symmetric_permutation(cur, total, row_src, sigma)

    # Canonical tie-break inside the identity block.
    if s > 1:
        def pair(j: int):
            return (tuple(cur.A[s + t][j] for t in range(k)), cur.A[n][j])

        sigma2 = sorted(range(s), key=pair) + list(range(s, n))
        if sigma2 != list(range(n)):
            cur, total, row_src = _apply_symmetric_permutation(cur, total, row_src, sigma2)

    # Right-hand-side reduction by the unique integer translation.
    _, x0 = reduce_rhs(matrix(cur.A[:n]), cur.b[:n])
    if any(x0):
        step = AffineUnimodularMap(identity(n), x0)
        cur = apply_map(cur, step)
        total = compose(total, step)

    ns = NormalizedSystem(
        n=n,
        s=s,
        k=k,
        H=matrix(cur.A[:n]),
        h=tuple(cur.b[:n]),
        c=tuple(cur.A[n]),
        c0=cur.b[n],
        delta=delta,
    )
    ok, violated = validate_normalized(ns)
    if not ok:
        raise InvariantViolation(f"normalization produced an invalid system: {violated}")
    return ns, total, tuple(row_src)


def normalize(sys: InequalitySystem, base) -> tuple[NormalizedSystem, AffineUnimodularMap, tuple[int, ...]]:
    """Normalize a simplex system over a base of maximal |det|.

    The pipeline primitivizes the rows, brings the base block to Hermite
    form, gathers the unit rows in front, applies the (B column, c entry)
    tie-break, and reduces the right-hand side. Row scaling is quotiented
    out first, so base maximality refers to the primitive representation.

    Returns:
        (ns, map, row_perm) where `map` carries the normalized simplex onto
        the input simplex: apply_map(sys, map) equals the normalized system
        up to the row permutation `row_perm` and per-row primitivization
        (row i of the output came from input row row_perm[i]).
    """
    prim = primitivize(sys)
    meta = validate_simplex(prim)
    base = tuple(sorted(int(i) for i in base))
    if len(base) != sys.n or len(set(base)) != sys.n or not all(0 <= i <= sys.n for i in base):
        raise PreconditionError(f"base must be {sys.n} distinct row indices in 0..{sys.n}")
    if base not in meta.max_det_bases:
        raise PreconditionError(
            f"base {base} does not attain the maximal minor; valid bases: {meta.max_det_bases}"
        )
    return _normalize_primitive(prim, base, meta.delta)


def validate_normalized(ns: NormalizedSystem) -> tuple[bool, tuple[str, ...]]:
    """Check all normalized-form conditions plus the canonical tie-break.

    Returns (ok, violated) where `violated` lists diagnostic labels. Delta
    of the full (n+1) x n matrix is recomputed and must equal det(H).
    """
    bad = []
    n, s, k = ns.n, ns.s, ns.k
    h_mat, h, c = ns.H, ns.h, ns.c

    if not is_hnf_matrix(h_mat):
        bad.append("hnf-form")
    if ns.delta <= 0 or det(h_mat) != ns.delta:
        bad.append("determinant")
    full = ns.full_matrix()
    if delta_value(full) != ns.delta:
        bad.append("delta-of-full-matrix")

    for i in range(s):
        if any(h_mat[i][j] != (1 if j == i else 0) for j in range(n)):
            bad.append("identity-block")
            break
    if any(h_mat[s + i][s + i] < 2 for i in range(k)):
        bad.append("t-diagonal")
    if 2**k > ns.delta:
        bad.append("k-bound")
    cols = [tuple(h_mat[s + i][j] for i in range(k)) for j in range(s)]
    if any(cols[j] > cols[j + 1] for j in range(s - 1)):
        bad.append("b-columns-sorted")
    pairs = [(cols[j], c[j]) for j in range(s)]
    if any(pairs[j] > pairs[j + 1] for j in range(s - 1)):
        bad.append("tie-break")

    if any(not 0 <= h[i] < h_mat[i][i] for i in range(n)):
        bad.append("rhs-range")

    rhs = ns.full_rhs()
    for row, b0 in zip(full, rhs):
        g = 0
        for x in row:
            g = math.gcd(g, x)
        if math.gcd(g, b0) != 1:
            bad.append("row-gcd")
            break

    adj_t = transpose(adjugate(h_mat))
    w = tuple(-sum(adj_t[i][j] * c[j] for j in range(n)) for i in range(n))
    if any(not 0 < wi <= ns.delta for wi in w):
        bad.append("paral-membership")

    if any(abs(x) > ns.delta for row in full for x in row):
        bad.append("entry-bound")

    return (not bad, tuple(bad))


def key_tuple(ns: NormalizedSystem) -> tuple[int, ...]:
    """Flattened integer sequence used as the total order on canonical forms."""
    flat = []
    for row, b0 in zip(ns.full_matrix(), ns.full_rhs()):
        flat.extend(row)
        flat.append(b0)
    return (ns.n, ns.delta, *flat)


def canonical_key(ns: NormalizedSystem) -> str:
    """Injective text key: n, delta, then the flattened (A | b) entries."""
    t = key_tuple(ns)
    return f"{t[0]}:{t[1]}:" + ",".join(str(x) for x in t[2:])


def parse_canonical_key(key: str) -> NormalizedSystem:
    """Rebuild the exact normalized system encoded by a canonical key."""
    n_text, delta_text, entries_text = key.split(":")
    n = int(n_text)
    delta = int(delta_text)
    flat = [int(x) for x in entries_text.split(",")]
    if len(flat) != (n + 1) * (n + 1):
        raise PreconditionError("canonical key has the wrong number of entries")
    rows = [flat[i * (n + 1) : (i + 1) * (n + 1)] for i in range(n + 1)]
    h_mat = matrix(row[:n] for row in rows[:n])
    s = sum(1 for i in range(n) if h_mat[i][i] == 1)
    return NormalizedSystem(
        n=n,
        s=s,
        k=n - s,
        H=h_mat,
        h=tuple(row[n] for row in rows[:n]),
        c=tuple(rows[n][:n]),
        c0=rows[n][n],
        delta=delta,
    )


def normalized_to_dict(ns: NormalizedSystem) -> dict:
    return {
        "format": NORMALIZED_FORMAT,
        "n": ns.n,
        "s": ns.s,
        "k": ns.k,
        "delta": ns.delta,
        "H": [list(row) for row in ns.H],
        "h": list(ns.h),
        "c": list(ns.c),
        "c0": ns.c0,
    }


def normalized_from_dict(data: dict) -> NormalizedSystem:
    if data.get("format") != NORMALIZED_FORMAT:
        raise PreconditionError(f"expected format {NORMALIZED_FORMAT!r}, got {data.get('format')!r}")
    return NormalizedSystem(
        n=int(data["n"]),
        s=int(data["s"]),
        k=int(data["k"]),
        H=matrix(data["H"]),
        h=vector(data["h"]),
        c=vector(data["c"]),
        c0=int(data["c0"]),
        delta=int(data["delta"]),
    )


def opposite_vertex(ns: NormalizedSystem):
    """The vertex opposite the c-row facet, v = H^-1 h, as exact rationals."""
    return solve_rational(ns.H, ns.h)
