"""Simplex systems, affine unimodular maps, and an exact point-count oracle.

A simplex is given by n+1 inequalities A x <= b in n variables. The module
validates that a system really defines a bounded full-dimensional simplex,
computes its vertices and maximal minors exactly, and applies unimodular
coordinate changes. The direction convention for `apply_map` is pinned
below and used consistently by the normalization pipeline.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

from .errors import NotASimplexError, PreconditionError, ScaleExceededError, ShapeError
from .exact_linalg import (
    FracVec,
    Mat,
    Vec,
    dot,
    is_unimodular,
    mat_mul,
    mat_vec,
    matrix,
    max_minors,
    solve_rational,
    unimodular_inverse,
    vector,
)

SYSTEM_FORMAT = "delta-simplex/system-v1"


@dataclass(frozen=True)
class InequalitySystem:
    """A candidate simplex {x : A x <= b} with A of shape (n+1) x n."""

    n: int
    A: Mat
    b: Vec

    def __post_init__(self):
        object.__setattr__(self, "A", tuple(tuple(row) for row in self.A))
        object.__setattr__(self, "b", tuple(self.b))
        if self.n < 1:
            raise ShapeError("dimension must be at least 1")
        if len(self.A) != self.n + 1 or any(len(row) != self.n for row in self.A):
            raise ShapeError(f"matrix must be {self.n + 1}x{self.n}")
        if len(self.b) != self.n + 1:
            raise ShapeError(f"right-hand side must have length {self.n + 1}")

    def rows(self):
        return tuple((self.A[i], self.b[i]) for i in range(self.n + 1))


@dataclass(frozen=True)
class AffineUnimodularMap:
    """The affine map x -> U x + x0 with U unimodular and x0 integral."""

    U: Mat
    x0: Vec

    def __post_init__(self):
        object.__setattr__(self, "U", tuple(tuple(row) for row in self.U))
        object.__setattr__(self, "x0", tuple(self.x0))
        if not is_unimodular(self.U):
            raise PreconditionError("map matrix is not unimodular")
        if len(self.x0) != len(self.U):
            raise ShapeError("translation length does not match matrix size")

    @property
    def n(self) -> int:
        return len(self.U)

    def apply(self, point) -> tuple:
        """Image of a point; works for integer and Fraction coordinates."""
        return tuple(
            sum(self.U[i][j] * point[j] for j in range(self.n)) + self.x0[i]
            for i in range(self.n)
        )


def identity_map(n: int) -> AffineUnimodularMap:
    from .exact_linalg import identity

    return AffineUnimodularMap(identity(n), (0,) * n)


def compose(m2: AffineUnimodularMap, m1: AffineUnimodularMap) -> AffineUnimodularMap:
    """compose(m2, m1)(x) == m2(m1(x))."""
    if m2.n != m1.n:
        raise ShapeError("cannot compose maps of different dimensions")
    return AffineUnimodularMap(mat_mul(m2.U, m1.U), tuple(a + b for a, b in zip(mat_vec(m2.U, m1.x0), m2.x0)))


def inverse(m: AffineUnimodularMap) -> AffineUnimodularMap:
    uinv = unimodular_inverse(m.U)
    return AffineUnimodularMap(uinv, tuple(-x for x in mat_vec(uinv, m.x0)))


def apply_map(sys: InequalitySystem, m: AffineUnimodularMap) -> InequalitySystem:
    """Preimage system of `sys` under `m`.

    x satisfies the returned system iff m(x) = U x + x0 satisfies `sys`;
    the output therefore defines the simplex m^-1(S). Algebraically the
    result is (A @ U, b - A @ x0).
    """
    if m.n != sys.n:
        raise ShapeError("map dimension does not match system dimension")
    return InequalitySystem(
        sys.n,
        mat_mul(sys.A, m.U),
        tuple(bi - ax for bi, ax in zip(sys.b, mat_vec(sys.A, m.x0))),
    )


@dataclass(frozen=True)
class SimplexMeta:
    """Validation summary: delta, vertices (vertex i is opposite row i), maximal bases."""

    delta: int
    vertices: tuple[FracVec, ...]
    max_det_bases: tuple[tuple[int, ...], ...]


def validate_simplex(sys: InequalitySystem) -> SimplexMeta:
    """Check that the system defines a bounded, full-dimensional simplex.

    Every maximal minor must be nonzero and each basic solution must satisfy
    its omitted inequality strictly; together these force exactly n+1
    distinct vertices and a bounded interior.

    Raises:
        NotASimplexError: on a degenerate minor or a tight/violated omitted row.
    """
    minors = max_minors(sys.A)
    for base, minor in minors:
        if minor == 0:
            raise NotASimplexError(f"not a simplex (rank/degeneracy): zero minor at base {base}")
    delta = max(abs(minor) for _, minor in minors)
    vertices = []
    for omit, (base, _) in enumerate(minors):
        sub = tuple(sys.A[i] for i in base)
        rhs = tuple(sys.b[i] for i in base)
        v = solve_rational(sub, rhs)
        slack = sys.b[omit] - sum(sys.A[omit][j] * v[j] for j in range(sys.n))
        if slack <= 0:
            raise NotASimplexError(
                f"empty or unbounded or lower-dimensional: row {omit} not strictly satisfied"
            )
        vertices.append(v)
    bases = tuple(base for base, minor in minors if abs(minor) == delta)
    return SimplexMeta(delta=delta, vertices=tuple(vertices), max_det_bases=bases)


def vertex_set(sys: InequalitySystem) -> frozenset[FracVec]:
    return frozenset(validate_simplex(sys).vertices)


def count_integer_points_bruteforce(sys: InequalitySystem, cap: int = 10_000_000) -> int:
    """Exact |S ∩ Z^n| by scanning the integer points of the bounding box.

    The box is derived from the exact rational vertices; if it holds more
    than `cap` candidate points the scan is refused.
    """
    meta = validate_simplex(sys)
    lo = []
    hi = []
    for j in range(sys.n):
        coords = [v[j] for v in meta.vertices]
        lo.append(math.ceil(min(coords)))
        hi.append(math.floor(max(coords)))
    total = 1
    for l, h in zip(lo, hi):
        total *= max(0, h - l + 1)
    if total > cap:
        raise ScaleExceededError(f"oracle scale exceeded: {total} candidates > cap {cap}")
    count = 0
    rows = sys.rows()
    for point in itertools.product(*(range(l, h + 1) for l, h in zip(lo, hi))):
        if all(dot(a, point) <= b0 for a, b0 in rows):
            count += 1
    return count


def system_to_dict(sys: InequalitySystem) -> dict:
    return {
        "format": SYSTEM_FORMAT,
        "n": sys.n,
        "A": [list(row) for row in sys.A],
        "b": list(sys.b),
    }


def system_from_dict(data: dict) -> InequalitySystem:
    if data.get("format") != SYSTEM_FORMAT:
        raise PreconditionError(f"expected format {SYSTEM_FORMAT!r}, got {data.get('format')!r}")
    return InequalitySystem(int(data["n"]), matrix(data["A"]), vector(data["b"]))
