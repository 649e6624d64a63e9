"""Shared test utilities: independent oracles and random instance generators.

The oracles here deliberately avoid the package's own algorithms: the
determinant oracle is plain cofactor expansion, rational solving is textbook
Gaussian elimination over Fractions, and the equivalence oracle is a bounded
exhaustive search over unimodular maps.
"""

from __future__ import annotations

import itertools
import random
from fractions import Fraction
from functools import lru_cache

from deltasimplex import (
    AffineUnimodularMap,
    InequalitySystem,
    NotASimplexError,
    validate_simplex,
)


def cofactor_det(m) -> int:
    n = len(m)
    if n == 0:
        return 1
    if n == 1:
        return m[0][0]
    total = 0
    for j in range(n):
        if m[0][j] == 0:
            continue
        minor = [row[:j] + row[j + 1 :] for row in [list(r) for r in m[1:]]]
        total += (-1) ** j * m[0][j] * cofactor_det(minor)
    return total


def gauss_inverse(m) -> list[list[Fraction]]:
    """Inverse over Fractions by Gauss-Jordan elimination; independent of the package."""
    n = len(m)
    aug = [[Fraction(m[i][j]) for j in range(n)] + [Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    for col in range(n):
        pivot = next(r for r in range(col, n) if aug[r][col] != 0)
        aug[col], aug[pivot] = aug[pivot], aug[col]
        inv = 1 / aug[col][col]
        aug[col] = [x * inv for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                factor = aug[r][col]
                aug[r] = [x - factor * y for x, y in zip(aug[r], aug[col])]
    return [row[n:] for row in aug]


def gauss_solve(m, b) -> tuple[Fraction, ...]:
    inv = gauss_inverse(m)
    n = len(m)
    return tuple(sum(inv[i][j] * b[j] for j in range(n)) for i in range(n))


def random_int_matrix(rng: random.Random, rows: int, cols: int, bound: int):
    return tuple(tuple(rng.randint(-bound, bound) for _ in range(cols)) for _ in range(rows))


def random_simplex(rng: random.Random, n: int, entry_bound: int = 6) -> InequalitySystem:
    """Rejection-sample a valid simplex system with bounded entries."""
    while True:
        a = random_int_matrix(rng, n + 1, n, entry_bound)
        b = tuple(rng.randint(-entry_bound, entry_bound) for _ in range(n + 1))
        try:
            sys = InequalitySystem(n, a, b)
            validate_simplex(sys)
            return sys
        except NotASimplexError:
            continue


def random_unimodular_map(rng: random.Random, n: int, entry_bound: int = 10, trans_bound: int = 10) -> AffineUnimodularMap:
    """Random product of elementary row operations, retried until entries fit."""
    while True:
        u = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
        for _ in range(3 * n):
            kind = rng.randrange(3)
            i = rng.randrange(n)
            j = rng.randrange(n)
            if kind == 0 and i != j:
                f = rng.choice([-1, 1])
                for col in range(n):
                    u[i][col] += f * u[j][col]
            elif kind == 1 and i != j:
                u[i], u[j] = u[j], u[i]
            elif kind == 2:
                u[i] = [-x for x in u[i]]
        if max(abs(x) for row in u for x in row) <= entry_bound:
            x0 = tuple(rng.randint(-trans_bound, trans_bound) for _ in range(n))
            return AffineUnimodularMap(tuple(tuple(row) for row in u), x0)


def random_hnf(rng: random.Random, n: int, delta_max: int):
    """Random Hermite-form matrix: random diagonal with product <= delta_max."""
    while True:
        diag = []
        prod = 1
        for _ in range(n):
            choices = [d for d in range(1, delta_max + 1) if prod * d <= delta_max]
            d = rng.choice(choices)
            diag.append(d)
            prod *= d
        if prod >= 1:
            break
    m = [[0] * n for _ in range(n)]
    for i in range(n):
        m[i][i] = diag[i]
        for j in range(i):
            m[i][j] = rng.randrange(diag[i])
    return tuple(tuple(row) for row in m)


@lru_cache(maxsize=None)
def unimodular_matrices(n: int, bound: int):
    """All integer n x n matrices with entries in [-bound, bound] and |det| = 1."""
    out = []
    for entries in itertools.product(range(-bound, bound + 1), repeat=n * n):
        m = tuple(tuple(entries[i * n : (i + 1) * n]) for i in range(n))
        if abs(cofactor_det(m)) == 1:
            out.append(m)
    return tuple(out)


def brute_force_equivalent(sys_a: InequalitySystem, sys_b: InequalitySystem, entry_bound: int = 3, trans_bound: int = 5):
    """Bounded exhaustive search for a unimodular map with map(A) == B.

    Decides existence of U with entries in [-entry_bound, entry_bound],
    |det U| = 1, and integral x0 in [-trans_bound, trans_bound]^n mapping
    the vertex set of A onto that of B. For each U only the translations
    aligning the first vertex of A with some vertex of B can work, so those
    n+1 candidates are tested instead of the whole translation box.
    """
    n = sys_a.n
    if sys_b.n != n:
        return None
    verts_a = tuple(validate_simplex(sys_a).vertices)
    verts_b = frozenset(validate_simplex(sys_b).vertices)
    v0 = verts_a[0]
    for u in unimodular_matrices(n, entry_bound):
        uv0 = tuple(sum(u[i][j] * v0[j] for j in range(n)) for i in range(n))
        for w in verts_b:
            x0 = tuple(w[i] - uv0[i] for i in range(n))
            if any(t.denominator != 1 for t in x0):
                continue
            if any(abs(t) > trans_bound for t in x0):
                continue
            image = frozenset(
                tuple(sum(u[i][j] * v[j] for j in range(n)) + x0[i] for i in range(n))
                for v in verts_a
            )
            if image == verts_b:
                return (u, tuple(int(t) for t in x0))
    return None
