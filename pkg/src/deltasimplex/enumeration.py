"""Generation of all normalized candidates for the two simplex families.

The generator walks divisor tuples -> lower-triangular blocks T -> sorted
column multisets B -> reduced right-hand sides h -> parallelepiped vectors c
-> admissible c0 values, and emits verified normalized systems tagged
"empty" (no integer points at all) or "lattice_empty" (integer vertices and
no other integer points). The stream may contain unimodular-equivalent
duplicates; removing those is the equivalence module's job.

Candidates whose system has a row with gcd > 1 are skipped rather than
repaired: the class they describe is produced by the run with its true,
smaller delta.
"""

from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction

from .corner_ilp import (
    corner_minimum,
    corner_minimum_excluding_vertex,
    count_minimum_attainers,
)
from .errors import NotASimplexError, PreconditionError
from .exact_linalg import Mat, Vec, matrix, solve_rational
from .normal_form import NormalizedSystem, validate_normalized
from .simplex_model import count_integer_points_bruteforce, validate_simplex

logger = logging.getLogger(__name__)

FAMILY_EMPTY = "empty"
FAMILY_LATTICE = "lattice_empty"

# Above this dimension the lattice-family emptiness check switches from the
# point-count oracle to counting optimal-facet points in the group solver.
LATTICE_ORACLE_MAX_DIM = 6


@dataclass(frozen=True)
class HnfBlock:
    """One enumerated block matrix H = [[I_s, 0], [B, T]] with provenance indices."""

    s: int
    k: int
    diag: Vec
    T: Mat
    B: Mat
    H: Mat
    tuple_index: int
    t_index: int
    b_index: int


@dataclass(frozen=True)
class CandidateRecord:
    ns: NormalizedSystem
    family: str
    provenance: dict = field(compare=False)

    def system(self):
        return self.ns.system()


@dataclass(frozen=True)
class EmptyRange:
    """Admissible c0 interval [l_star, f_star - 1] for the non-lattice case."""

    l_star: int
    f_star: int

    def c0_values(self):
        return range(self.l_star, self.f_star)


@dataclass(frozen=True)
class LatticeCandidate:
    """The single interesting c0 = f_star of the lattice-vertex case."""

    f_star: int


def divisor_tuples(delta: int) -> tuple[Vec, ...]:
    """All ordered tuples of integers >= 2 with product `delta`.

    The empty tuple is included exactly when delta == 1. Tuples come out in
    depth-first order with divisors ascending at each level.
    """
    if delta < 1:
        raise PreconditionError("delta must be a positive integer")
    out: list[Vec] = []

    def descend(prefix: list[int], remaining: int) -> None:
        if remaining == 1:
            out.append(tuple(prefix))
            return
        for d in range(2, remaining + 1):
            if remaining % d == 0:
                prefix.append(d)
                descend(prefix, remaining // d)
                prefix.pop()

    descend([], delta)
    return tuple(out)


def _lower_triangular_fill(diag: Vec):
    """All lower-triangular matrices with the given diagonal, entries reduced row-wise."""
    k = len(diag)
    positions = [(i, j) for i in range(k) for j in range(i)]
    for values in itertools.product(*(range(diag[i]) for i, _ in positions)):
        t = [[0] * k for _ in range(k)]
        for i in range(k):
            t[i][i] = diag[i]
        for (i, j), val in zip(positions, values):
            t[i][j] = val
        yield matrix(t)


def _assemble_block(s: int, k: int, b: Mat, t: Mat) -> Mat:
    n = s + k
    rows = [tuple(1 if j == i else 0 for j in range(n)) for i in range(s)]
    for i in range(k):
        rows.append(tuple(b[i]) + tuple(t[i]))
    return matrix(rows)


def enumerate_H(delta: int, n: int):
    """Yield every block Hermite matrix with determinant `delta` in dimension `n`.

    For each divisor tuple (the diagonal of T) this enumerates every reduced
    lower-triangular T and every B whose columns are drawn from the box
    {0 <= x_i < T_ii} and sorted ascending, i.e. the column multisets.
    """
    if n < 1:
        raise PreconditionError("dimension must be at least 1")
    for tuple_index, diag in enumerate(divisor_tuples(delta)):
        k = len(diag)
        if k > n:
            continue
        s = n - k
        box = tuple(itertools.product(*(range(d) for d in diag)))
        for t_index, t in enumerate(_lower_triangular_fill(diag)):
            for b_index, cols in enumerate(itertools.combinations_with_replacement(box, s)):
                b = matrix(tuple(col[i] for col in cols) for i in range(k))
                yield HnfBlock(
                    s=s,
                    k=k,
                    diag=diag,
                    T=t,
                    B=b,
                    H=_assemble_block(s, k, b, t),
                    tuple_index=tuple_index,
                    t_index=t_index,
                    b_index=b_index,
                )


def enumerate_h(h_mat: Mat) -> tuple[Vec, ...]:
    """All reduced right-hand sides 0 <= h_i < H_ii; exactly det(H) of them."""
    n = len(h_mat)
    return tuple(itertools.product(*(range(h_mat[i][i]) for i in range(n))))


def enumerate_c(h_mat: Mat) -> tuple[Vec, ...]:
    """All integer c with -H^-T c in the half-open box (0, 1]^n.

    Back-substitution over the upper-triangular H^T, from the last
    coordinate upward: at each level the partial solution pins c_i to an
    interval of length H_ii, so exactly det(H) vectors come out.
    """
    n = len(h_mat)
    out: list[Vec] = []
    t_vals: list[Fraction | None] = [None] * n
    c_vals = [0] * n

    def descend(i: int) -> None:
        if i < 0:
            out.append(tuple(c_vals))
            return
        shift = sum(h_mat[j][i] * t_vals[j] for j in range(i + 1, n))
        # c_i ranges over the integers in [-shift - H_ii, -shift).
        low = -shift - h_mat[i][i]
        first = math.ceil(low)
        last = math.ceil(-shift) - 1
        for ci in range(first, last + 1):
            t_vals[i] = Fraction(-ci - shift, h_mat[i][i])
            c_vals[i] = ci
            descend(i - 1)
        t_vals[i] = None

    descend(n - 1)
    return tuple(out)


def c0_candidates(h_mat: Mat, h, c):
    """Classify the admissible c0 values for a fixed (H, h, c) triple.

    If the opposite vertex v = H^-1 h is fractional, every c0 in
    [l_star, f_star - 1] gives an empty simplex, where l_star is the least
    integer strictly above c^T v and f_star the cone minimum; the range may
    be empty. If v is integral (equivalently h = 0, since h is reduced),
    only c0 = f_star of the vertex-excluding problem can give an empty
    lattice simplex.
    """
    n = len(h_mat)
    if any(not 0 <= h[i] < h_mat[i][i] for i in range(n)):
        raise PreconditionError("right-hand side must be reduced (0 <= h_i < H_ii)")
    v = solve_rational(h_mat, h)
    if all(x.denominator == 1 for x in v):
        return LatticeCandidate(corner_minimum_excluding_vertex(h_mat, c).f_star)
    cv = sum(ci * vi for ci, vi in zip(c, v))
    l_star = cv + 1 if cv.denominator == 1 else math.ceil(cv)
    f_star = corner_minimum(h_mat, h, c).f_star
    return EmptyRange(l_star=int(l_star), f_star=f_star)


def _row_gcds(h_mat: Mat) -> list[int]:
    out = []
    for row in h_mat:
        g = 0
        for x in row:
            g = math.gcd(g, x)
        out.append(g)
    return out


def _gcd_with(g: int, value: int) -> int:
    return math.gcd(g, value)


def _vertices_integral(meta) -> bool:
    return all(x.denominator == 1 for v in meta.vertices for x in v)


def candidates_for_block(block: HnfBlock, want_empty: bool, want_lattice: bool):
    """All verified candidate records generated by one H block."""
    h_mat = block.H
    n = block.s + block.k
    delta = 1
    for d in block.diag:
        delta *= d
    empties: list[CandidateRecord] = []
    lattices: list[CandidateRecord] = []
    row_gcds = _row_gcds(h_mat)
    c_list = enumerate_c(h_mat)
    for h_index, h in enumerate(enumerate_h(h_mat)):
        if any(_gcd_with(row_gcds[i], h[i]) > 1 for i in range(n)):
            logger.debug("skip (H|h) gcd violation: diag=%s h=%s", block.diag, h)
            continue
        for c_index, c in enumerate(c_list):
            decision = c0_candidates(h_mat, h, c)
            if isinstance(decision, LatticeCandidate):
                if not want_lattice:
                    continue
                record = _build_lattice_record(block, delta, h_index, h, c_index, c, decision.f_star)
                if record is not None:
                    lattices.append(record)
            else:
                if not want_empty:
                    continue
                for c0 in decision.c0_values():
                    record = _build_empty_record(block, delta, h_index, h, c_index, c, c0, decision)
                    if record is not None:
                        empties.append(record)
    return empties, lattices


def _provenance(block: HnfBlock, delta: int, h_index: int, c_index: int, c0: int) -> dict:
    return {
        "delta": delta,
        "diag": list(block.diag),
        "tuple_index": block.tuple_index,
        "t_index": block.t_index,
        "b_index": block.b_index,
        "h_index": h_index,
        "c_index": c_index,
        "c0": c0,
    }


def _build_normalized(block: HnfBlock, delta: int, h, c, c0: int) -> NormalizedSystem | None:
    ns = NormalizedSystem(
        n=block.s + block.k,
        s=block.s,
        k=block.k,
        H=block.H,
        h=tuple(h),
        c=tuple(c),
        c0=c0,
        delta=delta,
    )
    ok, violated = validate_normalized(ns)
    if not ok:
        logger.debug("skip invalid candidate %s: %s", (block.diag, h, c, c0), violated)
        return None
    return ns


def _build_empty_record(block, delta, h_index, h, c_index, c, c0, decision) -> CandidateRecord | None:
    g = 0
    for x in c:
        g = math.gcd(g, x)
    if math.gcd(g, c0) > 1:
        logger.debug("skip (c|c0) gcd violation: c=%s c0=%s", c, c0)
        return None
    if decision.f_star <= c0:
        raise AssertionError("c0 range produced a non-empty simplex")
    ns = _build_normalized(block, delta, h, c, c0)
    if ns is None:
        return None
    try:
        validate_simplex(ns.system())
    except NotASimplexError:
        logger.debug("skip degenerate empty candidate: %s", (block.diag, h, c, c0))
        return None
    return CandidateRecord(ns, FAMILY_EMPTY, _provenance(block, delta, h_index, c_index, c0))


def _build_lattice_record(block, delta, h_index, h, c_index, c, f_star) -> CandidateRecord | None:
    g = 0
    for x in c:
        g = math.gcd(g, x)
    if math.gcd(g, f_star) > 1:
        logger.debug("skip lattice (c|c0) gcd violation: c=%s c0=%s", c, f_star)
        return None
    ns = _build_normalized(block, delta, h, c, f_star)
    if ns is None:
        return None
    sys = ns.system()
    try:
        meta = validate_simplex(sys)
    except NotASimplexError:
        logger.debug("skip degenerate lattice candidate: %s", (block.diag, h, c, f_star))
        return None
    n = ns.n
    if not _vertices_integral(meta):
        logger.debug("skip lattice candidate with fractional vertex: %s", (block.diag, c))
        return None
    # Integer vertices alone do not rule out extra integer points on the
    # optimal facet, so emptiness is verified before the record is kept.
    if n <= LATTICE_ORACLE_MAX_DIM:
        if count_integer_points_bruteforce(sys) != n + 1:
            logger.debug("skip non-empty lattice candidate: %s", (block.diag, c))
            return None
    else:
        if count_minimum_attainers(block.H, c, f_star) != n:
            logger.debug("skip non-empty lattice candidate (facet count): %s", (block.diag, c))
            return None
    return CandidateRecord(ns, FAMILY_LATTICE, _provenance(block, delta, h_index, c_index, f_star))


def enumerate_families(delta: int, n: int, want_empty: bool = True, want_lattice: bool = True):
    """Full candidate streams (empty family, lattice family) for (delta, n).

    Iteration order is fixed everywhere, so two runs produce identical
    streams. Records still need deduplication by unimodular equivalence.
    """
    empties: list[CandidateRecord] = []
    lattices: list[CandidateRecord] = []
    for block in enumerate_H(delta, n):
        e, l = candidates_for_block(block, want_empty, want_lattice)
        empties.extend(e)
        lattices.extend(l)
    return empties, lattices
