"""Unimodular equivalence: equivalent-set generation, decision, and dedup.

Two simplices are unimodular equivalent iff they share a normalized system,
so the decision reduces to set membership: generate every canonical
normalized system of one simplex and look the other one up by key. Thanks
to the (B column, c entry) tie-break of the canonical form, permutations of
identity-block rows never produce new forms, and the generator only has to
enumerate the C(n, k) * k! placements and orders of the non-unit rows per
maximal base.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .enumeration import CandidateRecord
from .errors import InvariantViolation
from .exact_linalg import Mat, matrix, vector
from .normal_form import _normalize_primitive, key_tuple, primitivize
from .simplex_model import (
    AffineUnimodularMap,
    InequalitySystem,
    compose,
    inverse,
    validate_simplex,
)


def reduced_permutations(h_mat: Mat):
    """Row permutations of a block Hermite matrix that can matter.

    Every placement of the k non-unit rows into n positions, crossed with
    every ordering of those k rows; identity-block rows fill the remaining
    positions in canonical order. Permutations that only move identity-block
    rows are redundant under the canonical tie-break and are never emitted.
    """
    n = len(h_mat)
    diag = [h_mat[i][i] for i in range(n)]
    s = sum(1 for d in diag if d == 1)
    if any(diag[i] != 1 for i in range(s)):
        raise InvariantViolation("matrix is not in gathered block form")
    k = n - s
    if k == 0:
        yield tuple(range(n))
        return
    t_rows = list(range(s, n))
    i_rows = list(range(s))
    for positions in itertools.combinations(range(n), k):
        for order in itertools.permutations(t_rows):
            perm: list[int | None] = [None] * n
            for pos, row in zip(positions, order):
                perm[pos] = row
            fill = iter(i_rows)
            for a in range(n):
                if perm[a] is None:
                    perm[a] = next(fill)
            yield tuple(perm)


@dataclass(frozen=True, eq=False)
class EquivalentSet:
    """Every canonical normalized system equivalent to `source`.

    `records` maps the canonical key tuple to (normalized system, map); each
    stored map carries the source simplex onto the record's simplex.
    """

    source: InequalitySystem
    records: dict


def equivalent_normalized_set(sys: InequalitySystem) -> EquivalentSet:
    """Generate all canonical normalized systems of the simplex's class.

    For each base of maximal |det| the system is normalized once, and every
    reduced row permutation of the resulting block matrix is renormalized
    over the base 0..n-1. Completeness rests on the fact that any normalized
    system of the class arises from a row-permuted renormalization over some
    maximal base, quotiented by the canonical tie-break.
    """
    prim = primitivize(sys)
    meta = validate_simplex(prim)
    n = prim.n
    out: dict = {}
    for base in meta.max_det_bases:
        ns0, m0, _ = _normalize_primitive(prim, base, meta.delta)
        for perm in reduced_permutations(ns0.H):
            rows = [ns0.H[p] for p in perm] + [ns0.c]
            rhs = [ns0.h[p] for p in perm] + [ns0.c0]
            permuted = InequalitySystem(n, matrix(rows), vector(rhs))
            ns1, m1, _ = _normalize_primitive(permuted, tuple(range(n)), meta.delta)
            key = key_tuple(ns1)
            if key not in out:
                # m0 and m1 both point record -> source; store source -> record.
                out[key] = (ns1, inverse(compose(m0, m1)))
    return EquivalentSet(source=sys, records=out)


@dataclass(frozen=True)
class EquivalenceResult:
    equivalent: bool
    witness: AffineUnimodularMap | None = None
    certificate: str | None = None


def _minor_multiset(meta, sys) -> tuple[int, ...]:
    from .exact_linalg import max_minors

    return tuple(sorted(abs(m) for _, m in max_minors(sys.A)))


def check_equivalence(sys_s: InequalitySystem, sys_t: InequalitySystem) -> EquivalenceResult:
    """Decide unimodular equivalence of two simplices, with a verified witness.

    Cheap invariants (dimension, delta, the multiset of |maximal minors|)
    reject most non-equivalent pairs outright. Otherwise the second simplex
    is normalized once and looked up in the first simplex's equivalent set;
    on a hit the witness map carries the first simplex onto the second and
    is verified on the vertex sets before being returned.
    """
    prim_s = primitivize(sys_s)
    prim_t = primitivize(sys_t)
    meta_s = validate_simplex(prim_s)
    meta_t = validate_simplex(prim_t)
    if prim_s.n != prim_t.n:
        return EquivalenceResult(False, certificate="dimension-mismatch")
    if meta_s.delta != meta_t.delta:
        return EquivalenceResult(False, certificate="delta-mismatch")
    if _minor_multiset(meta_s, prim_s) != _minor_multiset(meta_t, prim_t):
        return EquivalenceResult(False, certificate="minor-multiset-mismatch")

    ns_t, m_t, _ = _normalize_primitive(prim_t, min(meta_t.max_det_bases), meta_t.delta)
    stored_t = inverse(m_t)  # T -> record

    # Fast path: if the least-base normalizations already coincide, the two
    # direct maps compose to a witness (the identity when S and T are equal).
    ns_s, m_s, _ = _normalize_primitive(prim_s, min(meta_s.max_det_bases), meta_s.delta)
    if key_tuple(ns_s) == key_tuple(ns_t):
        stored_s = inverse(m_s)
    else:
        hit = equivalent_normalized_set(prim_s).records.get(key_tuple(ns_t))
        if hit is None:
            return EquivalenceResult(False, certificate="search-exhausted")
        _, stored_s = hit  # S -> record
    witness = compose(inverse(stored_t), stored_s)  # S -> record -> T
    image = frozenset(witness.apply(v) for v in meta_s.vertices)
    if image != frozenset(meta_t.vertices):
        raise InvariantViolation("equivalence witness failed vertex-set verification")
    return EquivalenceResult(True, witness=witness)


def dedup_families(records: list[CandidateRecord]) -> list[CandidateRecord]:
    """Collapse a candidate stream to one representative per equivalence class.

    Records are indexed by canonical key; walking the keys in ascending
    order, each still-present record generates its equivalent set and every
    other member found in the index is removed. The survivor of each class
    is therefore the record with the least canonical key present.
    """
    index: dict = {}
    for rec in records:
        index.setdefault(key_tuple(rec.ns), rec)
    for key in sorted(index):
        if key not in index:
            continue
        rec = index[key]
        eq = equivalent_normalized_set(rec.system())
        if key not in eq.records:
            raise InvariantViolation("record's own canonical form missing from its equivalent set")
        for other in eq.records:
            if other != key and other in index:
                del index[other]
    return [index[key] for key in sorted(index)]
