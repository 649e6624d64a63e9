import random

import pytest

from deltasimplex import (
    EmptyRange,
    LatticeCandidate,
    PreconditionError,
    c0_candidates,
    count_integer_points_bruteforce,
    delta_value,
    divisor_tuples,
    enumerate_H,
    enumerate_c,
    enumerate_families,
    enumerate_h,
    hnf,
    identity,
    validate_normalized,
)
from deltasimplex.equivalence import dedup_families

from helpers import gauss_inverse, random_hnf


def test_divisor_tuples_one():
    assert divisor_tuples(1) == ((),)


def test_divisor_tuples_four():
    assert set(divisor_tuples(4)) == {(4,), (2, 2)}


def test_divisor_tuples_six():
    assert set(divisor_tuples(6)) == {(6,), (2, 3), (3, 2)}


def test_divisor_tuples_twelve():
    got = set(divisor_tuples(12))
    assert got == {(12,), (2, 6), (6, 2), (3, 4), (4, 3), (2, 2, 3), (2, 3, 2), (3, 2, 2)}


def test_divisor_tuples_invalid():
    with pytest.raises(PreconditionError):
        divisor_tuples(0)


def test_divisor_tuples_products():
    for delta in range(1, 31):
        for t in divisor_tuples(delta):
            prod = 1
            for d in t:
                prod *= d
            assert prod == delta
            assert all(d >= 2 for d in t)
            assert 2 ** len(t) <= max(delta, 1)


def test_enumerate_H_delta_one():
    blocks = list(enumerate_H(1, 3))
    assert len(blocks) == 1
    assert blocks[0].H == identity(3)


def test_enumerate_H_delta_two_dim_two():
    hs = [b.H for b in enumerate_H(2, 2)]
    assert hs == [((1, 0), (0, 2)), ((1, 0), (1, 2))]


def test_enumerate_H_delta_four_dim_two():
    hs = {b.H for b in enumerate_H(4, 2)}
    expected = {((1, 0), (b, 4)) for b in range(4)} | {((2, 0), (t, 2)) for t in range(2)}
    assert hs == expected
    assert len(list(enumerate_H(4, 2))) == 6


def test_enumerate_H_invariants():
    for delta in (1, 2, 3, 4, 6):
        for block in enumerate_H(delta, 3):
            h_full, q = hnf(block.H)
            assert h_full == block.H and q == identity(3)
            assert max(abs(x) for row in block.H for x in row) <= delta
            prod = 1
            for i in range(3):
                prod *= block.H[i][i]
            assert prod == delta


def test_enumerate_h_counts():
    assert enumerate_h(identity(3)) == ((0, 0, 0),)
    assert enumerate_h(((1, 0), (1, 2))) == ((0, 0), (0, 1))
    for delta in (2, 3, 4, 6):
        for block in enumerate_H(delta, 2):
            assert len(enumerate_h(block.H)) == delta


def test_enumerate_c_identity():
    assert enumerate_c(identity(3)) == ((-1, -1, -1),)


def test_enumerate_c_examples():
    assert set(enumerate_c(((2,),))) == {(-1,), (-2,)}
    assert set(enumerate_c(((1, 0), (1, 2)))) == {(-1, -1), (-2, -2)}


def _members_by_scan(h_mat, bound):
    """Independent membership scan over the c box via a Gauss-inverse check."""
    import itertools

    n = len(h_mat)
    inv_t = gauss_inverse([[h_mat[j][i] for j in range(n)] for i in range(n)])
    members = set()
    for c in itertools.product(range(-bound, bound + 1), repeat=n):
        t = [sum(inv_t[i][j] * (-c[j]) for j in range(n)) for i in range(n)]
        if all(0 < ti <= 1 for ti in t):
            members.add(c)
    return members


def test_enumerate_c_matches_full_scan():
    rng = random.Random(500)
    for _ in range(20):
        n = rng.randint(1, 2)
        h_mat = random_hnf(rng, n, 10)
        delta = 1
        for i in range(n):
            delta *= h_mat[i][i]
        got = enumerate_c(h_mat)
        assert len(got) == len(set(got)) == delta
        assert set(got) == _members_by_scan(h_mat, n * delta)


def test_c0_candidates_lattice():
    assert c0_candidates(identity(2), (0, 0), (-1, -1)) == LatticeCandidate(1)


def test_c0_candidates_empty_range():
    decision = c0_candidates(((1, 0), (1, 2)), (0, 1), (-1, -1))
    assert decision == EmptyRange(l_star=0, f_star=0)
    assert list(decision.c0_values()) == []


def test_c0_candidates_segment_cases():
    assert c0_candidates(((3,),), (1,), (-3,)) == EmptyRange(l_star=0, f_star=0)
    decision = c0_candidates(((3,),), (2,), (-3,))
    assert decision == EmptyRange(l_star=-1, f_star=0)
    assert list(decision.c0_values()) == [-1]


def test_families_delta_one():
    for n in (1, 2, 3, 4):
        empties, lattices = enumerate_families(1, n)
        assert empties == []
        assert len(lattices) == 1
        ns = lattices[0].ns
        assert ns.H == identity(n)
        assert ns.h == (0,) * n
        assert ns.c == (-1,) * n
        assert ns.c0 == 1


def test_families_delta_two_dim_two():
    empties, lattices = enumerate_families(2, 2)
    assert empties == [] and lattices == []


def test_families_delta_three_dim_one():
    empties, lattices = enumerate_families(3, 1)
    assert lattices == []
    assert len(empties) == 2
    survivors = dedup_families(empties)
    assert len(survivors) == 2


def test_family_records_validate():
    for delta, n in ((3, 2), (4, 2), (4, 3)):
        empties, lattices = enumerate_families(delta, n)
        for rec in empties + lattices:
            ok, violated = validate_normalized(rec.ns)
            assert ok, violated
            assert delta_value(rec.ns.full_matrix()) == delta
            assert rec.ns.delta == delta


def test_family_ground_truth_small():
    for delta, n in ((3, 2), (4, 2)):
        empties, lattices = enumerate_families(delta, n)
        for rec in empties:
            assert count_integer_points_bruteforce(rec.system()) == 0
        for rec in lattices:
            assert count_integer_points_bruteforce(rec.system()) == n + 1


def test_families_deterministic():
    a = enumerate_families(3, 3)
    b = enumerate_families(3, 3)
    assert [(r.ns, r.family, r.provenance) for r in a[0] + a[1]] == [
        (r.ns, r.family, r.provenance) for r in b[0] + b[1]
    ]


def test_family_flags():
    empties, lattices = enumerate_families(4, 3, want_lattice=False)
    assert lattices == [] and empties
    empties, lattices = enumerate_families(4, 3, want_empty=False)
    assert empties == [] and len(lattices) == 1


def test_c0_candidates_requires_reduced_rhs():
    with pytest.raises(PreconditionError):
        c0_candidates(((2,),), (5,), (-1,))


def test_lattice_verification_routes_agree():
    # The point-count oracle and the optimal-facet count must accept or
    # reject exactly the same lattice-branch candidates.
    from deltasimplex import (
        NormalizedSystem,
        corner_minimum_excluding_vertex,
        count_minimum_attainers,
        validate_simplex,
        validate_normalized,
    )
    from deltasimplex.errors import NotASimplexError

    checked = 0
    for delta in (2, 3, 4):
        for n in (2, 3, 4):
            for block in enumerate_H(delta, n):
                h = (0,) * n
                for c in enumerate_c(block.H):
                    f = corner_minimum_excluding_vertex(block.H, c).f_star
                    ns = NormalizedSystem(
                        n=n, s=block.s, k=block.k, H=block.H, h=h, c=c, c0=f, delta=delta
                    )
                    ok, _ = validate_normalized(ns)
                    if not ok:
                        continue
                    try:
                        meta = validate_simplex(ns.system())
                    except NotASimplexError:
                        continue
                    if any(x.denominator != 1 for v in meta.vertices for x in v):
                        continue
                    by_count = count_integer_points_bruteforce(ns.system()) == n + 1
                    by_facet = count_minimum_attainers(block.H, c, f) == n
                    assert by_count == by_facet
                    checked += 1
    assert checked >= 10
