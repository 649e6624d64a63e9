import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from deltasimplex import (
    RankError,
    ShapeError,
    SingularityError,
    adjugate,
    delta_value,
    det,
    hnf,
    identity,
    is_unimodular,
    matrix,
    max_minors,
    solve_rational,
    unimodular_inverse,
)
from deltasimplex.exact_linalg import mat_mul, shape, transpose
from fractions import Fraction

from helpers import cofactor_det, gauss_solve, random_int_matrix

small_matrices = st.integers(2, 4).flatmap(
    lambda n: st.lists(
        st.lists(st.integers(-9, 9), min_size=n, max_size=n), min_size=n, max_size=n
    )
)


def test_det_identity():
    assert det(identity(3)) == 1


def test_det_triangular():
    assert det(((1, 0), (1, 2))) == 2


def test_det_non_square_raises():
    with pytest.raises(ShapeError):
        det(((1, 2, 3), (4, 5, 6)))


def test_det_against_cofactor_oracle():
    rng = random.Random(101)
    for _ in range(30):
        m = random_int_matrix(rng, 5, 5, 9)
        assert det(m) == cofactor_det(m)


def test_det_cofactor_oracle_up_to_six():
    rng = random.Random(202)
    for n in range(1, 7):
        for _ in range(10):
            m = random_int_matrix(rng, n, n, 9)
            assert det(m) == cofactor_det(m)


def test_adjugate_identity():
    for n in (1, 2, 4):
        assert adjugate(identity(n)) == identity(n)


def test_adjugate_example():
    m = ((1, 0), (1, 2))
    adj = adjugate(m)
    assert adj == ((2, 0), (-1, 1))
    assert mat_mul(m, adj) == ((2, 0), (0, 2))


def test_adjugate_singular():
    m = ((1, 2), (2, 4))
    adj = adjugate(m)
    assert mat_mul(m, adj) == ((0, 0), (0, 0))


@given(small_matrices)
@settings(max_examples=60, deadline=None)
def test_adjugate_fundamental_identity(rows):
    m = matrix(rows)
    n = len(m)
    d = det(m)
    expected = tuple(tuple(d if i == j else 0 for j in range(n)) for i in range(n))
    assert mat_mul(m, adjugate(m)) == expected
    assert mat_mul(adjugate(m), m) == expected


def test_hnf_idempotent_on_hnf_input():
    h = ((2, 0), (1, 3))
    h_full, q = hnf(h)
    assert h_full == h
    assert q == identity(2)


def test_hnf_swap_example():
    a = ((0, 1), (1, 0))
    h_full, q = hnf(a)
    assert h_full == identity(2)
    assert q == ((0, 1), (1, 0))
    assert mat_mul(h_full, q) == a


def _random_full_rank(rng, m, n):
    while True:
        a = random_int_matrix(rng, m, n, 6)
        top = tuple(a[i] for i in range(n))
        if det(top) != 0:
            return a


def test_hnf_random_properties():
    rng = random.Random(7)
    for _ in range(40):
        n = rng.randint(1, 4)
        a = _random_full_rank(rng, n + 1, n)
        h_full, q = hnf(a)
        assert mat_mul(h_full, q) == a
        assert abs(det(q)) == 1
        top = tuple(h_full[i] for i in range(n))
        for i in range(n):
            assert top[i][i] > 0
            for j in range(n):
                if j > i:
                    assert top[i][j] == 0
                elif j < i:
                    assert 0 <= top[i][j] < top[i][i]
        # entry bound from the maximal-minor value of the input
        assert max(abs(x) for row in h_full for x in row) <= delta_value(a)
        # idempotence
        again, q2 = hnf(h_full)
        assert again == h_full
        assert q2 == identity(n)


def test_hnf_rank_deficient():
    with pytest.raises(RankError):
        hnf(((1, 2), (2, 4), (0, 1)))


def test_solve_rational_identity():
    assert solve_rational(identity(3), (4, -1, 7)) == (4, -1, 7)


def test_solve_rational_examples():
    assert solve_rational(((1, 0), (1, 2)), (0, 1)) == (0, Fraction(1, 2))
    assert solve_rational(((2,),), (1,)) == (Fraction(1, 2),)


def test_solve_rational_singular():
    with pytest.raises(SingularityError):
        solve_rational(((1, 2), (2, 4)), (1, 1))


def test_solve_rational_against_gauss_oracle():
    rng = random.Random(11)
    for _ in range(25):
        n = rng.randint(1, 4)
        while True:
            m = random_int_matrix(rng, n, n, 8)
            if det(m) != 0:
                break
        b = tuple(rng.randint(-8, 8) for _ in range(n))
        assert solve_rational(m, b) == gauss_solve(m, b)


def test_is_unimodular():
    assert is_unimodular(identity(4))
    assert is_unimodular(((1, 1), (0, 1)))
    assert not is_unimodular(((2, 0), (0, 1)))
    assert not is_unimodular(((1, 0, 0), (0, 1, 0)))


def test_unimodular_inverse_round_trip():
    u = ((2, 1), (1, 1))
    assert mat_mul(u, unimodular_inverse(u)) == identity(2)


def test_max_minors_triangle():
    minors = max_minors(((-1, 0), (0, -1), (1, 1)))
    assert sorted(abs(m) for _, m in minors) == [1, 1, 1]
    assert delta_value(((-1, 0), (0, -1), (1, 1))) == 1


def test_max_minors_segment():
    minors = max_minors(((3,), (-2,)))
    assert dict(minors) == {(1,): -2, (0,): 3}
    assert delta_value(((3,), (-2,))) == 3


def test_max_minors_duplicate_row():
    minors = dict(max_minors(((1, 2), (1, 2), (0, 1))))
    assert minors[(0, 1)] == 0


def test_max_minors_shape():
    with pytest.raises(ShapeError):
        max_minors(((1, 2), (3, 4)))


def test_transpose_shape():
    assert transpose(((1, 2, 3), (4, 5, 6))) == ((1, 4), (2, 5), (3, 6))
    assert shape(((1, 2),)) == (1, 2)
