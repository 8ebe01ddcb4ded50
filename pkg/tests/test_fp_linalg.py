import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from lfk.errors import MalformedInputError
from lfk.fp_linalg import (
    FpSubspace,
    FpVector,
    add_spaces,
    full_space,
    intersect,
    left_kernel,
    member,
    rref,
)


# ---------------------------------------------------------------- oracles

def span_enumerate(rows, p, n):
    """All vectors in the span, by brute force over coefficient tuples."""
    out = set()
    for coeffs in itertools.product(range(p), repeat=len(rows)):
        v = [0] * n
        for c, row in zip(coeffs, rows):
            v = [(a + c * b) % p for a, b in zip(v, row)]
        out.add(tuple(v))
    return out


def rank_by_elimination_oracle(rows, p):
    """Rank via an independent, destructive forward elimination."""
    rows = [list(r) for r in rows]
    rank = 0
    cols = len(rows[0]) if rows else 0
    for col in range(cols):
        piv = None
        for i in range(rank, len(rows)):
            if rows[i][col] % p:
                piv = i
                break
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        for i in range(rank + 1, len(rows)):
            if rows[i][col] % p:
                f = (rows[i][col] * pow(rows[rank][col], -1, p)) % p
                rows[i] = [(a - f * b) % p for a, b in zip(rows[i], rows[rank])]
        rank += 1
    return rank


# ---------------------------------------------------------------- rref

def test_rref_f2_three_rows_rank_two():
    # span{(1,1,0),(0,1,1),(1,0,1)} over F_2 has rank 2; oracle: enumerate it.
    rows = [(1, 1, 0), (0, 1, 1), (1, 0, 1)]
    sp = rref([FpVector(2, r) for r in rows])
    assert sp.dim() == 2
    assert sp.basis == ((1, 0, 1), (0, 1, 1))
    assert span_enumerate(rows, 2, 3) == span_enumerate(sp.basis, 2, 3)


def test_rref_empty_rows():
    sp = rref([], p=3, ambient_dim=4)
    assert sp.dim() == 0
    assert sp.ambient_dim == 4


def test_rref_duplicate_row():
    sp = rref([FpVector(2, (1, 0)), FpVector(2, (1, 0))])
    assert sp.dim() == 1
    assert sp.basis == ((1, 0),)


def test_rref_idempotent():
    rows = [FpVector(3, (1, 2, 0)), FpVector(3, (2, 1, 1)), FpVector(3, (0, 0, 2))]
    sp = rref(rows)
    again = rref(sp.vectors())
    assert sp == again


def test_rref_mixed_moduli_rejected():
    with pytest.raises(MalformedInputError):
        rref([FpVector(2, (1, 0)), FpVector(3, (1, 0))])
    with pytest.raises(MalformedInputError):
        rref([FpVector(2, (1, 0)), FpVector(2, (1, 0, 1))])


@settings(max_examples=60, deadline=None)
@given(
    p=st.sampled_from([2, 3, 5]),
    n=st.integers(min_value=1, max_value=6),
    data=st.data(),
)
def test_rref_rank_matches_elimination_oracle(p, n, data):
    nrows = data.draw(st.integers(min_value=0, max_value=6))
    rows = [
        data.draw(st.lists(st.integers(0, p - 1), min_size=n, max_size=n))
        for _ in range(nrows)
    ]
    sp = rref([FpVector(p, r) for r in rows], p=p, ambient_dim=n)
    assert sp.dim() == rank_by_elimination_oracle(rows, p)
    for r in rows:
        assert member(sp, FpVector(p, r))


# ---------------------------------------------------------------- member

def test_member_enumerated():
    sp = rref([FpVector(2, (1, 0, 1)), FpVector(2, (0, 1, 1))])
    inside = span_enumerate(sp.basis, 2, 3)
    for v in itertools.product(range(2), repeat=3):
        assert member(sp, FpVector(2, v)) == (v in inside)
    assert member(sp, FpVector(2, (1, 1, 0)))


def test_member_zero_vector_always_in():
    sp = rref([FpVector(5, (1, 2))])
    assert member(sp, FpVector(5, (0, 0)))


def test_member_pivot_mismatch():
    sp = rref([FpVector(2, (1, 0))])
    assert not member(sp, FpVector(2, (0, 1)))


def test_member_shape_check():
    sp = rref([FpVector(2, (1, 0))])
    with pytest.raises(MalformedInputError):
        member(sp, FpVector(2, (1, 0, 0)))


# ---------------------------------------------------------------- intersect

def test_intersect_distinct_lines_f2():
    a = rref([FpVector(2, (1, 0))])
    b = rref([FpVector(2, (0, 1))])
    assert intersect(a, b).dim() == 0


def test_intersect_absorption():
    a = rref([FpVector(3, (1, 0, 2))])
    b = rref([FpVector(3, (1, 0, 2)), FpVector(3, (0, 1, 1))])
    assert intersect(a, b) == a


def test_intersect_planes_in_f2_cubed():
    a = rref([FpVector(2, (1, 0, 0)), FpVector(2, (0, 1, 0))])
    b = rref([FpVector(2, (0, 1, 0)), FpVector(2, (0, 0, 1))])
    got = intersect(a, b)
    # oracle: enumerate both spans and intersect the sets
    want = span_enumerate(a.basis, 2, 3) & span_enumerate(b.basis, 2, 3)
    assert span_enumerate(got.basis, 2, 3) == want
    assert got.basis == ((0, 1, 0),)


@settings(max_examples=40, deadline=None)
@given(p=st.sampled_from([2, 3]), data=st.data())
def test_intersect_dimension_formula(p, data):
    n = data.draw(st.integers(min_value=1, max_value=5))
    def draw_space():
        k = data.draw(st.integers(min_value=0, max_value=n))
        rows = [
            data.draw(st.lists(st.integers(0, p - 1), min_size=n, max_size=n))
            for _ in range(k)
        ]
        return rref([FpVector(p, r) for r in rows], p=p, ambient_dim=n)
    a, b = draw_space(), draw_space()
    cap = intersect(a, b)
    cup = add_spaces(a, b)
    assert cap.dim() + cup.dim() == a.dim() + b.dim()
    for v in cap.vectors():
        assert member(a, v) and member(b, v)


# ---------------------------------------------------------------- left_kernel

def test_left_kernel_zero_table():
    full = full_space(2, 3)
    table = [[0, 0], [0, 0], [0, 0]]
    assert left_kernel(table, 2, full) == full


def test_left_kernel_identity_table_nondegenerate():
    full = full_space(2, 3)
    table = [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
    assert left_kernel(table, 2, full).dim() == 0


def test_left_kernel_single_column_is_hyperplane():
    # one nonzero column c: kernel = {v : v·c = 0}, oracle by enumeration
    c = (1, 1, 0)
    table = [[c[i]] for i in range(3)]
    got = left_kernel(table, 2, full_space(2, 3))
    want = {
        v
        for v in itertools.product(range(2), repeat=3)
        if sum(a * b for a, b in zip(v, c)) % 2 == 0
    }
    assert span_enumerate(got.basis, 2, 3) == want


def test_left_kernel_respects_restriction():
    # restrict to a plane, pair against a vector not vanishing on all of it
    plane = rref([FpVector(2, (1, 0, 0)), FpVector(2, (0, 1, 0))])
    table = [[1], [0], [1]]
    got = left_kernel(table, 2, plane)
    assert got.dim() == 1
    assert got.basis == ((0, 1, 0),)
    for v in got.vectors():
        assert member(plane, v)


def test_left_kernel_shape_check():
    with pytest.raises(MalformedInputError):
        left_kernel([[1], [0]], 2, full_space(2, 3))


def test_left_kernel_random_against_enumeration():
    rng = random.Random(7)
    for _ in range(30):
        p = rng.choice([2, 3])
        n = rng.randint(1, 4)
        m = rng.randint(1, 3)
        table = [[rng.randrange(p) for _ in range(m)] for _ in range(n)]
        got = left_kernel(table, p, full_space(p, n))
        want = {
            v
            for v in itertools.product(range(p), repeat=n)
            if all(sum(v[r] * table[r][c] for r in range(n)) % p == 0 for c in range(m))
        }
        assert span_enumerate(got.basis, p, n) == want


def test_solve_random_against_brute_force():
    from lfk.fp_linalg import solve

    rng = random.Random(11)
    for _ in range(60):
        p = rng.choice([2, 3, 5])
        n = rng.randint(1, 3)
        m = rng.randint(0, 3)
        cols = [FpVector(p, tuple(rng.randrange(p) for _ in range(n))) for _ in range(m)]
        target = FpVector(p, tuple(rng.randrange(p) for _ in range(n)))
        got = solve(cols, target)
        brute = None
        for x in itertools.product(range(p), repeat=m):
            acc = [0] * n
            for c, col in zip(x, cols):
                acc = [(a + c * b) % p for a, b in zip(acc, col.coords)]
            if tuple(acc) == target.coords:
                brute = x
                break
        if brute is None:
            assert got is None
        else:
            assert got is not None
            acc = [0] * n
            for c, col in zip(got, cols):
                acc = [(a + c * b) % p for a, b in zip(acc, col.coords)]
            assert tuple(a % p for a in acc) == target.coords


def test_solve_empty_columns():
    from lfk.fp_linalg import solve

    assert solve([], FpVector(3, (0, 0))) == ()
    assert solve([], FpVector(3, (1, 0))) is None
