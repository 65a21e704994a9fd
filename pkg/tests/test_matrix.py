import itertools
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from wiretapnet.gf import FieldError, field_new
from wiretapnet.matrix import (DimensionError, Matrix, SingularMatrixError, column_subsets_full_rank,
                               hstack, invert, matmul, null_space, rank, right_inverse, row_space_intersection_trivial,
                               rref, solve, stack, vandermonde)

from conftest import random_invertible

FIELDS = [(2, 1), (3, 1), (2, 2), (5, 1), (7, 1), (2, 3), (3, 2)]


def span_size(m):
    """|rowspace| by enumerating every combination of rows."""
    f = m.field
    seen = set()
    for coeffs in itertools.product(list(f.elements()), repeat=m.rows):
        acc = [f.zero] * m.cols
        for c, i in zip(coeffs, range(m.rows)):
            acc = [a + c * x for a, x in zip(acc, m.row(i))]
        seen.add(tuple(a.code for a in acc))
    return len(seen)


def rank_oracle(m):
    return round(math.log(span_size(m), m.field.order)) if m.rows else 0


def det_oracle(m):
    """Leibniz expansion."""
    f = m.field
    n = m.rows
    total = f.zero
    for perm in itertools.permutations(range(n)):
        inversions = sum(perm[i] > perm[j] for i in range(n) for j in range(i + 1, n))
        term = f.one if inversions % 2 == 0 else -f.one
        for i, j in enumerate(perm):
            term = term * m[i, j]
        total = total + term
    return total


def matrices(max_rows=3, max_cols=3):
    @st.composite
    def build(draw):
        f = field_new(*draw(st.sampled_from(FIELDS)))
        r = draw(st.integers(0, max_rows))
        c = draw(st.integers(1, max_cols))
        data = draw(st.lists(st.integers(0, f.order - 1), min_size=r * c, max_size=r * c))
        return Matrix(f, np.array(data, dtype=np.int64).reshape(r, c))
    return build()


# --- worked examples ---

def test_rank_examples(gf3):
    assert rank(Matrix.from_rows(gf3, [[1, 1]])) == 1
    assert rank(Matrix.from_rows(gf3, [[1, 1], [1, 2]])) == 2
    assert rank(Matrix.from_rows(gf3, [[1, 1], [2, 2]])) == 1


def test_stack_examples(gf3):
    H = Matrix.from_rows(gf3, [[1, 1]])
    C = Matrix.from_rows(gf3, [[1, 2]])
    assert stack(H, C).tolist() == [[1, 1], [1, 2]]
    assert stack(H, Matrix.zeros(gf3, 0, 2)) == H
    with pytest.raises(DimensionError):
        stack(H, Matrix.from_rows(gf3, [[1, 2, 0]]))


def test_invert_examples(gf3):
    eye = Matrix.identity(gf3, 2)
    assert invert(eye) == eye
    a = Matrix.from_rows(gf3, [[1, 1], [1, 2]])
    inv = invert(a)
    assert inv.tolist() == [[2, 2], [2, 1]]
    # direct product: row i of a times column j of inv
    for i, j in itertools.product(range(2), repeat=2):
        s = sum(a.data[i, t] * inv.data[t, j] for t in range(2)) % 3
        assert s == (1 if i == j else 0)
    with pytest.raises(SingularMatrixError):
        invert(Matrix.from_rows(gf3, [[1, 1], [2, 2]]))


def test_solve_examples(gf3):
    eye = Matrix.identity(gf3, 2)
    assert solve(eye, [2, 1]).tolist() == [[2], [1]]
    a = Matrix.from_rows(gf3, [[1, 1], [1, 2]])
    x = [c[0] for c in solve(a, [0, 1]).tolist()]
    assert x == [2, 1]
    assert ((x[0] + x[1]) % 3, (x[0] + 2 * x[1]) % 3) == (0, 1)
    with pytest.raises(SingularMatrixError):
        solve(Matrix.from_rows(gf3, [[1, 1], [2, 2]]), [0, 1])


def test_intersection_examples(gf3):
    H = Matrix.from_rows(gf3, [[1, 1]])
    assert not row_space_intersection_trivial(H, Matrix.from_rows(gf3, [[1, 1]]))
    assert row_space_intersection_trivial(H, Matrix.from_rows(gf3, [[1, 2]]))
    assert row_space_intersection_trivial(H, Matrix.zeros(gf3, 0, 2))
    with pytest.raises(DimensionError):
        row_space_intersection_trivial(H, Matrix.zeros(gf3, 1, 3))


def test_vandermonde_examples():
    f = field_new(5)
    V = vandermonde(f, 2, [1, 2, 3])
    assert V.tolist() == [[1, 1, 1], [1, 2, 3]]
    for cols in itertools.combinations(range(3), 2):
        assert det_oracle(V.select_cols(cols)) != 0
    with pytest.raises(ValueError):
        vandermonde(f, 2, [1, 1])
    with pytest.raises(ValueError):
        vandermonde(f, 2, [0, 1])
    with pytest.raises(ValueError):
        vandermonde(f, 2, [1, 2, 3, 4, 0], allow_zero=False)
    assert vandermonde(f, 2, [0, 1], allow_zero=True).tolist() == [[1, 1], [0, 1]]


@pytest.mark.parametrize("p,m", [(3, 1), (5, 1), (7, 1), (2, 3), (3, 2)])
def test_vandermonde_every_subset_invertible(p, m):
    f = field_new(p, m)
    pts = [int(c) for c in f.exp][:8]
    d = len(pts)
    for n in range(1, d + 1):
        V = vandermonde(f, n, pts)
        for cols in itertools.combinations(range(d), n):
            sub = V.select_cols(cols)
            if n <= 3:
                assert det_oracle(sub) != 0
            else:
                assert rank(sub) == n
        assert column_subsets_full_rank(V)


def test_empty_and_shapes(gf3):
    e = Matrix.zeros(gf3, 0, 3)
    assert rank(e) == 0
    assert rref(e)[1] == []
    assert null_space(e) == Matrix.identity(gf3, 3)
    with pytest.raises(DimensionError):
        matmul(Matrix.identity(gf3, 2), Matrix.identity(gf3, 3))
    with pytest.raises(DimensionError):
        invert(Matrix.zeros(gf3, 2, 3))
    with pytest.raises(FieldError):
        Matrix(gf3, [[3]])
    with pytest.raises(FieldError):
        stack(Matrix.identity(gf3, 1), Matrix.identity(field_new(5), 1))
    with pytest.raises(DimensionError):
        Matrix.from_rows(gf3, [[1, 2], [1]])
    with pytest.raises(AttributeError):
        e.data = None
    with pytest.raises(ValueError):
        e.data[0:0] = 1  # read-only buffer


def test_extension_entries_round_trip():
    f = field_new(2, 2)
    m = Matrix.from_rows(f, [[(0, 1), (1, 1)], [(1, 0), (0, 0)]])
    assert m.tolist() == [[(0, 1), (1, 1)], [(1, 0), (0, 0)]]
    assert Matrix.from_rows(f, m.tolist()) == m


# --- properties ---

@given(matrices())
def test_rank_matches_span_oracle(m):
    assert rank(m) == rank_oracle(m)


@given(matrices(), st.data())
def test_stacked_rank_subadditive(a, data):
    rows = data.draw(st.integers(0, 3))
    vals = data.draw(st.lists(st.integers(0, a.field.order - 1), min_size=rows * a.cols, max_size=rows * a.cols))
    b = Matrix(a.field, np.array(vals, dtype=np.int64).reshape(rows, a.cols))
    r = rank(stack(a, b))
    assert max(rank(a), rank(b)) <= r <= rank(a) + rank(b)
    assert row_space_intersection_trivial(a, b) == (r == rank(a) + rank(b))


@given(st.sampled_from([(2, 1), (3, 1), (2, 2), (5, 1), (7, 1), (2, 3), (3, 2)]),
       st.integers(1, 5), st.integers(0, 2**32 - 1))
def test_inverse_property(pm, n, seed):
    f = field_new(*pm)
    a = random_invertible(f, n, np.random.default_rng(seed))
    eye = Matrix.identity(f, n)
    assert invert(a) @ a == eye
    assert a @ invert(a) == eye
    if n <= 3:
        assert det_oracle(a) != 0


@given(matrices(4, 5))
def test_rref_and_null_space(m):
    r, piv = rref(m)
    assert len(piv) == rank(m)
    assert rank(stack(r, m)) == rank(m)  # same row space
    for i, c in enumerate(piv):
        assert r.data[i, c] == 1
        assert all(r.data[j, c] == 0 for j in range(r.rows) if j != i)
    N = null_space(m)
    assert N.cols == m.cols - rank(m)
    assert rank(N.T) == N.cols
    if m.rows and N.cols:
        assert not np.any((m @ N).data)


@given(matrices(4, 5))
def test_right_inverse(m):
    if rank(m) != m.rows:
        if m.rows:
            with pytest.raises(SingularMatrixError):
                right_inverse(m)
        return
    A = right_inverse(m)
    assert A.shape == (m.cols, m.rows)
    if m.rows:
        assert m @ A == Matrix.identity(m.field, m.rows)


def test_hstack_and_select(gf3):
    a = Matrix.from_rows(gf3, [[1, 2], [0, 1]])
    b = Matrix.from_rows(gf3, [[2], [2]])
    h = hstack(a, b)
    assert h.tolist() == [[1, 2, 2], [0, 1, 2]]
    assert h.select_cols([2, 0]).tolist() == [[2, 1], [2, 0]]
    assert h.select_rows([]).shape == (0, 3)
    assert h.T.shape == (3, 2)
    assert hash(a) == hash(Matrix.from_rows(gf3, [[1, 2], [0, 1]]))
