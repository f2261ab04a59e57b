from fractions import Fraction

from hypothesis import given, strategies as st

from gfcech import QQ, Echelon, Matrix, PrimeField
from gfcech.linalg import block_matrix, complement, kernel, rank, relative_rank, solve

from oracles import dense_rank

F7 = PrimeField(7)

small = st.integers(-3, 3)
shapes = st.tuples(st.integers(0, 6), st.integers(0, 6))


@st.composite
def matrices(draw, field=QQ):
    r, c = draw(shapes)
    rows = [[draw(small) for _ in range(c)] for _ in range(r)]
    return rows, Matrix.from_rows(field, rows) if r else Matrix.zero(field, 0, c)


def test_basic_shapes():
    I = Matrix.identity(QQ, 3)
    A = Matrix.from_rows(QQ, [[1, 2, 0], [0, 1, 1]])
    assert (A @ I) == A and A.shape == (2, 3)
    assert (A - A).is_zero() and A.rank() == 2
    assert A.to_rows() == [[1, 2, 0], [0, 1, 1]]
    assert A.apply({0: Fraction(1), 2: Fraction(1)}) == {0: 1, 1: 1}


def test_block_matrix():
    A = Matrix.from_rows(QQ, [[1]])
    B = Matrix.from_rows(QQ, [[2, 3]])
    M = block_matrix(QQ, [1, 1], [1, 2], {(0, 0): A, (1, 1): B})
    assert M.to_rows() == [[1, 0, 0], [0, 2, 3]]


@given(matrices())
def test_rank_matches_oracle(data):
    rows, M = data
    assert M.rank() == dense_rank([[Fraction(a) for a in r] for r in rows])


@given(matrices(F7))
def test_rank_mod_p_matches_oracle(data):
    rows, M = data
    assert M.rank() == dense_rank(rows, p=7)


@given(matrices())
def test_kernel_is_kernel(data):
    rows, M = data
    K = kernel(M)
    assert len(K) == M.ncols - M.rank()
    for v in K:
        assert not M.apply(v)
    assert rank(QQ, K) == len(K)


@given(matrices(), st.lists(small, min_size=6, max_size=6))
def test_solve(data, xs):
    rows, M = data
    x = {j: Fraction(xs[j]) for j in range(M.ncols) if xs[j]}
    b = M.apply(x)
    y = solve(M, b)
    assert y is not None and M.apply(y) == b


def test_solve_inconsistent():
    M = Matrix.from_rows(QQ, [[1, 1], [1, 1]])
    assert solve(M, {0: Fraction(1)}) is None


def test_echelon_and_relative_rank():
    E = Echelon(QQ)
    assert E.add({0: Fraction(1), 1: Fraction(1)})
    assert not E.add({0: Fraction(2), 1: Fraction(2)})
    assert E.contains({0: Fraction(-1), 1: Fraction(-1)})
    base = [{0: Fraction(1)}]
    vecs = [{0: Fraction(3)}, {1: Fraction(1)}, {0: Fraction(1), 1: Fraction(1)}]
    assert relative_rank(QQ, base, vecs) == 1
    assert complement(QQ, base, vecs) == [1]
