import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from steenrod_excess import linalg
from steenrod_excess.sparse import DegreeMismatch, Tensor, koszul_sign, tensor_multiply


def matrices(p, max_rows=4, max_cols=4):
    return st.tuples(st.integers(1, max_rows), st.integers(1, max_cols)).flatmap(
        lambda shape: st.lists(st.integers(0, p - 1), min_size=shape[0] * shape[1], max_size=shape[0] * shape[1]).map(
            lambda xs: np.array(xs, dtype=np.int64).reshape(shape)))


def brute_kernel_size(m, p):
    cols = m.shape[1]
    return sum(1 for x in itertools.product(range(p), repeat=cols) if not np.any(m @ np.array(x) % p))


@pytest.mark.parametrize("p", [2, 3, 5])
@given(data=st.data())
def test_rank_nullity_against_brute_force(p, data):
    m = data.draw(matrices(p))
    r = linalg.rank(m, p)
    assert brute_kernel_size(m, p) == p ** (m.shape[1] - r)
    ns = linalg.nullspace(m, p)
    assert ns.shape[0] == m.shape[1] - r
    assert not np.any(m @ ns.T % p)


@pytest.mark.parametrize("p", [2, 3])
@given(data=st.data())
def test_rref_is_reduced(p, data):
    m = data.draw(matrices(p, 5, 5))
    r, piv = linalg.rref(m, p)
    for i, c in enumerate(piv):
        assert r[i, c] == 1
        assert np.count_nonzero(r[:, c]) == 1
    assert piv == sorted(piv)
    assert linalg.same_row_space(r[: len(piv)], m, p) if piv else not np.any(m)


@pytest.mark.parametrize("p", [2, 3, 7])
@given(data=st.data())
def test_inverse_and_solve(p, data):
    n = data.draw(st.integers(1, 4))
    xs = data.draw(st.lists(st.integers(0, p - 1), min_size=n * n, max_size=n * n))
    m = np.array(xs, dtype=np.int64).reshape(n, n)
    if linalg.rank(m, p) < n:
        with pytest.raises(linalg.SingularMatrix):
            linalg.inverse(m, p)
        return
    inv = linalg.inverse(m, p)
    assert np.array_equal(m @ inv % p, np.eye(n, dtype=np.int64))
    b = np.array(data.draw(st.lists(st.integers(0, p - 1), min_size=n, max_size=n)))
    x = linalg.solve(m, b, p)
    assert np.array_equal(m @ x % p, b % p)


def test_solve_inconsistent():
    with pytest.raises(linalg.SingularMatrix):
        linalg.solve(np.array([[1, 0], [1, 0]]), np.array([0, 1]), 2)


def test_reducer_quotient_coordinates():
    span = np.array([[1, 1, 0]])
    red = linalg.Reducer(span, 3, 3)
    assert red.free == [1, 2]
    assert np.array_equal(red.coords(np.array([1, 0, 0])), np.array([2, 0]))
    assert np.array_equal(red.coords(np.array([1, 1, 0])), np.array([0, 0]))
    assert np.array_equal(red.lift(1), np.array([0, 0, 1]))


def test_in_row_space():
    m = np.array([[1, 0, 1]])
    assert linalg.in_row_space(m, np.array([2, 0, 2]), 3)
    assert not linalg.in_row_space(m, np.array([0, 1, 0]), 3)
    assert linalg.in_row_space(np.zeros((0, 3), dtype=np.int64), np.zeros(3, dtype=np.int64), 3)


def test_koszul_sign():
    assert koszul_sign((1, 1)) == -1
    assert koszul_sign((1, 2), (3, 3)) == -1
    assert koszul_sign((2, 1)) == 1


def test_tensor_multiply_sign():
    deg = lambda x: x
    mul = lambda a, b: [(a + b, 1)]
    x = Tensor({(0, 1): 1}, 3, deg)
    y = Tensor({(1, 0): 1}, 3, deg)
    # (1 (x) b)(c (x) 1) = (-1)^{|b||c|} c (x) b
    assert tensor_multiply(x, y, mul, deg) == Tensor({(1, 1): 2}, 3, deg)


def test_tensor_degree_tracking():
    deg = lambda x: x
    t = Tensor({(1, 2): 1}, 2, deg)
    assert t.degree == 3
    from steenrod_excess.milnor import Sq
    with pytest.raises(DegreeMismatch):
        Sq(1) + Sq(3)
