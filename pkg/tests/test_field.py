import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dlab.field import FieldCtx, mat_inv, nullspace, rank, solve

F9 = FieldCtx(3, 2)
F25 = FieldCtx(5, 2)


def test_rejects_even_prime():
    with pytest.raises(ValueError):
        FieldCtx(2)


def test_multiplicative_group_is_cyclic_of_order_q_minus_1():
    orders = set()
    for a in range(1, F9.q):
        k = 1
        while F9.pow(a, k) != 1:
            k += 1
        orders.add(k)
    assert max(orders) == 8
    assert all(8 % k == 0 for k in orders)


def test_frobenius_is_additive_and_of_order_d():
    for a in range(F25.q):
        assert F25.frob(a, 2) == a
        for b in range(0, F25.q, 7):
            assert F25.frob(F25.add(a, b)) == F25.add(F25.frob(a), F25.frob(b))


def test_embedding_is_a_ring_map():
    small, big = FieldCtx(3, 2), FieldCtx(3, 4)
    emb = small.embedding_into(big)
    for a in range(small.q):
        for b in range(small.q):
            assert emb[small.mul(a, b)] == big.mul(int(emb[a]), int(emb[b]))
            assert emb[small.add(a, b)] == big.add(int(emb[a]), int(emb[b]))


@given(st.lists(st.integers(0, 8), min_size=9, max_size=9))
def test_inverse_or_singular(entries):
    A = np.array(entries, dtype=np.int64).reshape(3, 3)
    if rank(F9, A) == 3:
        assert np.array_equal(F9.matmul(A, mat_inv(F9, A)), F9.eye(3))
    else:
        assert nullspace(F9, A).shape[0] == 3 - rank(F9, A)


@settings(max_examples=50)
@given(st.lists(st.integers(0, 24), min_size=12, max_size=12), st.lists(st.integers(0, 24), min_size=4, max_size=4))
def test_solve_consistent_systems(entries, x):
    A = np.array(entries, dtype=np.int64).reshape(3, 4)
    b = F25.matvec(A, np.array(x))
    y = solve(F25, A, b)
    assert y is not None
    assert np.array_equal(F25.matvec(A, y), b)
