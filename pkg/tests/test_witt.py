import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from dlab.errors import InsufficientPrecision
from dlab.witt import WittCtx, smith_over_witt

W = WittCtx(3, 2, 5)

elements = st.tuples(st.integers(0, W.mod - 1), st.integers(0, W.mod - 1))


@given(elements, elements, elements)
def test_ring_axioms(a, b, c):
    assert W.mul(a, W.add(b, c)) == W.add(W.mul(a, b), W.mul(a, c))
    assert W.mul(W.mul(a, b), c) == W.mul(a, W.mul(b, c))


@given(elements, elements)
def test_sigma_is_a_ring_automorphism_of_order_d(a, b):
    assert W.frob(W.mul(a, b)) == W.mul(W.frob(a), W.frob(b))
    assert W.frob(a, 2) == W.elem(a)


def test_sigma_lifts_absolute_frobenius():
    for code in range(W.field.q):
        assert W.reduce(W.frob(W.lift(code))) == W.field.frob(code)


@given(elements)
def test_units_invert(a):
    if W.is_unit(a):
        assert W.mul(a, W.inv(a)) == W.one


def test_smith_diagonal():
    Z = WittCtx(3, 1, 6)
    M = Z.matrix([[9, 0], [0, 3]])
    assert smith_over_witt(Z, M) == (2, 1)


def test_smith_rectangular_partial():
    Z = WittCtx(3, 1, 4)
    M = Z.matrix([[9, 0], [0, 3], [0, 1]])
    assert smith_over_witt(Z, M, partial=True) == (2, 0)


def test_smith_needs_precision():
    Z = WittCtx(3, 1, 2)
    with pytest.raises(InsufficientPrecision):
        smith_over_witt(Z, Z.matrix([[9, 0], [0, 1]]))


def test_smith_invariant_under_unimodular_change():
    Z = WittCtx(5, 1, 8)
    rng = np.random.default_rng(1)
    D = Z.matrix([[25, 0, 0], [0, 5, 0], [0, 0, 1]])
    P = Z.matrix([[1, 2, 3], [0, 1, 4], [0, 0, 1]])
    Q = Z.matrix([[1, 0, 0], [int(rng.integers(0, 5)), 1, 0], [7, 11, 1]])
    assert smith_over_witt(Z, Z.matmul(Z.matmul(P, D), Q)) == (2, 1, 0)
