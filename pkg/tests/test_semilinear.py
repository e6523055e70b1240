import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dlab.errors import CapExceeded
from dlab.field import FieldCtx
from dlab.semilinear import Term, TwistedMap, frobenius, max_enum, semilinear_solve
from dlab.witt import WittCtx

F9 = FieldCtx(3, 2)
mats = st.lists(st.integers(0, 8), min_size=4, max_size=4).map(lambda v: np.array(v, dtype=np.int64).reshape(2, 2))


@given(mats, mats, st.lists(st.integers(0, 8), min_size=2, max_size=2))
def test_twisted_composition_matches_application(A, B, x):
    f, g = TwistedMap(F9, A, 1), TwistedMap(F9, B, 1)
    x = np.array(x, dtype=np.int64).reshape(2, 1)
    assert np.array_equal((f @ g).apply(x), f.apply(g.apply(x)))


def test_frobenius_on_witt_matrices():
    W = WittCtx(3, 2, 4)
    A = W.matrix([[W.gen, 1], [0, W.gen]])
    assert np.array_equal(frobenius(W, frobenius(W, A)), A)


@settings(max_examples=20, deadline=None)
@given(mats)
def test_solution_space_matches_brute_force(A):
    # X in M_{2x1}(F_9) with A sigma(X) - X = 0
    one = np.eye(1, dtype=np.int64)
    S = semilinear_solve(F9, [(2, 1)], [[Term(A, 0, 1, one), Term(F9.neg(F9.eye(2)), 0, 0, one)]])
    brute = 0
    for a, b in itertools.product(range(9), repeat=2):
        x = np.array([[a], [b]], dtype=np.int64)
        brute += np.array_equal(F9.matmul(A, F9.frob(x, 1)), x)
    assert S.count == brute
    for (X,) in S.enumerate():
        assert np.array_equal(F9.matmul(A, F9.frob(X, 1)), X)


def test_enumeration_cap(monkeypatch):
    S = semilinear_solve(F9, [(2, 2)], [])
    monkeypatch.setenv("DLAB_MAX_ENUM", "100")
    assert max_enum() == 100
    with pytest.raises(CapExceeded):
        list(S.enumerate())
