import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dlab import pairs as P
from dlab.errors import InvalidParams, InvariantViolation
from dlab.field import FieldCtx

F3, F5 = FieldCtx(3), FieldCtx(5)


@st.composite
def pair_types(draw):
    n = draw(st.integers(1, 5))
    m = draw(st.integers(0, n))
    l = draw(st.integers(0, n - m))
    return n, m, l


@settings(max_examples=60, deadline=None)
@given(pair_types(), st.integers(0, 10**6), st.sampled_from([F3, F5]))
def test_normal_form_roundtrip(nml, seed, ctx):
    n, m, l = nml
    pm, _, _ = P.random_pair(ctx, n, m, l, np.random.default_rng(seed))
    assert pm.invariant_failures() == []
    psi, psi_p, nf = P.normal_form(pm)
    U, V = P.normal_matrices(n, m, l)
    assert np.array_equal(nf.u, U) and np.array_equal(nf.v, V)
    assert P.xi(pm) == P.XiInvariant(m, l)


def test_non_pair_rejected():
    u = np.eye(2, dtype=np.int64)
    with pytest.raises(InvariantViolation):
        P.normal_form(P.PairModule(F3, 2, u, u))


def test_json_roundtrip():
    pm, _, _ = P.random_pair(F5, 3, 1, 1, np.random.default_rng(0))
    back = P.PairModule.from_json(pm.to_json())
    assert np.array_equal(back.u, pm.u) and np.array_equal(back.v, pm.v)


@pytest.mark.parametrize("n", [1, 2, 3])
@pytest.mark.parametrize("q", [3, 5])
def test_incidence_is_union_of_components(n, q):
    for m, l in P.xi_set(n):
        pm = P.normal_pair(F3 if q == 3 else F5, n, m, l)
        P_, mask = P.incidence_mask(pm, q)
        comps = P.incidence_components(pm, q)
        union = set().union(*comps.values())
        assert set(zip(*map(list, np.nonzero(mask)))) == union


def brute_aut(n, m, l, q):
    """|{(g, g') in GL_n(F_q)^2 : g' U = U g, g V = V g'}| by direct search, n = 1."""
    U, V = P.normal_matrices(n, m, l)
    count = 0
    for g in range(1, q):
        for gp in range(1, q):
            if gp * U[0, 0] % q == U[0, 0] * g % q and g * V[0, 0] % q == V[0, 0] * gp % q:
                count += 1
    return count


@pytest.mark.parametrize("m,l", [(0, 0), (1, 0), (0, 1)])
def test_aut_count_rank_one(m, l):
    for q in (3, 5, 7):
        assert P.pair_aut_count(P.normal_pair(FieldCtx(q), 1, m, l), q) == brute_aut(1, m, l, q)


@pytest.mark.parametrize("m,l", [(1, 0), (0, 1), (1, 1), (2, 0)])
def test_aut_growth_n2(m, l):
    assert P.growth_exponent(P.aut_counts(m, l, 2, qs=(3, 5, 7))) == P.d_dim(m, l, 2)


def test_component_structure():
    assert P.component_structure(1, 1, 3).components == ("Z", "Z'", "Z''")
    assert P.component_structure(2, 1, 3).kind == "two"
    assert P.component_structure(0, 0, 2).dims == {"Z''": 2}
    with pytest.raises(InvalidParams):
        P.component_structure(2, 2, 3)


def test_n_proj():
    assert [P.n_proj(3, k) for k in (-1, 0, 1, 2)] == [0, 1, 4, 13]
