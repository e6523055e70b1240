import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dlab import spaces as S
from dlab.errors import InvalidParams
from dlab.field import FieldCtx


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_braid_invariants_and_signature(n):
    sp = S.make_braid(n, 3)
    assert S.invariant_failures(sp) == []
    sig = S.signature(sp)
    assert sig.as_tuple() == (n - 1, 1)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_reference_spaces_classify_to_their_index(n):
    for rho in range(1, n + 1):
        assert S.classify(S.reference_space(rho, n, 3)) == rho


@settings(max_examples=15, deadline=None)
@given(st.integers(2, 4), st.integers(0, 10**6))
def test_classify_is_base_change_invariant(n, seed):
    rho = 1 + seed % n
    sp, _, _ = S.random_symplectic_base_change(S.reference_space(rho, n, 5), np.random.default_rng(seed))
    assert S.invariant_failures(sp) == []
    assert S.classify(sp) == rho


def test_supersingular_iff_odd_index():
    assert [S.is_supersingular(S.reference_space(r, 4, 3)) for r in range(1, 5)] == [True, False, True, False]


def test_split_superspecial():
    core, m = S.split_superspecial(S.reference_space(2, 4, 3))
    assert (core.dim0, m) == (2, 2)


@pytest.mark.parametrize("m,expected", [(1, 4), (2, 96)])
def test_superspecial_automorphisms(m, expected):
    sp = S.make_superspecial(m, 3)
    assert S.isom_count(sp, sp, 1) == S.isom_count(sp, sp, 2) == expected


@pytest.mark.parametrize("r,k", [(1, 1), (2, 1), (3, 2), (4, 2)])
def test_hom_from_superspecial_to_braid(r, k):
    q = 3 ** (2 * k)
    expected = q if r % 2 else 1
    assert S.hom_gd_count(S.make_superspecial(1, 3), S.make_braid(r, 3), k) == expected


@pytest.mark.parametrize("n,k", [(2, 1), (3, 1), (3, 2), (4, 1)])
def test_braid_automorphism_count(n, k):
    assert S.isom_count(S.make_braid(n, 3), S.make_braid(n, 3), k) == S.braid_aut_count_formula(n, 3, k)


def test_braid_parametrization_roundtrip():
    big = S.field_for(S.make_braid(3, 3), 1)
    sp = S.extend(S.make_braid(3, 3), big)
    for Phi0, Phi1 in S.automorphisms(S.make_braid(3, 3), 1):
        params = S.extract_braid_params(3, Phi0, Phi1, big)
        P0, P1 = S.braid_aut_from_params(3, params, big)
        assert np.array_equal(P0, Phi0) and np.array_equal(P1, Phi1)
        assert S.is_isomorphism(sp, sp, P0, P1)


def test_dim_aut_formula_range():
    assert [S.dim_aut_formula(r, 5) for r in range(1, 6)] == [4, 0, 3, 1, 2]
    with pytest.raises(InvalidParams):
        S.dim_aut_formula(0, 3)


def test_json_roundtrip():
    sp = S.reference_space(3, 4, 5)
    back = S.from_json(S.to_json(sp))
    assert back.ctx == sp.ctx
    for name in ("F01", "F10", "V01", "V10", "gram"):
        assert np.array_equal(getattr(back, name), getattr(sp, name))


def test_nonisomorphic_strata_have_no_isomorphism():
    assert S.find_isomorphism(S.reference_space(1, 3, 3), S.reference_space(2, 3, 3), 1) is None
    assert S.find_graded_isomorphism(S.reference_space(2, 3, 3), S.reference_space(2, 3, 3), 1) is not None


def test_extension_field():
    assert S.field_for(S.make_braid(2, 3), 2) == FieldCtx(3, 4)
