import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from dlab import coweights as C
from dlab.errors import DualityViolation, IncomparableConstants, InvalidParams


def test_constraint():
    with pytest.raises(InvalidParams):
        C.Coweight((1, 0, 0, 0))
    assert C.Coweight((2, 1, 1, 0)).const == 2


def test_mu_and_its_norm():
    assert C.mu(3).x == (1, 0, 0, 1, 1, 0)
    assert C.norm_mu(4).x == (2, 1, 1, 0, 2, 1, 1, 0)


@given(st.integers(2, 9))
def test_norm_mu_shape(n):
    x = C.norm_mu(n)
    assert x.first_half == (2,) + (1,) * (n - 2) + (0,)
    assert x.const == 2


@given(st.lists(st.integers(-3, 3), min_size=3, max_size=3), st.permutations(range(3)))
def test_weyl_action_preserves_dominant_rep(half, perm):
    x = C.Coweight.from_half(half, 1)
    assert x.act(perm).dominant() == x.dominant()


def grid(n=3):
    out = []
    for half in itertools.product(range(3), repeat=n):
        for c in range(3):
            try:
                out.append(C.Coweight.from_half(half, c))
            except InvalidParams:
                pass
    return out


def test_dominance_matches_hull_on_a_slice():
    pts = [x for x in grid() if x.const == 1 and sum(x.first_half) == 3]
    for a, b in itertools.product(pts, repeat=2):
        assert C.dominance_leq(a, b) == C.in_orbit_hull(a, b)


def test_incomparable_constants():
    with pytest.raises(IncomparableConstants):
        C.dominance_leq(C.Coweight.from_half((1, 0), 1), C.Coweight.from_half((1, 0), 2))


def test_inv_lattice_pair():
    assert C.inv_lattice_pair((0, 1, 2), (2, 1, 0)).rep.x == (2, 1, 0, 2, 1, 0)
    with pytest.raises(DualityViolation):
        C.inv_lattice_pair((2, 0), (1, 1))


def test_levi_orbit_fixes_ends():
    x = C.Coweight.from_half((3, 0, 2, 1), 3)
    assert C.levi_orbit(x).rep.first_half == (3, 2, 0, 1)
    assert C.levi_orbit(x).to_G() == x.dominant()


@pytest.mark.parametrize("n,p", [(2, 3), (4, 3), (4, 5)])
def test_frob_type(n, p):
    res = C.frob_type_check(n, p)
    assert res.ok
    assert res.coweight == C.norm_mu(n)
    assert res.multiplicator == 2
