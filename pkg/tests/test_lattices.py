import pytest

from dlab import lattices as L
from dlab.errors import CapExceeded, InsufficientPrecision, InvalidParams
from dlab.modules import invariant_failures
from dlab.spaces import classify


@pytest.mark.parametrize("m,l,a", [(1, 0, 0), (1, 1, 0), (2, 0, 1), (2, 1, 0), (1, -1, 0)])
def test_genbraid_invariants(m, l, a):
    gb = L.make_genbraid(m, l, a)
    N = gb.lattice()
    assert N.is_stable()
    assert N.dual().length_over(N) == 4 * (m * l + a)


@pytest.mark.parametrize("m", [1, 2, 3])
def test_fv_powers_scale(m):
    N = L.make_genbraid(m, 0, 0, prec=2 * m + 2).lattice()
    M = N
    for _ in range(m):
        M = L.f_op(M)
    for _ in range(m):
        M = L.v_op(M)
    assert M == N.scaled(-1)


def test_budget_runs_out():
    gb = L.make_genbraid(1, 0, 0, prec=1)
    with pytest.raises(InsufficientPrecision):
        L.f_op(L.f_op(gb.lattice()))


@pytest.mark.parametrize("m,l,a,count", [(1, 0, 0, 1), (1, 1, 0, 4), (1, 2, 0, 9), (2, 1, 0, 5), (2, 0, 1, 2)])
def test_enumeration_against_subgroup_oracle(m, l, a, count):
    gb = L.make_genbraid(m, l, a)
    found = L.enumerate_lattices(gb)
    assert len(found) == count
    mine = {L.lattice_to_subgroups(e.lattice) + (e.lam,) for e in found}
    assert mine == set(L.brute_force_family(gb))
    for e in found:
        assert e.alpha + e.beta == m * (l - e.lam) + a


@pytest.mark.parametrize("m,l,a", [(1, 1, 0), (2, 1, 0), (2, 1, 1)])
def test_dual_swaps_lambda(m, l, a):
    family = {(e.lattice, e.lam) for e in L.enumerate_lattices(L.make_genbraid(m, l, a))}
    assert {(M.dual(), -lam) for M, lam in family} == family


def test_members_give_braid_modules():
    gb = L.make_genbraid(1, 1, 0)
    for e in L.enumerate_lattices(gb):
        mod = L.lattice_module(e.lattice, 6)
        assert invariant_failures(mod) == []
        assert classify(mod.reduction()) == 2


def test_parameter_checks():
    with pytest.raises(InvalidParams):
        L.make_genbraid(1, 0, 1)
    with pytest.raises(InvalidParams):
        L.enumerate_lattices(L.make_genbraid(1, -1, 0))
    with pytest.raises(CapExceeded):
        L.brute_force_family(L.make_genbraid(2, 2, 0))
