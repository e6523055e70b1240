from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from dlab import strata as T
from dlab.errors import IncomparableEndpoints, InvalidParams
from dlab.modules import newton_slopes, reference_module
from dlab.spaces import dim_aut_formula
from dlab.witt import WittCtx


def test_table_n5():
    rows = T.strata_table(5)
    assert [r.codim for r in rows] == [4, 0, 3, 1, 2]
    assert [r.supersingular for r in rows] == [True, False, True, False, True]


@pytest.mark.parametrize("n", range(2, 11))
def test_table_consistency(n):
    rows = T.strata_table(n)
    assert [r.codim for r in rows] == [dim_aut_formula(r, n) for r in range(1, n + 1)]
    assert T.dim_supersingular(n) == (n - 1) // 2
    for r in rows:
        assert r.polygon.is_symmetric() and r.polygon.has_integral_breakpoints()


@given(st.integers(1, 12))
def test_polygon_parse_roundtrip(n):
    for r in range(n // 2 + 1):
        pg = T.polygon_of_isoindex(r, n)
        assert T.NewtonPolygon.parse(pg.format()) == pg
        assert pg.rank == 2 * n


def test_chain_runs_from_supersingular_to_ordinary():
    n = 6
    chain = [T.polygon_of_isoindex(r, n) for r in (0, 3, 2, 1)]
    for a, b in zip(chain, chain[1:]):
        assert T.polygon_leq(a, b)


@pytest.mark.parametrize("n", [4, 5, 6])
def test_naive_chain_order_fails(n):
    assert not T.polygon_leq(T.polygon_of_isoindex(1, n), T.polygon_of_isoindex(2, n))


def test_incomparable_endpoints():
    with pytest.raises(IncomparableEndpoints):
        T.polygon_leq(T.polygon_of_isoindex(0, 2), T.polygon_of_isoindex(0, 3))


def test_admissible_first_slopes():
    assert T.admissible_first_slopes(4) == {Fraction(1, 2): 0, Fraction(0): 1, Fraction(1, 4): 2}
    with pytest.raises(InvalidParams):
        T.polygon_of_isoindex(3, 4)


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_eo_polygon_agrees_with_lifts(n):
    for rho in range(2, min(n, 4) + 1, 2):
        assert newton_slopes(reference_module(rho, n, WittCtx(3, 2, n + 8))) == T.eo_to_polygon(rho, n)
