"""Acceptance suite: ten criteria, one PASS/FAIL line each.

Run with `pytest tests/test_acceptance.py -v` or `python3 tests/test_acceptance.py`.
"""
from __future__ import annotations

import itertools
import math
import time
from fractions import Fraction

import numpy as np
import pytest

from dlab import coweights as C
from dlab import lattices as L
from dlab import modules as M
from dlab import pairs as P
from dlab import spaces as S
from dlab import strata as T
from dlab.errors import IncomparableConstants
from dlab.field import FieldCtx
from dlab.witt import WittCtx

BUDGETS = {1: 2, 2: 60, 3: 60, 4: 60, 5: 120, 6: 10, 7: 120, 8: 60, 9: 30, 10: 60}


def braid_polygon(n):
    """Slopes of B(n): all 1/2 for odd n, (n-2)/2n and (n+2)/2n with multiplicity n for even n."""
    if n % 2:
        return T.NewtonPolygon((Fraction(1, 2),) * (2 * n))
    return T.NewtonPolygon((Fraction(n - 2, 2 * n),) * n + (Fraction(n + 2, 2 * n),) * n)


def criterion_1():
    bad = [(n, p) for p in (3, 5) for n in range(1, 9)
           if M.newton_slopes(M.make_braid_module(n, WittCtx(p, 2, n + 8))) != braid_polygon(n)]
    return not bad, f"mismatches {bad}"


def criterion_2():
    total = wrong = checked = failed_checks = 0
    for p in (3, 5):
        for n in (2, 3, 4):
            for rho in range(1, n + 1):
                ref = S.reference_space(rho, n, p)
                rng = np.random.default_rng(1000 * p + 10 * n + rho)
                for i in range(100):
                    sp, _, _ = S.random_symplectic_base_change(ref, rng)
                    total += 1
                    wrong += S.classify(sp) != rho
                    if i % 10 == 0:
                        checked += 1
                        failed_checks += S.find_graded_isomorphism(sp, ref, 1, seed=i) is None
    return wrong == 0 and failed_checks == 0, f"{total} spaces, {wrong} misclassified, {checked} cross-checks, {failed_checks} failed"


def unitary_group_order(m, p):
    """|U_m(F_p)| by enumerating g over F_p^2 with conj(g)^T g = 1."""
    K = FieldCtx(p, 2)
    I = K.eye(m)
    count = 0
    for entries in itertools.product(range(K.q), repeat=m * m):
        g = np.array(entries, dtype=np.int64).reshape(m, m)
        count += np.array_equal(K.matmul(K.transpose(K.frob(g, 1)), g), I)
    return count


def criterion_3():
    notes = []
    ok = True
    for m in (1, 2):
        sp = S.make_superspecial(m, 3)
        counts = [S.isom_count(sp, sp, k) for k in (1, 2, 3)]
        brute = unitary_group_order(m, 3)
        ok &= len(set(counts)) == 1 and counts[0] == brute
        notes.append(f"Aut(S^{m}) {counts} vs |U_{m}(F_3)| = {brute}")
    for k in (1, 2):
        q = 3 ** (2 * k)
        for r in (1, 2, 3, 4):
            h = S.hom_gd_count(S.make_superspecial(1, 3), S.make_braid(r, 3), k)
            ok &= h == (q if r % 2 else 1)
    return ok, "; ".join(notes)


def criterion_4():
    ok = True
    rng = np.random.default_rng(4)
    pool = []
    for n in (1, 2, 3, 4):
        for k in (1, 2):
            auts = S.automorphisms(S.make_braid(n, 3), k)
            q = 3 ** (2 * k)
            D = S.dim_aut_formula(n, n)
            identity_part = sum(1 for Phi0, _ in auts if Phi0[0, 0] == 1)
            ok &= identity_part == q**D
            ok &= len(auts) == math.gcd(S.braid_root_order(n, 3), q - 1) * q**D
            pool += [(n, k, a) for a in auts]
    picks = rng.choice(len(pool), size=200, replace=False)
    bad = 0
    for i in picks:
        n, k, (Phi0, Phi1) = pool[i]
        big = S.field_for(S.make_braid(n, 3), k)
        params = S.extract_braid_params(n, Phi0, Phi1, big)
        R0, R1 = S.braid_aut_from_params(n, params, big)
        bad += not (np.array_equal(R0, Phi0) and np.array_equal(R1, Phi1))
    return ok and bad == 0, f"{len(pool)} automorphisms counted, {bad} of 200 roundtrips failed"


def criterion_5():
    notes, ok = [], True
    for m, l, a in ((1, 1, 0), (2, 0, 1), (2, 1, 0)):
        gb = L.make_genbraid(m, l, a)
        found = L.enumerate_lattices(gb)
        mine = {L.lattice_to_subgroups(e.lattice) + (e.lam,) for e in found}
        oracle = set(L.brute_force_family(gb))
        ok &= mine == oracle and len(mine) == len(found)
        ok &= all(e.alpha + e.beta == m * (l - e.lam) + a for e in found)
        notes.append(f"({m},{l},{a}): {len(found)} lattices")
    return ok, ", ".join(notes)


def criterion_6():
    res = {(n, p): C.frob_type_check(n, p) for n in (2, 4, 6) for p in (3, 5)}
    ok = all(r.ok and r.coweight.first_half == (2,) + (1,) * (n - 2) + (0,) and r.multiplicator == 2
             for (n, p), r in res.items())
    return ok, " ".join(f"n={n},p={p}:{r.coweight}" for (n, p), r in res.items() if p == 3)


def criterion_7():
    rng = np.random.default_rng(7)
    fields = {3: FieldCtx(3), 5: FieldCtx(5)}
    bad_nf = 0
    for i in range(500):
        n = 1 + i % 5
        m = int(rng.integers(0, n + 1))
        l = int(rng.integers(0, n - m + 1))
        pm, _, _ = P.random_pair(fields[3 if i % 2 else 5], n, m, l, rng)
        _, _, nf = P.normal_form(pm)
        U, V = P.normal_matrices(n, m, l)
        bad_nf += not (np.array_equal(nf.u, U) and np.array_equal(nf.v, V))
    bad_inc = 0
    min_growth = {}
    for n in (1, 2, 3):
        for m, l in P.xi_set(n):
            counts = {}
            for q in (3, 5):
                pm = P.normal_pair(fields[q], n, m, l)
                _, mask = P.incidence_mask(pm, q)
                comps = P.incidence_components(pm, q)
                bad_inc += set(zip(*map(list, np.nonzero(mask)))) != set().union(*comps.values())
                for name in P.component_structure(m, l, n).components:
                    counts.setdefault(name, {})[q] = len(comps[name])
            g = min(P.growth_exponent(c) for c in counts.values())
            min_growth[n] = min(min_growth.get(n, g), g)
    bad_growth = [(m, l, n) for n in (1, 2) for m, l in P.xi_set(n)
                  if P.growth_exponent(P.aut_counts(m, l, n)) != P.d_dim(m, l, n)]
    ok = bad_nf == 0 and bad_inc == 0 and not bad_growth and all(g >= n - 1 for n, g in min_growth.items())
    return ok, (f"normal form {bad_nf}/500 bad, incidence {bad_inc} bad, growth mismatches {bad_growth}, "
                f"min component growth {min_growth}")


def criterion_8():
    ok = True
    for n in range(2, 11):
        rows = T.strata_table(n)
        ok &= [r.codim for r in rows] == [S.dim_aut_formula(r, n) for r in range(1, n + 1)]
        ok &= T.dim_supersingular(n) == (n - 1) // 2
    lifts = 0
    for p in (3, 5):
        for n in range(2, 6):
            for rho in range(2, min(n, 4) + 1, 2):
                ok &= M.newton_slopes(M.reference_module(rho, n, WittCtx(p, 2, n + 8))) == T.eo_to_polygon(rho, n)
                lifts += 1
    return ok, f"n = 2..10 tables, {lifts} lifted representatives"


def criterion_9():
    odd = [M.count_superspecial_isogeny_orbits(c, c + 3) for c in (1, 3)]
    even = {c: (M.count_superspecial_isogeny_orbits(c, c + 2), M.count_superspecial_isogeny_orbits(c, c + 3))
            for c in (0, 2)}
    ok = odd == [0, 0] and all(a == b and a > 0 for a, b in even.values())
    return ok, f"odd c -> {odd}, even c (prec, prec+1) -> {even}"


def criterion_10():
    failures = []
    for p in (3, 5):
        for n in range(1, 6):
            for rho in range(1, n + 1):
                sp = S.reference_space(rho, n, p)
                failures += S.invariant_failures(sp)
                mod = M.reference_module(rho, n, WittCtx(p, 2, 6))
                failures += M.invariant_failures(mod)
                failures += M.invariant_failures(M.random_symplectic_module_change(mod, np.random.default_rng(rho)))
        for m in (1, 2, 3):
            failures += S.invariant_failures(S.make_superspecial(m, p))
    for m, l, a in ((1, 0, 0), (1, 1, 0), (2, 0, 1), (2, 1, 0), (1, -1, 0)):
        gb = L.make_genbraid(m, l, a)
        failures += M.invariant_failures(gb.module(), perfect=False)
        if l >= 0:
            failures += [f"duality ({m},{l},{a})" for e in L.enumerate_lattices(gb)
                         if L.in_family(e.lattice) != e.lam or e.lattice.dual() != e.lattice.scaled(-e.lam)]
    for n in range(1, 5):
        for m, l in P.xi_set(n):
            failures += P.normal_pair(FieldCtx(3), n, m, l).invariant_failures()
    grid = [C.Coweight.from_half(half, c) for half in itertools.product(range(3), repeat=3) for c in range(5)]
    grid = [x for x in grid if set(x.x) <= {0, 1, 2}]
    compared = disagree = 0
    for a, b in itertools.product(grid, repeat=2):
        try:
            leq = C.dominance_leq(a, b)
        except IncomparableConstants:
            disagree += C.in_orbit_hull(a, b)
            continue
        compared += 1
        disagree += leq != C.in_orbit_hull(a, b)
    return not failures and disagree == 0, f"{len(failures)} invariant failures, {len(grid)} coweights, {compared} comparable pairs, {disagree} disagree"


CRITERIA = {i: globals()[f"criterion_{i}"] for i in range(1, 11)}


def run_criterion(i):
    t0 = time.perf_counter()
    ok, detail = CRITERIA[i]()
    dt = time.perf_counter() - t0
    within = dt < BUDGETS[i]
    status = "PASS" if ok and within else "FAIL"
    line = f"[{status}] criterion {i}: {detail} ({dt:.1f}s, budget {BUDGETS[i]}s)"
    return ok and within, line


@pytest.mark.parametrize("i", range(1, 11))
def test_criterion(i, capsys):
    ok, line = run_criterion(i)
    with capsys.disabled():
        print("\n" + line)
    assert ok, line


if __name__ == "__main__":
    for i in CRITERIA:
        print(run_criterion(i)[1], flush=True)
