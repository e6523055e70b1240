"""Unitary Dieudonne modules over truncated Witt rings.

Blocks follow the same conventions as spaces.DSpace, with entries in
W_N(F_{p^d}) stored as object arrays of shape (rows, cols, d).
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import CapExceeded, InsufficientPrecision, NotMuOrdinary, SnapAmbiguity
from .field import rank as field_rank
from .field import rref
from .semilinear import max_enum
from .spaces import DSpace, classify
from .strata import NewtonPolygon, admissible_first_slopes, polygon_of_isoindex  # noqa: F401
from .witt import WittCtx, smith_over_witt


@dataclass(frozen=True, eq=False)
class UnitaryDModule:
    ctx: WittCtx
    F01: np.ndarray
    F10: np.ndarray
    V01: np.ndarray
    V10: np.ndarray
    gram: np.ndarray

    @property
    def n(self) -> int:
        return self.F01.shape[1]

    @property
    def p(self) -> int:
        return self.ctx.p

    def full(self, which: str) -> np.ndarray:
        """Full 2n x 2n matrix of F or V on M0 + M1."""
        A01, A10 = (self.F01, self.F10) if which == "F" else (self.V01, self.V10)
        n0, n1 = A01.shape[1], A10.shape[1]
        M = self.ctx.zeros(n0 + n1, n0 + n1)
        M[n0:, :n0] = A01
        M[:n0, n0:] = A10
        return M

    @property
    def J(self) -> np.ndarray:
        n = self.n
        J = self.ctx.zeros(2 * n, 2 * n)
        J[:n, n:] = self.gram
        J[n:, :n] = (-self.ctx.transpose(self.gram)) % self.ctx.mod
        return J

    def reduction(self) -> DSpace:
        c = self.ctx
        return DSpace(c.field, c.reduce_mat(self.F01), c.reduce_mat(self.F10),
                      c.reduce_mat(self.V01), c.reduce_mat(self.V10), c.reduce_mat(self.gram))


def _int_block(ctx: WittCtx, rows):
    return ctx.matrix(rows)


def make_braid_module(n: int, ctx: WittCtx) -> UnitaryDModule:
    """Witt-level braid of length n with V = p F^-1."""
    p, s = ctx.p, (-1) ** n
    F01 = [[0] * n for _ in range(n)]
    F10 = [[0] * n for _ in range(n)]
    V01 = [[0] * n for _ in range(n)]
    V10 = [[0] * n for _ in range(n)]
    for i in range(1, n):
        V01[i][i - 1] = 1  # V e_i = f_{i+1}
        F01[i - 1][i] = 1  # F e_{i+1} = f_i
        F10[i - 1][i] = p  # F f_{i+1} = p e_i
        V10[i][i - 1] = p  # V f_i = p e_{i+1}
    V10[0][n - 1] += 1  # V f_n = e_1
    F10[n - 1][0] += s  # F f_1 = (-1)^n e_n
    F01[n - 1][0] += p  # F e_1 = p f_n
    V01[0][n - 1] += s * p  # V e_n = (-1)^n p f_1
    gram = [[(-1) ** i if i == j else 0 for j in range(n)] for i in range(n)]
    m = ctx.matrix
    return UnitaryDModule(ctx, m(F01), m(F10), m(V01), m(V10), m(gram))


def make_superspecial_module(mult: int, ctx: WittCtx) -> UnitaryDModule:
    """Fg = -h, Vg = h, Fh = p g, Vh = -p g on each of `mult` summands."""
    p = ctx.p
    I = np.eye(mult, dtype=object)
    m = ctx.matrix
    return UnitaryDModule(ctx, m(-I), m(p * I), m(I), m(-p * I), m(I))


def _block_diag(ctx, A, B):
    out = ctx.zeros(A.shape[0] + B.shape[0], A.shape[1] + B.shape[1])
    out[: A.shape[0], : A.shape[1]] = A
    out[A.shape[0]:, A.shape[1]:] = B
    return out


def direct_sum_module(a: UnitaryDModule, b: UnitaryDModule) -> UnitaryDModule:
    c = a.ctx
    return UnitaryDModule(c, _block_diag(c, a.F01, b.F01), _block_diag(c, a.F10, b.F10),
                          _block_diag(c, a.V01, b.V01), _block_diag(c, a.V10, b.V10),
                          _block_diag(c, a.gram, b.gram))


def reference_module(rho: int, n: int, ctx: WittCtx) -> UnitaryDModule:
    """B(rho) + S^(n - rho)."""
    mod = make_braid_module(rho, ctx)
    if rho < n:
        mod = direct_sum_module(mod, make_superspecial_module(n - rho, ctx))
    return mod


def base_change_module(mod: UnitaryDModule, P0, P1) -> UnitaryDModule:
    """Change to the bases given by the columns of P0, P1 in GL_n(W)."""
    c = mod.ctx
    mm = c.matmul
    P0i, P1i = c.mat_inv(P0), c.mat_inv(P1)
    return UnitaryDModule(c,
                          mm(mm(P1i, mod.F01), c.frob_mat(P0, 1)),
                          mm(mm(P0i, mod.F10), c.frob_mat(P1, 1)),
                          mm(mm(P1i, mod.V01), c.frob_mat(P0, -1)),
                          mm(mm(P0i, mod.V10), c.frob_mat(P1, -1)),
                          mm(mm(c.transpose(P0), mod.gram), P1))


def random_unimodular(ctx: WittCtx, n: int, rng) -> np.ndarray:
    """Random element of GL_n(W_N) (invertible reduction)."""
    while True:
        A = ctx.zeros(n, n)
        A[...] = rng.integers(0, ctx.mod, size=(n, n, ctx.d)).astype(object)
        if field_rank(ctx.field, ctx.reduce_mat(A)) == n:
            return A


def random_symplectic_module_change(mod: UnitaryDModule, rng) -> UnitaryDModule:
    """Random graded base change fixing the Gram matrix (needs a unit Gram)."""
    c = mod.ctx
    P0 = random_unimodular(c, mod.n, rng)
    G = mod.gram
    P1 = c.matmul(c.matmul(c.mat_inv(G), c.mat_inv(c.transpose(P0))), G)
    return base_change_module(mod, P0, P1)


def invariant_failures(mod: UnitaryDModule, perfect: bool = True) -> list[str]:
    c = mod.ctx
    mm = c.matmul
    bad = []
    pI0 = c.scal(c.p, c.eye(mod.F01.shape[1]))
    pI1 = c.scal(c.p, c.eye(mod.F10.shape[1]))
    # F(V x) = F01 sigma(V10) x on M1, and so on
    checks = [("FV on M1", mm(mod.F01, c.frob_mat(mod.V10, 1)), pI1),
              ("FV on M0", mm(mod.F10, c.frob_mat(mod.V01, 1)), pI0),
              ("VF on M0", mm(mod.V10, c.frob_mat(mod.F01, -1)), pI0),
              ("VF on M1", mm(mod.V01, c.frob_mat(mod.F10, -1)), pI1)]
    for name, A, B in checks:
        if not c.is_zero_mat(c.msub(A, B)):
            bad.append(f"{name} != p")
    F, V, J = mod.full("F"), mod.full("V"), mod.J
    if not c.is_zero_mat(c.msub(mm(c.transpose(F), J), mm(c.frob_mat(J, 1), c.frob_mat(V, 1)))):
        bad.append("<Fx, y> != <x, Vy>^sigma")
    if perfect and field_rank(c.field, c.reduce_mat(mod.gram)) < mod.n:
        bad.append("pairing is not perfect")
    return bad


# ---------------------------------------------------------------------------
# slopes
# ---------------------------------------------------------------------------


def v_power(mod: UnitaryDModule, j: int) -> np.ndarray:
    """Matrix of V^j = V sigma^-1(V) ... sigma^-(j-1)(V)."""
    c = mod.ctx
    V = mod.full("V")
    out = c.eye(V.shape[0])
    for i in range(j):
        out = c.matmul(out, c.frob_mat(V, -i))
    return out


def v_divisibility(mod: UnitaryDModule, jmax: int | None = None) -> list[int]:
    """v(j) = max{k : V^j M in p^k M} for j = 1..jmax."""
    c = mod.ctx
    jmax = 2 * mod.n if jmax is None else jmax
    V = mod.full("V")
    cur = c.eye(V.shape[0])
    out = []
    for j in range(1, jmax + 1):
        cur = c.matmul(cur, c.frob_mat(V, -(j - 1)))
        v = c.mat_valuation(cur)
        if v >= c.N:
            raise InsufficientPrecision(f"V^{j} vanishes mod p^{c.N}")
        out.append(v)
    return out


def newton_slopes(mod: UnitaryDModule) -> NewtonPolygon:
    """Newton polygon from V-divisibility: the first slope is sup_j v(j)/j, snapped."""
    n = mod.n
    vs = v_divisibility(mod, 2 * n)
    est = max(Fraction(v, j) for j, v in enumerate(vs, start=1))
    adm = admissible_first_slopes(n)
    dists = sorted((abs(s - est), s) for s in adm)
    if len(dists) > 1 and dists[0][0] == dists[1][0]:
        raise SnapAmbiguity(f"estimate {est} is equidistant from {dists[0][1]} and {dists[1][1]}",
                            [str(dists[0][1]), str(dists[1][1])])
    return polygon_of_isoindex(adm[dists[0][1]], n)


def isoclinic_slope(mod: UnitaryDModule, candidates=(Fraction(0), Fraction(1, 2), Fraction(1))) -> Fraction:
    """Slope of a part known to be isoclinic, snapped among candidates."""
    if mod.n == 0:
        raise ValueError("the zero module has no slope")
    vs = v_divisibility(mod, 2 * mod.n)
    est = max(Fraction(v, j) for j, v in enumerate(vs, start=1))
    return min(candidates, key=lambda s: abs(s - est))


# ---------------------------------------------------------------------------
# V^2 type
# ---------------------------------------------------------------------------


def v_square_blocks(mod: UnitaryDModule):
    """V^2 on M0 and on M1 (sigma^-2 twisted)."""
    c = mod.ctx
    on0 = c.matmul(mod.V10, c.frob_mat(mod.V01, -1))
    on1 = c.matmul(mod.V01, c.frob_mat(mod.V10, -1))
    return on0, on1


def v_square_type(mod: UnitaryDModule) -> tuple[tuple, tuple]:
    on0, on1 = v_square_blocks(mod)
    return smith_over_witt(mod.ctx, on0), smith_over_witt(mod.ctx, on1)


# ---------------------------------------------------------------------------
# mu-ordinary decomposition
# ---------------------------------------------------------------------------


def _saturated_image(ctx: WittCtx, A) -> np.ndarray:
    """Columns of A spanning a direct summand, chosen by unit pivots mod p."""
    _, piv = rref(ctx.field, ctx.reduce_mat(A))
    return A[:, piv, :] if piv else ctx.zeros(A.shape[0], 0)


@dataclass(frozen=True, eq=False)
class MuOrdinaryParts:
    M0: tuple  # (basis in degree 0, basis in degree 1) for slope 0
    Mhalf: tuple
    M1: tuple
    modules: dict


def _sub_module(mod: UnitaryDModule, B0, B1) -> UnitaryDModule:
    """Restriction to the direct summand with column bases B0, B1."""
    c = mod.ctx
    mm = c.matmul

    def coords(B, Y):
        # B has a unit maximal minor; solve on those rows and check the rest
        _, rows = rref(c.field, c.reduce_mat(B).T.copy())
        X = mm(c.mat_inv(B[rows]), Y[rows])
        if not c.is_zero_mat(c.msub(mm(B, X), Y)):
            raise NotMuOrdinary("sub-lattice is not stable under F and V")
        return X

    k0, k1 = B0.shape[1], B1.shape[1]
    if k0 == 0 and k1 == 0:
        z = c.zeros(0, 0)
        return UnitaryDModule(c, z, z, z, z, z)
    F01 = coords(B1, mm(mod.F01, c.frob_mat(B0, 1)))
    F10 = coords(B0, mm(mod.F10, c.frob_mat(B1, 1)))
    V01 = coords(B1, mm(mod.V01, c.frob_mat(B0, -1)))
    V10 = coords(B0, mm(mod.V10, c.frob_mat(B1, -1)))
    g = mm(mm(c.transpose(B0), mod.gram), B1)
    return UnitaryDModule(c, F01, F10, V01, V10, g)


def mu_ordinary_decomposition(mod: UnitaryDModule) -> MuOrdinaryParts:
    """M = M(0) + M(1/2) + M(1), slopes measured through V-divisibility.

    M(0) is where V is bijective (image of V^{2N}), M(1) where F is bijective.
    """
    c = mod.ctx
    if classify(mod.reduction()) != 2:
        raise NotMuOrdinary("reduction is not of class rho = 2")
    n = mod.n
    N = c.N
    on0, on1 = v_square_blocks(mod)
    F = mod
    f0 = c.matmul(F.F10, c.frob_mat(F.F01, 1))  # F^2 on M0
    f1 = c.matmul(F.F01, c.frob_mat(F.F10, 1))  # F^2 on M1

    def power(A, twist, e):
        out = c.eye(A.shape[0])
        for i in range(e):
            out = c.matmul(out, c.frob_mat(A, twist * i))
        return out

    e = N + 1
    P00 = _saturated_image(c, power(on0, -2, e))
    P01 = _saturated_image(c, power(on1, -2, e))
    P10 = _saturated_image(c, power(f0, 2, e))
    P11 = _saturated_image(c, power(f1, 2, e))
    if not all(B.shape[1] == 1 for B in (P00, P01, P10, P11)):
        raise NotMuOrdinary("slope 0 and slope 1 parts are not of rank one in each degree")
    B0 = np.concatenate([P00, P10], axis=1)
    B1 = np.concatenate([P01, P11], axis=1)
    G = mod.gram
    P = c.matmul(c.matmul(c.transpose(B0), G), B1)
    Pi = c.mat_inv(P)
    mm = c.matmul
    # projections onto the orthogonal complement of M(0) + M(1)
    Pr0 = c.msub(c.eye(n), mm(mm(mm(B0, c.transpose(Pi)), c.transpose(B1)), c.transpose(G)))
    Pr1 = c.msub(c.eye(n), mm(mm(mm(B1, Pi), c.transpose(B0)), G))
    H0 = _saturated_image(c, Pr0)
    H1 = _saturated_image(c, Pr1)
    parts = {
        "0": _sub_module(mod, P00, P01),
        "1/2": _sub_module(mod, H0, H1),
        "1": _sub_module(mod, P10, P11),
    }
    return MuOrdinaryParts((P00, P01), (H0, H1), (P10, P11), parts)


# ---------------------------------------------------------------------------
# superspecial isogeny orbits (m = 1)
# ---------------------------------------------------------------------------


def count_superspecial_isogeny_orbits(c: int, prec: int, p: int = 3) -> int:
    """Orbits of J = {g : g^sigma g = 1} on X_c = {f : f^sigma f = p^c} in W_prec(F_{p^2})."""
    if c % 2 == 1:
        return 0
    if prec < c + 2:
        raise InsufficientPrecision(f"need prec >= c + 2 = {c + 2}")
    W = WittCtx(p, 2, prec)
    size = W.mod**2
    if size > max_enum(10**6):
        raise CapExceeded(f"W_{prec}(F_{p}^2) has {size} elements")
    target = W.elem(p**c)
    one = W.one
    norm = {}
    elems = list(W.elements())
    for x in elems:
        norm[x] = W.mul(W.frob(x, 1), x)
    X = [x for x in elems if norm[x] == target]
    J = [x for x in elems if norm[x] == one]
    parent = {x: x for x in X}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for f in X:
        for g in J:
            h = W.mul(g, f)
            a, b = find(f), find(h)
            if a != b:
                parent[a] = b
    return len({find(x) for x in X})


# ---------------------------------------------------------------------------
# JSON
# ---------------------------------------------------------------------------


def module_to_json(mod: UnitaryDModule) -> dict:
    """Space schema plus "precision"; entries are lists of d coefficients mod p^N."""
    c = mod.ctx

    def enc(A):
        return [[[int(v) for v in A[i, j]] for j in range(A.shape[1])] for i in range(A.shape[0])]

    return {
        "kind": "module", "p": c.p, "field_degree": c.d, "precision": c.N, "n": mod.n,
        "F": {"m0_to_m1": enc(mod.F01), "m1_to_m0": enc(mod.F10)},
        "V": {"m0_to_m1": enc(mod.V01), "m1_to_m0": enc(mod.V10)},
        "gram": enc(mod.gram),
    }


def module_from_json(obj) -> UnitaryDModule:
    if isinstance(obj, str):
        import json

        obj = json.loads(obj)
    c = WittCtx(int(obj["p"]), int(obj.get("field_degree", 1)), int(obj["precision"]))

    def dec(rows):
        n = len(rows)
        A = c.zeros(n, len(rows[0]) if n else 0)
        for i, row in enumerate(rows):
            for j, x in enumerate(row):
                A[i, j] = c.elem(x if isinstance(x, list) else [x])
        return A

    return UnitaryDModule(c, dec(obj["F"]["m0_to_m1"]), dec(obj["F"]["m1_to_m0"]),
                          dec(obj["V"]["m0_to_m1"]), dec(obj["V"]["m1_to_m0"]), dec(obj["gram"]))
