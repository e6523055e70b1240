"""Isogeny pairs (N, N', u, v) with uv = vu = 0 over a finite field.

u: N -> N' and v: N' -> N are n x n matrices acting on columns.  The normal
form has u = [[I_m, 0], [0, 0]] and v = diag(0_m, I_l, 0), so that xi = (m, l)
is a complete invariant.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .errors import CapExceeded, InvalidParams, InvariantViolation
from .field import FieldCtx, mat_inv, nullspace, rank
from .semilinear import Term, max_enum, semilinear_solve

DEFAULT_AUT_CAP = 50_000_000


@dataclass(frozen=True, eq=False)
class PairModule:
    ctx: FieldCtx
    n: int
    u: np.ndarray
    v: np.ndarray
    c: int = 1

    def __post_init__(self):
        object.__setattr__(self, "u", np.asarray(self.u, dtype=np.int64).reshape(self.n, self.n))
        object.__setattr__(self, "v", np.asarray(self.v, dtype=np.int64).reshape(self.n, self.n))
        if self.c <= 0:
            raise InvalidParams("multiplicator c must be positive")

    def invariant_failures(self) -> list[str]:
        bad = []
        mm = self.ctx.matmul
        if np.any(mm(self.v, self.u)):
            bad.append("v u != 0")
        if np.any(mm(self.u, self.v)):
            bad.append("u v != 0")
        return bad

    def to_json(self) -> dict:
        return {"p": self.ctx.p, "field_degree": self.ctx.d, "n": self.n,
                "u": self.u.tolist(), "v": self.v.tolist(), "c": self.c}

    @classmethod
    def from_json(cls, data: dict) -> "PairModule":
        ctx = FieldCtx(int(data["p"]), int(data.get("field_degree", 1)))
        return cls(ctx, int(data["n"]), data["u"], data["v"], int(data.get("c", 1)))


@dataclass(frozen=True)
class XiInvariant:
    m: int
    l: int


def xi(pm: PairModule) -> XiInvariant:
    return XiInvariant(rank(pm.ctx, pm.u), rank(pm.ctx, pm.v))


def xi_set(n: int) -> list[tuple[int, int]]:
    return [(m, l) for m in range(n + 1) for l in range(n + 1 - m)]


def normal_matrices(n: int, m: int, l: int) -> tuple[np.ndarray, np.ndarray]:
    if m < 0 or l < 0 or m + l > n:
        raise InvalidParams(f"(m, l) = ({m}, {l}) not in Xi_{n}")
    U = np.zeros((n, n), dtype=np.int64)
    V = np.zeros((n, n), dtype=np.int64)
    U[range(m), range(m)] = 1
    V[range(m, m + l), range(m, m + l)] = 1
    return U, V


def normal_pair(ctx: FieldCtx, n: int, m: int, l: int, c: int = 1) -> PairModule:
    U, V = normal_matrices(n, m, l)
    return PairModule(ctx, n, U, V, c)


def _greedy(ctx: FieldCtx, start, candidates, n: int):
    """Extend the rows of start by candidates that raise the rank (leftmost first)."""
    rows = [np.asarray(r, dtype=np.int64) for r in start]
    picked = []
    for cand in candidates:
        trial = np.array(rows + [cand], dtype=np.int64).reshape(-1, n)
        if rank(ctx, trial) == len(rows) + 1:
            rows.append(np.asarray(cand, dtype=np.int64))
            picked.append(np.asarray(cand, dtype=np.int64))
    return picked


def normal_form(pm: PairModule):
    """(psi, psi_prime, normal pair) with psi' u psi^-1 = U and psi v psi'^-1 = V."""
    bad = pm.invariant_failures()
    if bad:
        raise InvariantViolation("; ".join(bad))
    ctx, n = pm.ctx, pm.n
    mv = ctx.matvec
    E = np.eye(n, dtype=np.int64)
    # N: vectors with independent u-images, then im v, then a complement of im v in ker u
    first, image = [], []
    for e in E:
        w = mv(pm.u, e)
        if np.any(w) and rank(ctx, np.array(image + [w]).reshape(-1, n)) == len(image) + 1:
            first.append(e)
            image.append(w)
    # N': u-images, preimages of a basis of im v, then a complement of im u in ker v
    pre, imv = [], []
    for e in E:
        w = mv(pm.v, e)
        if np.any(w) and rank(ctx, np.array(imv + [w]).reshape(-1, n)) == len(imv) + 1:
            pre.append(e)
            imv.append(w)
    m, l = len(first), len(pre)
    rest = _greedy(ctx, imv, list(nullspace(ctx, pm.u)), n)
    rest_p = _greedy(ctx, image, list(nullspace(ctx, pm.v)), n)
    P = np.array(first + imv + rest, dtype=np.int64).reshape(n, n).T
    Pp = np.array(image + pre + rest_p, dtype=np.int64).reshape(n, n).T
    psi, psi_p = mat_inv(ctx, P), mat_inv(ctx, Pp)
    mm = ctx.matmul
    U, V = normal_matrices(n, m, l)
    if np.any(mm(mm(psi_p, pm.u), P) != U) or np.any(mm(mm(psi, pm.v), Pp) != V):
        raise InvariantViolation("normal form construction failed")
    return psi, psi_p, PairModule(ctx, n, U, V, pm.c)


def random_pair(ctx: FieldCtx, n: int, m: int, l: int, rng, c: int = 1):
    """g' U g^-1, g V g'^-1 for random g, g' in GL_n; returns (pair, g, g')."""
    U, V = normal_matrices(n, m, l)
    g, gp = _random_gl(ctx, n, rng), _random_gl(ctx, n, rng)
    mm = ctx.matmul
    u = mm(mm(gp, U), mat_inv(ctx, g))
    v = mm(mm(g, V), mat_inv(ctx, gp))
    return PairModule(ctx, n, u, v, c), g, gp


def _random_gl(ctx: FieldCtx, n: int, rng):
    while True:
        A = rng.integers(0, ctx.q, size=(n, n))
        if rank(ctx, A) == n:
            return A.astype(np.int64)


def d_dim(m: int, l: int, n: int) -> int:
    if m < 0 or l < 0 or m + l > n:
        raise InvalidParams(f"(m, l) = ({m}, {l}) not in Xi_{n}")
    return n * n + (n - m - l) ** 2


# ---------------------------------------------------------------------------
# point counts over F_q
# ---------------------------------------------------------------------------


def _field_of_size(pm: PairModule, q: int) -> tuple[FieldCtx, np.ndarray, np.ndarray]:
    p = pm.ctx.p
    e = round(math.log(q, p))
    if p**e != q or e % pm.ctx.d:
        raise InvalidParams(f"q = {q} is not a power of the base field size {pm.ctx.q}")
    K = pm.ctx if e == pm.ctx.d else FieldCtx(p, e)
    emb = pm.ctx.embedding_into(K)
    return K, emb[pm.u], emb[pm.v]


def _det(K: FieldCtx, A):
    """Determinants of a stack (..., n, n) of code matrices, n <= 3."""
    n = A.shape[-1]
    mul, add, neg = K.mul_t, K.add_t, K.neg_t
    if n == 1:
        return A[..., 0, 0]
    if n == 2:
        return add[mul[A[..., 0, 0], A[..., 1, 1]], neg[mul[A[..., 0, 1], A[..., 1, 0]]]]
    if n == 3:
        out = np.zeros(A.shape[:-2], dtype=np.int64)
        for (a, b, c), sgn in (((0, 1, 2), 1), ((1, 2, 0), 1), ((2, 0, 1), 1),
                               ((0, 2, 1), -1), ((2, 1, 0), -1), ((1, 0, 2), -1)):
            t = mul[mul[A[..., 0, a], A[..., 1, b]], A[..., 2, c]]
            out = add[out, t if sgn > 0 else neg[t]]
        return out
    raise InvalidParams("determinant tables only for n <= 3")


def pair_aut_count(pm: PairModule, q: int, cap: int | None = None) -> int:
    """#{(psi, psi') in GL_n(F_q)^2 : psi' u = u psi, psi v = v psi'} by enumeration."""
    n = pm.n
    if n > 3:
        raise CapExceeded("pair automorphism counts are enumerated only for n <= 3")
    K, u, v = _field_of_size(pm, q)
    I = np.eye(n, dtype=np.int64)
    # unknowns X0 = psi, X1 = psi'
    eqs = [[Term(I, 1, 0, u), Term(K.neg_t[u], 0, 0, I)],
           [Term(I, 0, 0, v), Term(K.neg_t[v], 1, 0, I)]]
    sol = semilinear_solve(K, [(n, n), (n, n)], eqs)
    cap = max_enum(DEFAULT_AUT_CAP) if cap is None else cap
    if sol.count > cap:
        raise CapExceeded(f"{sol.count} solutions exceed cap {cap}")
    p, D = K.p, sol.dim
    nn = n * n
    weights = K.q ** np.arange(nn - 1, -1, -1, dtype=np.int64)
    if K.q**nn <= 2_000_000:
        # invertibility table indexed by the packed entries
        allm = np.array(list(itertools.product(range(K.q), repeat=nn)), dtype=np.int64).reshape(-1, n, n)
        table = _det(K, allm) != 0
        invertible = lambda A: table[A.reshape(-1, nn) @ weights]  # noqa: E731
    else:
        invertible = lambda A: _det(K, A.reshape(-1, n, n)) != 0  # noqa: E731
    # split the F_p basis; the inner part is tabulated once as field codes
    inner = min(D, 10)
    Bin, Bout = sol.basis[D - inner:], sol.basis[: D - inner]
    inner_pts = np.array(list(itertools.product(range(p), repeat=inner)), dtype=np.int64).reshape(-1, inner)
    codes = lambda X: np.concatenate([c.reshape(-1, nn) for c in sol.unpack_many(X)], axis=1)  # noqa: E731
    inner_codes = codes(inner_pts @ Bin % p)
    total = 0
    for t in itertools.product(range(p), repeat=D - inner):
        off = codes((np.asarray(t, dtype=np.int64) @ Bout % p)[None, :]) if D > inner else np.zeros((1, 2 * nn), dtype=np.int64)
        X = K.add_t[inner_codes, off]
        total += int(np.count_nonzero(invertible(X[:, :nn]) & invertible(X[:, nn:])))
    return total


def prime_of(q: int) -> int:
    p = next(d for d in range(2, q + 1) if q % d == 0)
    if p ** round(math.log(q, p)) != q:
        raise InvalidParams(f"{q} is not a prime power")
    return p


def aut_counts(m: int, l: int, n: int, qs=(3, 5, 7, 9)) -> dict:
    """pair_aut_count of the normal pair of type (m, l), over each F_q."""
    return {q: pair_aut_count(normal_pair(FieldCtx(prime_of(q)), n, m, l), q) for q in qs}


def growth_exponent(counts: dict) -> int:
    """round(log_q count) at the largest q."""
    q = max(counts)
    return round(math.log(counts[q]) / math.log(q))


# ---------------------------------------------------------------------------
# incidence model
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class IncidencePoint:
    H: tuple
    Hp: tuple


def projective_points(K: FieldCtx, n: int) -> np.ndarray:
    """Normalized representatives (first nonzero entry 1), canonical order."""
    pts = []
    for lead in range(n):
        for tail in itertools.product(range(K.q), repeat=n - lead - 1):
            pts.append((0,) * lead + (1,) + tail)
    return np.array(pts, dtype=np.int64).reshape(-1, n)


def n_proj(q: int, k: int) -> int:
    """|P^k(F_q)|, zero for k < 0."""
    return (q ** (k + 1) - 1) // (q - 1) if k >= 0 else 0


def _proportional(K: FieldCtx, X, Y):
    """mask[i, j]: X[i] lies in the line spanned by Y[j] (Y rows nonzero)."""
    n = X.shape[1]
    mask = np.ones((X.shape[0], Y.shape[0]), dtype=bool)
    for a in range(n):
        for b in range(a + 1, n):
            m1 = K.mul_t[X[:, None, a], Y[None, :, b]]
            m2 = K.mul_t[X[:, None, b], Y[None, :, a]]
            mask &= m1 == m2
    return mask


def incidence_mask(pm: PairModule, q: int, cap: int | None = None):
    """(points, mask) with mask[i, j] iff u(H_i) in H'_j and v(H'_j) in H_i."""
    K, u, v = _field_of_size(pm, q)
    P = projective_points(K, pm.n)
    cap = max_enum() if cap is None else cap
    if len(P) ** 2 > cap:
        raise CapExceeded(f"{len(P) ** 2} point pairs exceed cap {cap}")
    uH = K.matmul(P, K.transpose(u))  # rows u(h)
    vH = K.matmul(P, K.transpose(v))
    mask = _proportional(K, uH, P) & _proportional(K, vH, P).T
    return P, mask


def incidence_points(pm: PairModule, q: int) -> list[IncidencePoint]:
    P, mask = incidence_mask(pm, q)
    return [IncidencePoint(tuple(int(x) for x in P[i]), tuple(int(x) for x in P[j]))
            for i, j in zip(*np.nonzero(mask))]


def incidence_count(pm: PairModule, q: int) -> int:
    return int(incidence_mask(pm, q)[1].sum())


def incidence_components(pm: PairModule, q: int) -> dict:
    """Z, Z', Z'' as sets of index pairs into projective_points, built from their definitions.

    Z: H' = u(H) where u(H) != 0, and P(ker u) x P(im u) over the base locus;
    Z': the same with the roles of u and v exchanged; Z'' = P(ker u) x P(ker v).
    """
    K, u, v = _field_of_size(pm, q)
    P = projective_points(K, pm.n)
    index = {tuple(r): i for i, r in enumerate(P.tolist())}

    def normalize(x):
        x = np.asarray(x, dtype=np.int64)
        nz = np.nonzero(x)[0]
        return tuple(K.mul_t[K.inv_t[x[nz[0]]], x].tolist())

    def closure(A):
        img = K.matmul(P, K.transpose(A))
        nonzero = np.any(img != 0, axis=1)
        im_pts = {normalize(r) for r in img[nonzero]}
        out = set()
        for i in range(len(P)):
            if nonzero[i]:
                out.add((i, index[normalize(img[i])]))
            else:
                out.update((i, index[h]) for h in im_pts)
        return out

    Z = closure(u)
    Zp = {(j, i) for i, j in closure(v)}
    ker_u = [i for i in range(len(P)) if not np.any(K.matvec(u, P[i]))]
    ker_v = [j for j in range(len(P)) if not np.any(K.matvec(v, P[j]))]
    Zpp = {(i, j) for i in ker_u for j in ker_v}
    return {"Z": Z, "Z'": Zp, "Z''": Zpp}


@dataclass(frozen=True)
class ComponentStructure:
    kind: str  # one | two | three
    components: tuple  # names among Z, Z', Z''
    dims: dict


def component_structure(m: int, l: int, n: int) -> ComponentStructure:
    """Irreducible components of the incidence set for the normal pair of type (m, l).

    Z is nonempty iff m >= 1, Z' iff l >= 1, and Z'' is a component iff
    m + l < n (otherwise it lies in Z or Z').
    """
    if m < 0 or l < 0 or m + l > n:
        raise InvalidParams(f"(m, l) = ({m}, {l}) not in Xi_{n}")
    comps, dims = [], {}
    if m >= 1:
        comps.append("Z")
        dims["Z"] = n - 1
    if l >= 1:
        comps.append("Z'")
        dims["Z'"] = n - 1
    if m + l < n:
        comps.append("Z''")
        dims["Z''"] = (n - m - 1) + (n - l - 1)
    kind = {1: "one", 2: "two", 3: "three"}[len(comps)]
    return ComponentStructure(kind, tuple(comps), dims)
