"""Graded unitary Dieudonne spaces over finite fields.

A space of signature (n-1, 1) is stored as four blocks over a FieldCtx:
F01: M0 -> M1 and F10: M1 -> M0 (sigma-linear), V01, V10 (sigma^-1-linear),
plus the Gram matrix of the pairing M0 x M1.  Vectors are column vectors of
field codes; F(x) = F01 sigma(x) for x in M0.
"""
from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import (CapExceeded, ExtensionBoundExceeded, InvalidParams,
                     InvariantViolation, UnclassifiableInput)
from .field import FieldCtx, intersect, mat_inv, nullspace, preimage, rank, row_basis, rref, solve
from .semilinear import Term, TwistedMap, max_enum, semilinear_solve

EXTENSION_BOUND = 6


@dataclass(frozen=True)
class Signature:
    r: int
    s: int

    def as_tuple(self):
        return (self.r, self.s)


@dataclass(frozen=True, eq=False)
class DSpace:
    """Graded Dieudonne space; a unitary one when gram is set."""

    ctx: FieldCtx
    F01: np.ndarray
    F10: np.ndarray
    V01: np.ndarray
    V10: np.ndarray
    gram: np.ndarray | None = None

    @property
    def dim0(self) -> int:
        return self.F01.shape[1]

    @property
    def dim1(self) -> int:
        return self.F10.shape[1]

    @property
    def n(self) -> int:
        return self.dim0

    @property
    def p(self) -> int:
        return self.ctx.p

    def _full(self, A01, A10):
        n0, n1 = self.dim0, self.dim1
        M = np.zeros((n0 + n1, n0 + n1), dtype=np.int64)
        M[n0:, :n0] = A01
        M[:n0, n0:] = A10
        return M

    @property
    def F(self) -> TwistedMap:
        return TwistedMap(self.ctx, self._full(self.F01, self.F10), 1)

    @property
    def V(self) -> TwistedMap:
        return TwistedMap(self.ctx, self._full(self.V01, self.V10), -1)

    @property
    def J(self) -> np.ndarray:
        """Full alternating form on M0 + M1."""
        n = self.dim0
        J = np.zeros((2 * n, 2 * n), dtype=np.int64)
        J[:n, n:] = self.gram
        J[n:, :n] = self.ctx.neg_t[self.gram.T]
        return J

    def pair(self, x0, x1):
        """<x0, x1> for x0 in M0, x1 in M1."""
        c = self.ctx
        return int(c.sum(c.mul_t[np.asarray(x0), c.matvec(self.gram, x1)]))


# ---------------------------------------------------------------------------
# constructors
# ---------------------------------------------------------------------------


def _ctx(p, ctx):
    return ctx if ctx is not None else FieldCtx(p, 1)


def make_superspecial(m: int, p: int = 3, ctx: FieldCtx | None = None) -> DSpace:
    """m copies of S: Fg = -h, Vg = h, <g, h> = 1."""
    if m < 0:
        raise InvalidParams("m must be >= 0")
    c = _ctx(p, ctx)
    I = np.eye(m, dtype=np.int64)
    Z = np.zeros((m, m), dtype=np.int64)
    return DSpace(c, c.neg_t[I], Z, I.copy(), Z.copy(), I.copy())


def make_braid(n: int, p: int = 3, ctx: FieldCtx | None = None) -> DSpace:
    """Braid of length n reduced mod p."""
    if n < 1:
        raise InvalidParams("braid length must be >= 1")
    c = _ctx(p, ctx)
    F01 = np.zeros((n, n), dtype=np.int64)
    F10 = np.zeros((n, n), dtype=np.int64)
    V01 = np.zeros((n, n), dtype=np.int64)
    V10 = np.zeros((n, n), dtype=np.int64)
    for i in range(1, n):
        V01[i, i - 1] = 1  # V e_i = f_{i+1}
        F01[i - 1, i] = 1  # F e_{i+1} = f_i
    V10[0, n - 1] = 1  # V f_n = e_1
    F10[n - 1, 0] = c.from_int((-1) ** n)  # F f_1 = (-1)^n e_n
    gram = np.diag([c.from_int((-1) ** i) for i in range(n)]).astype(np.int64)
    return DSpace(c, F01, F10, V01, V10, gram)


def _block_diag(A, B):
    out = np.zeros((A.shape[0] + B.shape[0], A.shape[1] + B.shape[1]), dtype=np.int64)
    out[: A.shape[0], : A.shape[1]] = A
    out[A.shape[0]:, A.shape[1]:] = B
    return out


def direct_sum(a: DSpace, b: DSpace) -> DSpace:
    if a.ctx != b.ctx:
        raise ValueError("direct sum needs a common field")
    gram = None
    if a.gram is not None and b.gram is not None:
        gram = _block_diag(a.gram, b.gram)
    return DSpace(a.ctx, _block_diag(a.F01, b.F01), _block_diag(a.F10, b.F10),
                  _block_diag(a.V01, b.V01), _block_diag(a.V10, b.V10), gram)


def reference_space(rho: int, n: int, p: int = 3, ctx: FieldCtx | None = None) -> DSpace:
    """B(rho) + S^(n-rho)."""
    if not 1 <= rho <= n:
        raise InvalidParams(f"need 1 <= rho <= n, got rho={rho}, n={n}")
    c = _ctx(p, ctx)
    sp = make_braid(rho, ctx=c)
    if rho < n:
        sp = direct_sum(sp, make_superspecial(n - rho, ctx=c))
    return sp


# ---------------------------------------------------------------------------
# invariants and base change
# ---------------------------------------------------------------------------


def invariant_failures(sp: DSpace) -> list[str]:
    c = sp.ctx
    bad = []
    mm = c.matmul
    # F V = 0 and V F = 0 in each degree; sigma twists do not affect vanishing
    for name, A, B, tw in [("F10 V01", sp.F10, sp.V01, 1), ("F01 V10", sp.F01, sp.V10, 1),
                           ("V10 F01", sp.V10, sp.F01, -1), ("V01 F10", sp.V01, sp.F10, -1)]:
        if np.any(mm(A, c.frob(B, tw))):
            bad.append(f"{name} != 0")
    if sp.gram is not None:
        if rank(c, sp.gram) < sp.dim0 or sp.dim0 != sp.dim1:
            bad.append("pairing is not perfect")
        F, V, J = sp.F.matrix, sp.V.matrix, sp.J
        lhs = mm(c.transpose(F), J)
        rhs = mm(c.frob(J, 1), c.frob(V, 1))
        if not np.array_equal(lhs, rhs):
            bad.append("<Fx, y> != <x, Vy>^sigma")
    return bad


def check_invariants(sp: DSpace) -> DSpace:
    bad = invariant_failures(sp)
    if bad:
        raise InvariantViolation("; ".join(bad))
    return sp


def signature(sp: DSpace) -> Signature:
    c = sp.ctx
    return Signature(sp.dim0 - rank(c, sp.V10), sp.dim1 - rank(c, sp.V01))


def base_change(sp: DSpace, P0, P1) -> DSpace:
    """Space in the new bases given by the columns of P0 (of M0) and P1 (of M1)."""
    c = sp.ctx
    mm = c.matmul
    P0i, P1i = mat_inv(c, P0), mat_inv(c, P1)
    gram = None if sp.gram is None else mm(mm(c.transpose(P0), sp.gram), P1)
    return DSpace(c,
                  mm(mm(P1i, sp.F01), c.frob(P0, 1)),
                  mm(mm(P0i, sp.F10), c.frob(P1, 1)),
                  mm(mm(P1i, sp.V01), c.frob(P0, -1)),
                  mm(mm(P0i, sp.V10), c.frob(P1, -1)),
                  gram)


def random_invertible(ctx: FieldCtx, n: int, rng) -> np.ndarray:
    while True:
        A = rng.integers(0, ctx.q, size=(n, n)).astype(np.int64)
        if rank(ctx, A) == n:
            return A


def random_symplectic_base_change(sp: DSpace, rng) -> tuple[DSpace, np.ndarray, np.ndarray]:
    """Random graded base change keeping the Gram matrix fixed."""
    c = sp.ctx
    P0 = random_invertible(c, sp.dim0, rng)
    G = sp.gram
    P1 = c.matmul(c.matmul(mat_inv(c, G), mat_inv(c, c.transpose(P0))), G)
    return base_change(sp, P0, P1), P0, P1


def extend(sp: DSpace, big: FieldCtx) -> DSpace:
    if big == sp.ctx:
        return sp
    emb = sp.ctx.embedding_into(big)
    g = None if sp.gram is None else emb[sp.gram]
    return DSpace(big, emb[sp.F01], emb[sp.F10], emb[sp.V01], emb[sp.V10], g)


def field_for(sp: DSpace, k: int) -> FieldCtx:
    """F_{p^{2k}}, checking the space's field embeds."""
    if (2 * k) % sp.ctx.d:
        raise InvalidParams(f"F_{{p^{sp.ctx.d}}} does not embed into F_{{p^{2 * k}}}")
    return FieldCtx(sp.p, 2 * k)


def restrict(sp: DSpace, B0, B1, gram: bool = True) -> DSpace:
    """Sub-space spanned by the columns of B0 (in M0) and B1 (in M1)."""
    c = sp.ctx

    def coords(B, Y):
        cols = []
        for j in range(Y.shape[1]):
            x = solve(c, B, Y[:, j])
            if x is None:
                raise InvariantViolation("subspace is not stable under F and V")
            cols.append(x)
        return np.array(cols, dtype=np.int64).T.reshape(B.shape[1], Y.shape[1])

    mm = c.matmul
    F01 = coords(B1, mm(sp.F01, c.frob(B0, 1)))
    F10 = coords(B0, mm(sp.F10, c.frob(B1, 1)))
    V01 = coords(B1, mm(sp.V01, c.frob(B0, -1)))
    V10 = coords(B0, mm(sp.V10, c.frob(B1, -1)))
    g = mm(mm(c.transpose(B0), sp.gram), B1) if gram and sp.gram is not None else None
    return DSpace(c, F01, F10, V01, V10, g)


# ---------------------------------------------------------------------------
# fingerprint and classification
# ---------------------------------------------------------------------------


def _canon(ctx, U, n):
    U = np.asarray(U, dtype=np.int64).reshape(-1, n)
    if U.shape[0] == 0:
        return np.zeros((0, n), dtype=np.int64)
    return row_basis(ctx, U)


def _graded_ops(sp: DSpace):
    """F and V^-1 on a subspace of one graded piece; degree i goes to degree 1 - i."""
    c = sp.ctx
    dims = (sp.dim0, sp.dim1)
    Fb = (sp.F01, sp.F10)
    Vb = (sp.V01, sp.V10)

    def F(i, X):
        return _canon(c, c.matmul(c.frob(X, 1), c.transpose(Fb[i])), dims[1 - i])

    def Vinv(i, X):
        # {y in degree 1 - i : V y in X}
        return _canon(c, c.frob(preimage(c, Vb[1 - i], X, dims[1 - i]), 1), dims[1 - i])

    return F, Vinv


def canonical_pieces(sp: DSpace, cap: int = 500) -> tuple[list, list]:
    """Canonical subspaces of M0 and of M1.

    Starting from 0 and the full pieces, close under F, V^-1 (which swap the
    degrees), sums and intersections.  The graded canonical subspaces are
    exactly the products X0 + X1 of one piece from each list.
    """
    c = sp.ctx
    dims = (sp.dim0, sp.dim1)
    F, Vinv = _graded_ops(sp)
    found = ({}, {})
    queue = []

    def push(i, X):
        key = (X.shape[0], X.tobytes())
        if key not in found[i]:
            found[i][key] = X
            queue.append((i, X))
            if len(found[0]) + len(found[1]) > cap:
                raise CapExceeded(f"more than {cap} canonical subspaces")

    for i in (0, 1):
        push(i, np.zeros((0, dims[i]), dtype=np.int64))
        push(i, np.eye(dims[i], dtype=np.int64))
    done = ([], [])
    while queue:
        i, X = queue.pop(0)
        push(1 - i, F(i, X))
        push(1 - i, Vinv(i, X))
        for Y in done[i]:
            push(i, _canon(c, np.vstack([X, Y]), dims[i]))
            push(i, _canon(c, intersect(c, X, Y, dims[i]), dims[i]))
        done[i].append(X)
    return list(found[0].values()), list(found[1].values())


def canonical_subspaces(sp: DSpace) -> list:
    """Graded canonical subspaces as pairs (rows in M0, rows in M1)."""
    L0, L1 = canonical_pieces(sp)
    return [(X0, X1) for X0 in L0 for X1 in L1]


def canonical_fingerprint(sp: DSpace) -> tuple:
    """Sorted multiset over canonical X of (dims X, dims F(X), dims V^-1(X))."""
    F, Vinv = _graded_ops(sp)
    L0, L1 = canonical_pieces(sp)
    d0 = [(X.shape[0], F(0, X).shape[0], Vinv(0, X).shape[0]) for X in L0]
    d1 = [(X.shape[0], F(1, X).shape[0], Vinv(1, X).shape[0]) for X in L1]
    # F(X0 + X1) = F(X1) + F(X0), so the M0 part of F(X) comes from X1
    return tuple(sorted((a[0], b[0], b[1], a[1], b[2], a[2]) for a in d0 for b in d1))


@lru_cache(maxsize=None)
def reference_fingerprints(n: int, p: int) -> dict:
    return {rho: canonical_fingerprint(reference_space(rho, n, p)) for rho in range(1, n + 1)}


def classify(sp: DSpace, use_fingerprint: bool = True, k_max: int = EXTENSION_BOUND) -> int:
    """rho with sp isomorphic to B(rho) + S^(n - rho)."""
    n = sp.n
    if signature(sp).as_tuple() != (n - 1, 1):
        raise UnclassifiableInput(f"signature {signature(sp).as_tuple()} is not ({n - 1}, 1)")
    if use_fingerprint:
        fp = canonical_fingerprint(sp)
        hits = [rho for rho, ref in reference_fingerprints(n, sp.p).items() if ref == fp]
        if len(hits) == 1:
            return hits[0]
        candidates = hits or list(range(1, n + 1))
    else:
        candidates = list(range(1, n + 1))
    k0 = math.lcm(2, sp.ctx.d) // 2
    for k in range(k0, k_max + 1, k0):
        for rho in candidates:
            if find_graded_isomorphism(sp, reference_space(rho, n, sp.p), k) is not None:
                return rho
    raise UnclassifiableInput("no reference space is isomorphic to the input")


def is_supersingular(sp: DSpace) -> bool:
    return classify(sp) % 2 == 1


# ---------------------------------------------------------------------------
# Hom and Isom
# ---------------------------------------------------------------------------


def hom_space(src: DSpace, dst: DSpace, k: int):
    """F_p-solution space of graded maps commuting with F and V over F_{p^{2k}}."""
    big = field_for(src, k)
    field_for(dst, k)
    a, b = extend(src, big), extend(dst, big)
    neg = big.neg_t
    I0, I1 = np.eye(b.dim0, dtype=np.int64), np.eye(b.dim1, dtype=np.int64)
    J0, J1 = np.eye(a.dim0, dtype=np.int64), np.eye(a.dim1, dtype=np.int64)
    # unknowns: Phi0 (dst0 x src0) = var 0, Phi1 (dst1 x src1) = var 1
    eqs = [
        [Term(I1, 1, 0, a.F01), Term(neg[b.F01], 0, 1, J0)],
        [Term(I0, 0, 0, a.F10), Term(neg[b.F10], 1, 1, J1)],
        [Term(I1, 1, 0, a.V01), Term(neg[b.V01], 0, -1, J0)],
        [Term(I0, 0, 0, a.V10), Term(neg[b.V10], 1, -1, J1)],
    ]
    return semilinear_solve(big, [(b.dim0, a.dim0), (b.dim1, a.dim1)], eqs)


def hom_gd_count(src: DSpace, dst: DSpace, k: int) -> int:
    return hom_space(src, dst, k).count


class _Affine:
    """Affine subspace t0 + span(K) of F_p^s."""

    def __init__(self, prime: FieldCtx, t0, K):
        self.prime, self.t0, self.K = prime, t0, K

    def constrain(self, M, b):
        """Intersect with {t : t M = b}; None if empty."""
        p = self.prime.p
        A = (self.K @ M) % p
        rhs = (np.asarray(b) - self.t0 @ M) % p
        if self.K.shape[0] == 0:
            return self if not np.any(rhs) else None
        z = solve(self.prime, A.T, rhs)
        if z is None:
            return None
        N = nullspace(self.prime, A.T, ncols=self.K.shape[0])
        return _Affine(self.prime, (self.t0 + z @ self.K) % p, (N @ self.K) % p)

    def split(self, Bc):
        """Fibres of t -> t Bc: (offset direction rows Z K, kernel rows N K)."""
        p = self.prime.p
        k = self.K.shape[0]
        if k == 0:
            return np.zeros((0, self.K.shape[1]), dtype=np.int64), self.K
        A = (self.K @ Bc) % p
        R, piv = rref(self.prime, np.hstack([A, np.eye(k, dtype=np.int64)]))
        rho = sum(1 for c in piv if c < A.shape[1])
        Z, N = R[:rho, A.shape[1]:], R[rho:, A.shape[1]:]
        return (Z @ self.K) % p, (N @ self.K) % p


def _branches(p: int, rho: int, rng, tries: int):
    """Digit vectors in F_p^rho: all of them in order, or at most `tries` random ones."""
    if rng is None:
        yield from itertools.product(range(p), repeat=rho)
        return
    total = p**rho
    if total <= 4 * tries:
        for v in rng.permutation(total)[:tries]:
            yield [(int(v) // p**i) % p for i in range(rho)]
        return
    for _ in range(tries):
        yield rng.integers(0, p, size=rho)


def _iso_search(sp1: DSpace, sp2: DSpace, k: int, first: bool = False, collect: bool = False,
                seed: int = 0, tries: int = 24):
    """Depth-first count of pairing-preserving isomorphisms sp1 -> sp2 over F_{p^{2k}}.

    Columns are fixed in the order e1, f1, e2, f2, ...; each choice turns the
    pairing conditions on later columns into F_p-linear constraints.  With
    first=True the branches are sampled at random (at most `tries` per level),
    which makes the search fast but incomplete.
    """
    if sp1.gram is None or sp2.gram is None:
        raise InvalidParams("isomorphism search needs unitary spaces")
    if (sp1.dim0, sp1.dim1) != (sp2.dim0, sp2.dim1):
        return 0, []
    big = field_for(sp1, k)
    field_for(sp2, k)
    a, b = extend(sp1, big), extend(sp2, big)
    H = hom_space(a, b, k)
    if H.dim != hom_space(b, b, k).dim:
        # an isomorphism would identify Hom(sp1, sp2) with End(sp2)
        return 0, []
    n, D, p = a.dim0, big.d, big.p
    prime = FieldCtx(p, 1)
    s = H.dim
    off0, off1 = H.offsets

    def col(off, j):
        idx = [off + (r * n + j) * D + t for r in range(n) for t in range(D)]
        return H.basis[:, idx] if s else np.zeros((0, n * D), dtype=np.int64)

    cols = []
    for j in range(n):
        cols.append(("e", j, col(off0, j)))
        cols.append(("f", j, col(off1, j)))
    G, G2 = a.gram, b.gram
    MM = big.mul_matrices

    def functional(w):
        # F_p matrix (n*D x D) of u -> sum_a u_a w_a acting on row vectors
        return np.vstack([MM[int(x)].T for x in w])

    cap = max_enum()
    rng = np.random.default_rng(seed) if first else None
    nodes = [0]
    out = []
    total = [0]

    def rec(level, aff, placed):
        nodes[0] += 1
        if nodes[0] > cap:
            raise CapExceeded(f"isomorphism search exceeded {cap} nodes")
        kind, j, Bc = cols[level]
        # pairing constraints against already placed opposite-degree columns
        for (k2, j2), val in placed.items():
            if k2 == kind:
                continue
            if kind == "e":
                w = big.matvec(G2, val)
                target = G[j, j2]
            else:
                w = big.matvec(big.transpose(G2), val)
                target = G[j2, j]
            aff = aff.constrain(Bc @ functional(w), big.to_fp(np.array([target])))
            if aff is None:
                return
        Z, N = aff.split(Bc)
        rho = Z.shape[0]
        if level == len(cols) - 1 and not collect:
            total[0] += p**rho
            return
        same = [v for (k2, _), v in placed.items() if k2 == kind]
        for y in _branches(p, rho, rng, tries):
            t0 = (aff.t0 + np.asarray(y, dtype=np.int64) @ Z) % p if rho else aff.t0
            sub = _Affine(prime, t0, N)
            val = big.from_fp((t0 @ Bc) % p)
            if rank(big, np.array(same + [val])) <= len(same):
                continue  # images of a basis must stay independent
            nxt = dict(placed)
            nxt[(kind, j)] = val
            if level == len(cols) - 1:
                total[0] += 1
                Phi0, Phi1 = H.unpack((t0 @ H.basis) % p)
                out.append((Phi0, Phi1))
                if first:
                    return
            else:
                rec(level + 1, sub, nxt)
            if first and out:
                return

    if s == 0:
        return 0, []
    rec(0, _Affine(prime, np.zeros(s, dtype=np.int64), np.eye(s, dtype=np.int64)), {})
    return total[0], out


def isom_count(sp1: DSpace, sp2: DSpace, k: int) -> int:
    return _iso_search(sp1, sp2, k)[0]


def automorphisms(sp: DSpace, k: int) -> list:
    """All unitary automorphisms over F_{p^{2k}} as (Phi0, Phi1) code matrices."""
    return _iso_search(sp, sp, k, collect=True)[1]


def find_isomorphism(sp1: DSpace, sp2: DSpace, k: int, restarts: int = 8):
    """A unitary isomorphism over F_{p^{2k}} found by randomized search, or None.

    None is not a proof of non-isomorphism; isom_count is the exhaustive check.
    """
    big = field_for(sp1, k)
    a, b = extend(sp1, big), extend(sp2, big)
    for seed in range(restarts):
        try:
            found = _iso_search(sp1, sp2, k, first=True, collect=True, seed=seed)[1]
        except CapExceeded:
            continue
        if found:
            Phi0, Phi1 = found[0]
            if not is_isomorphism(a, b, Phi0, Phi1):
                raise InvariantViolation("search returned a map that is not an isomorphism")
            return Phi0, Phi1
        if _iso_search_empty(sp1, sp2, k):
            return None
    return None


def find_graded_isomorphism(sp1: DSpace, sp2: DSpace, k: int, samples: int = 400, seed: int = 0):
    """An invertible graded Dieudonne map sp1 -> sp2 over F_{p^{2k}}, or None.

    Exhaustive when Hom has at most `samples` points, random sampling otherwise.
    """
    if (sp1.dim0, sp1.dim1) != (sp2.dim0, sp2.dim1):
        return None
    big = field_for(sp1, k)
    a, b = extend(sp1, big), extend(sp2, big)
    H = hom_space(a, b, k)
    if H.dim != hom_space(b, b, k).dim:
        return None
    n0, n1 = a.dim0, a.dim1
    if H.count <= samples:
        points = (H.point(t) for t in itertools.product(range(big.p), repeat=H.dim))
    else:
        rng = np.random.default_rng(seed)
        points = (H.point(rng.integers(0, big.p, size=H.dim)) for _ in range(samples))
    for Phi0, Phi1 in points:
        if rank(big, Phi0) == n0 and rank(big, Phi1) == n1:
            return Phi0, Phi1
    return None


def _iso_search_empty(sp1: DSpace, sp2: DSpace, k: int) -> bool:
    """Cheap certificate that no isomorphism exists (Hom dimension mismatch)."""
    big = field_for(sp1, k)
    a, b = extend(sp1, big), extend(sp2, big)
    return hom_space(a, b, k).dim != hom_space(b, b, k).dim


def is_isomorphism(a: DSpace, b: DSpace, Phi0, Phi1) -> bool:
    c = a.ctx
    mm = c.matmul
    ok = (np.array_equal(mm(Phi1, a.F01), mm(b.F01, c.frob(Phi0, 1)))
          and np.array_equal(mm(Phi0, a.F10), mm(b.F10, c.frob(Phi1, 1)))
          and np.array_equal(mm(Phi1, a.V01), mm(b.V01, c.frob(Phi0, -1)))
          and np.array_equal(mm(Phi0, a.V10), mm(b.V10, c.frob(Phi1, -1))))
    if ok and a.gram is not None:
        ok = np.array_equal(mm(mm(c.transpose(Phi0), b.gram), Phi1), a.gram)
    return ok


# ---------------------------------------------------------------------------
# automorphisms of the braid
# ---------------------------------------------------------------------------


def dim_aut_formula(rho: int, n: int) -> int:
    if not 1 <= rho <= n:
        raise InvalidParams(f"need 1 <= rho <= n, got rho={rho}, n={n}")
    return rho // 2 - 1 if rho % 2 == 0 else n - (rho + 1) // 2


def braid_root_order(n: int, p: int) -> int:
    return p**n - 1 if n % 2 == 0 else p**n + 1


def braid_aut_count_formula(n: int, p: int, k: int) -> int:
    q = p ** (2 * k)
    return math.gcd(braid_root_order(n, p), q - 1) * q ** dim_aut_formula(n, n)


def braid_generators(n: int) -> list[int]:
    """1-based indices j of the generators f_j of the free part N."""
    start = 2 if n % 2 == 1 else 3
    return list(range(start, n, 2))


@dataclass(frozen=True)
class BraidAutParams:
    alpha: int
    m_coeffs: tuple = field(default_factory=tuple)


def braid_aut_from_params(n: int, params: BraidAutParams, ctx: FieldCtx):
    """The automorphism of B(n) over ctx with phi(e1) = alpha e1, phi(f1) = alpha^-1 (f1 + m)."""
    c = ctx
    r = braid_root_order(n, c.p)
    alpha = int(params.alpha)
    if alpha == 0 or c.pow(alpha, r) != 1:
        raise InvalidParams(f"alpha must satisfy alpha^{r} = 1")
    gens = braid_generators(n)
    if len(params.m_coeffs) != len(gens):
        raise InvalidParams(f"expected {len(gens)} coefficients of m")
    sp = make_braid(n, ctx=c)
    Phi0 = np.zeros((n, n), dtype=np.int64)
    Phi1 = np.zeros((n, n), dtype=np.int64)
    Phi0[0, 0] = alpha
    m = np.zeros(n, dtype=np.int64)
    m[0] = 1
    for j, x in zip(gens, params.m_coeffs):
        m[j - 1] = int(x)
    Phi1[:, 0] = c.mul_t[c.inv(alpha), m]
    w = c.frob(c.matvec(sp.gram, Phi1[:, 0]), 1)
    A = np.vstack([sp.F01, w[None, :]])
    for i in range(n - 1):
        Phi1[:, i + 1] = c.matvec(sp.V01, c.frob(Phi0[:, i], -1))
        rhs = np.concatenate([Phi1[:, i], [0]])
        if rank(c, A) < n:
            raise InvariantViolation("recursion for phi(e_{i+1}) is not uniquely solvable")
        z = solve(c, A, rhs)
        if z is None:
            raise InvalidParams("parameters do not define an automorphism")
        Phi0[:, i + 1] = c.frob(z, -1)
    if not is_isomorphism(sp, sp, Phi0, Phi1):
        raise InvalidParams("parameters do not define an automorphism")
    return Phi0, Phi1


def extract_braid_params(n: int, Phi0, Phi1, ctx: FieldCtx) -> BraidAutParams:
    c = ctx
    alpha = int(Phi0[0, 0])
    if alpha == 0 or np.any(Phi0[1:, 0]):
        raise InvalidParams("phi(e1) is not a multiple of e1")
    m = c.mul_t[alpha, np.asarray(Phi1[:, 0])]
    gens = braid_generators(n)
    rest = [i for i in range(1, n) if i + 1 not in gens]
    if m[0] != 1 or np.any(m[rest]):
        raise InvalidParams("phi(f1) has components outside f1 + N")
    return BraidAutParams(alpha, tuple(int(m[j - 1]) for j in gens))


# ---------------------------------------------------------------------------
# splitting off superspecial summands
# ---------------------------------------------------------------------------


def _split_once(sp: DSpace):
    c = sp.ctx
    n = sp.dim0
    one = np.eye(1, dtype=np.int64)
    S = semilinear_solve(c, [(n, 1)], [[Term(sp.F01, 0, 1, one), Term(sp.V01, 0, -1, one)]])
    for (x,) in S.enumerate():
        x = x[:, 0]
        y = c.matvec(sp.V01, c.frob(x, -1))
        if sp.pair(x, y) != 0:
            B0 = nullspace(c, c.matvec(sp.gram, y)[None, :], ncols=n)
            B1 = nullspace(c, c.matvec(c.transpose(sp.gram), x)[None, :], ncols=n)
            return restrict(sp, B0.T.copy(), B1.T.copy())
    return None


def split_superspecial(sp: DSpace, k_max: int = EXTENSION_BOUND):
    """(core, m) with sp = core + S^m and core a braid; core lives over F_{p^{2k}}."""
    k0 = math.lcm(2, sp.ctx.d) // 2
    core, m = extend(sp, field_for(sp, k0)), 0
    while core.dim0 > 0:
        nxt = _split_once(core)
        if nxt is None:
            break
        core, m = nxt, m + 1
    if core.dim0 == 0 or classify(core) == core.dim0:
        return core, m
    for k in range(2 * k0, k_max + 1, k0):
        big = field_for(sp, k)
        core_k, m_k = extend(sp, big), 0
        while core_k.dim0 > 0:
            nxt = _split_once(core_k)
            if nxt is None:
                break
            core_k, m_k = nxt, m_k + 1
        if classify(core_k) == core_k.dim0:
            return core_k, m_k
    raise ExtensionBoundExceeded(f"no splitting vector found over F_p^(2k), k <= {k_max}")


# ---------------------------------------------------------------------------
# JSON
# ---------------------------------------------------------------------------


def to_json(sp: DSpace) -> dict:
    c = sp.ctx

    def enc(A):
        return [[list(c.coeffs(x)) for x in row] for row in np.asarray(A)]

    return {
        "kind": "space", "p": c.p, "field_degree": c.d, "modulus": list(c.modulus), "n": sp.dim0,
        "F": {"m0_to_m1": enc(sp.F01), "m1_to_m0": enc(sp.F10)},
        "V": {"m0_to_m1": enc(sp.V01), "m1_to_m0": enc(sp.V10)},
        "gram": enc(sp.gram) if sp.gram is not None else None,
    }


def from_json(obj) -> DSpace:
    if isinstance(obj, str):
        obj = json.loads(obj)
    mod = obj.get("modulus")
    c = FieldCtx(int(obj["p"]), int(obj.get("field_degree", 1)), tuple(mod) if mod else None)

    def dec(rows):
        out = np.array([[c.code(x if isinstance(x, list) else [x]) for x in row] for row in rows],
                       dtype=np.int64)
        return out.reshape(len(rows), -1) if rows else np.zeros((0, 0), dtype=np.int64)

    g = obj.get("gram")
    return DSpace(c, dec(obj["F"]["m0_to_m1"]), dec(obj["F"]["m1_to_m0"]),
                  dec(obj["V"]["m0_to_m1"]), dec(obj["V"]["m1_to_m0"]), dec(g) if g is not None else None)
