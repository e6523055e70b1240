"""Finite fields F_{p^d} and dense linear algebra over them.

Elements are stored as integer codes: the coefficient vector (least
significant first) of the reduced polynomial representative, packed in
base p.  All arithmetic goes through lookup tables, so matrices are plain
numpy integer arrays and every operation broadcasts.
"""
from __future__ import annotations

import itertools
from functools import cached_property, reduce

import numpy as np

from .errors import CapExceeded

TABLE_CAP = 729


def _is_prime(p: int) -> bool:
    return p > 1 and all(p % k for k in range(2, int(p**0.5) + 1))


def _polymod(a: list[int], f: list[int], p: int) -> list[int]:
    a = [c % p for c in a]
    df = len(f) - 1
    inv_lead = pow(f[-1], -1, p)
    while len(a) - 1 >= df and any(a):
        if a[-1] == 0:
            a.pop()
            continue
        c = a[-1] * inv_lead % p
        shift = len(a) - 1 - df
        for i, fc in enumerate(f):
            a[shift + i] = (a[shift + i] - c * fc) % p
        a.pop()
    while a and a[-1] == 0:
        a.pop()
    return a


def is_irreducible(f: tuple[int, ...], p: int) -> bool:
    """Trial division by every monic polynomial of degree <= deg(f)/2."""
    d = len(f) - 1
    for k in range(1, d // 2 + 1):
        for low in itertools.product(range(p), repeat=k):
            g = list(low) + [1]
            if not _polymod(list(f), g, p):
                return False
    return True


def find_modulus(p: int, d: int) -> tuple[int, ...]:
    """First monic irreducible of degree d, ordered by (c_{d-1}, ..., c_0)."""
    if d == 1:
        return (0, 1)
    for high in itertools.product(range(p), repeat=d):
        low = tuple(reversed(high))
        f = low + (1,)
        if low[0] != 0 and is_irreducible(f, p):
            return f
    raise ValueError(f"no irreducible polynomial of degree {d} over F_{p}")


class FieldCtx:
    """The field F_{p^d} = F_p[t]/(modulus)."""

    def __init__(self, p: int, d: int = 1, modulus: tuple[int, ...] | None = None):
        if not _is_prime(p) or p == 2:
            raise ValueError(f"p must be an odd prime, got {p}")
        if d < 1:
            raise ValueError("extension degree must be >= 1")
        self.p = p
        self.d = d
        self.q = p**d
        if modulus is None:
            modulus = find_modulus(p, d)
        modulus = tuple(int(c) % p for c in modulus)
        if len(modulus) != d + 1 or modulus[-1] != 1 or not is_irreducible(modulus, p):
            raise ValueError(f"{modulus} is not a monic irreducible of degree {d}")
        self.modulus = modulus
        if self.q > TABLE_CAP:
            raise CapExceeded(f"field of size {self.q} exceeds table cap {TABLE_CAP}")
        self._build_tables()

    def __repr__(self):
        return f"FieldCtx(p={self.p}, d={self.d})"

    def __eq__(self, other):
        return isinstance(other, FieldCtx) and (self.p, self.modulus) == (other.p, other.modulus)

    def __hash__(self):
        return hash((self.p, self.modulus))

    # -- codes <-> coefficients -------------------------------------------
    def coeffs(self, x) -> tuple[int, ...]:
        return tuple(int(c) for c in self.coeff_table[int(x)])

    def code(self, coeffs) -> int:
        coeffs = list(coeffs) + [0] * (self.d - len(coeffs))
        return sum((int(c) % self.p) * self.p**i for i, c in enumerate(coeffs[: self.d]))

    @property
    def gen(self) -> int:
        """The class of t (equal to p when d > 1)."""
        return self.code([0, 1]) if self.d > 1 else self.code([-self.modulus[0]])

    def _build_tables(self):
        p, d, q = self.p, self.d, self.q
        codes = np.arange(q)
        C = np.stack([(codes // p**i) % p for i in range(d)], axis=1)
        self.coeff_table = C
        weights = p ** np.arange(d)

        def pack(A):
            return (A % p) @ weights

        self.add_t = pack(C[:, None, :] + C[None, :, :])
        self.neg_t = pack(-C)
        # t^j for j < 2d-1 reduced mod the modulus
        powers = []
        for j in range(2 * d - 1):
            r = _polymod([0] * j + [1], list(self.modulus), p)
            powers.append(r + [0] * (d - len(r)))
        powers = np.array(powers, dtype=np.int64)
        conv = np.zeros((q, q, 2 * d - 1), dtype=np.int64)
        for i in range(d):
            for j in range(d):
                conv[:, :, i + j] += np.outer(C[:, i], C[:, j])
        self.mul_t = pack(conv @ powers)
        inv = np.zeros(q, dtype=np.int64)
        one = 1
        for a in range(1, q):
            inv[a] = int(np.nonzero(self.mul_t[a] == one)[0][0])
        self.inv_t = inv
        frob = codes.copy()
        base = codes.copy()
        for _ in range(p - 1):
            frob = self.mul_t[frob, base]
        self.frob_t = frob
        # frob_pow[k] is x -> x^(p^k), k = 0..d-1
        fp = [codes.copy()]
        for _ in range(d - 1):
            fp.append(frob[fp[-1]])
        self.frob_pow = np.stack(fp)

    # -- scalar / array arithmetic ------------------------------------------
    def add(self, a, b):
        return self.add_t[a, b]

    def sub(self, a, b):
        return self.add_t[a, self.neg_t[b]]

    def neg(self, a):
        return self.neg_t[a]

    def mul(self, a, b):
        return self.mul_t[a, b]

    def inv(self, a):
        a = np.asarray(a)
        if np.any(a == 0):
            raise ZeroDivisionError("inverse of 0 in a finite field")
        return self.inv_t[a]

    def pow(self, a, e: int) -> int:
        a = int(a)
        if e < 0:
            a, e = int(self.inv_t[a]), -e
        r = 1
        while e:
            if e & 1:
                r = int(self.mul_t[r, a])
            a = int(self.mul_t[a, a])
            e >>= 1
        return r

    def frob(self, a, k: int = 1):
        """x -> x^(p^k); k may be negative (sigma has order d)."""
        return self.frob_pow[k % self.d][a]

    def sum(self, A, axis=0):
        A = np.moveaxis(np.asarray(A), axis, 0)
        if A.shape[0] == 0:
            return np.zeros(A.shape[1:], dtype=np.int64)
        return reduce(lambda x, y: self.add_t[x, y], A)

    def elements(self):
        return range(self.q)

    def from_int(self, n: int) -> int:
        return n % self.p

    # -- matrices -------------------------------------------------------
    def matmul(self, A, B):
        A = np.asarray(A)
        B = np.asarray(B)
        if A.shape[-1] == 0:
            return np.zeros(A.shape[:-1] + B.shape[-1:], dtype=np.int64)
        prod = self.mul_t[A[..., :, :, None], B[..., None, :, :]]
        return self.sum(prod, axis=-2)

    def matvec(self, A, x):
        return self.matmul(A, np.asarray(x)[..., None])[..., 0]

    def eye(self, n: int):
        return np.eye(n, dtype=np.int64)

    def zeros(self, *shape):
        return np.zeros(shape, dtype=np.int64)

    def scal(self, c, A):
        return self.mul_t[c, np.asarray(A)]

    def madd(self, A, B):
        return self.add_t[np.asarray(A), np.asarray(B)]

    def msub(self, A, B):
        return self.add_t[np.asarray(A), self.neg_t[np.asarray(B)]]

    def transpose(self, A):
        return np.swapaxes(np.asarray(A), -1, -2)

    # -- restriction of scalars to F_p -------------------------------------
    @cached_property
    def mul_matrices(self):
        """mul_matrices[a] is the d x d F_p-matrix of y -> a*y on coefficients."""
        basis = [self.p**j for j in range(self.d)]
        cols = [self.coeff_table[self.mul_t[:, b]] for b in basis]
        return np.stack(cols, axis=2)

    @cached_property
    def frob_matrix(self):
        """d x d F_p-matrix of x -> x^p on coefficient vectors."""
        basis = [self.p**j for j in range(self.d)]
        return np.stack([self.coeff_table[self.frob_t[b]] for b in basis], axis=1)

    def to_fp(self, A):
        """Flatten an array of codes into F_p coordinates (last axis grows by d)."""
        A = np.asarray(A)
        return self.coeff_table[A].reshape(A.shape[:-1] + (A.shape[-1] * self.d,))

    def from_fp(self, X):
        X = np.asarray(X) % self.p
        X = X.reshape(X.shape[:-1] + (X.shape[-1] // self.d, self.d))
        return X @ (self.p ** np.arange(self.d))

    # -- subfields and extensions ------------------------------------------
    def extension(self, e: int) -> "FieldCtx":
        return FieldCtx(self.p, e)

    def embedding_into(self, other: "FieldCtx") -> np.ndarray:
        """Code map F_{p^d} -> other, sending t to the smallest root of the modulus."""
        if other.p != self.p or other.d % self.d:
            raise ValueError(f"{self} does not embed into {other}")
        if self.d == 1:
            return np.arange(self.p)
        x = np.arange(other.q)
        val = np.zeros(other.q, dtype=np.int64)
        for c in reversed(self.modulus):
            val = other.add_t[other.mul_t[val, x], c]
        theta = int(np.nonzero(val == 0)[0][0])
        pw = [1]
        for _ in range(self.d - 1):
            pw.append(int(other.mul_t[pw[-1], theta]))
        out = np.zeros(self.q, dtype=np.int64)
        for a in range(self.q):
            acc = 0
            for c, t in zip(self.coeffs(a), pw):
                acc = int(other.add_t[acc, other.mul_t[c, t]])
            out[a] = acc
        return out


# ---------------------------------------------------------------------------
# Gaussian elimination
# ---------------------------------------------------------------------------


def rref(ctx: FieldCtx, A):
    """Reduced row echelon form; returns (R, pivot_columns)."""
    R = np.array(A, dtype=np.int64, copy=True)
    if R.ndim != 2:
        raise ValueError("rref expects a matrix")
    rows, cols = R.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(R[r:, c])[0]
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            R[[r, i]] = R[[i, r]]
        R[r] = ctx.mul_t[ctx.inv_t[R[r, c]], R[r]]
        col = R[:, c].copy()
        col[r] = 0
        hit = np.nonzero(col)[0]
        if hit.size:
            R[hit] = ctx.add_t[R[hit], ctx.neg_t[ctx.mul_t[col[hit, None], R[r][None, :]]]]
        pivots.append(c)
        r += 1
    return R, pivots


def rank(ctx: FieldCtx, A) -> int:
    A = np.asarray(A)
    if A.size == 0:
        return 0
    return len(rref(ctx, A)[1])


def nullspace(ctx: FieldCtx, A, ncols: int | None = None):
    """Rows spanning {x : A x = 0}."""
    A = np.asarray(A, dtype=np.int64)
    if ncols is None:
        ncols = A.shape[1]
    if A.size == 0:
        return np.eye(ncols, dtype=np.int64)
    R, piv = rref(ctx, A)
    free = [c for c in range(ncols) if c not in piv]
    N = np.zeros((len(free), ncols), dtype=np.int64)
    for k, f in enumerate(free):
        N[k, f] = 1
        for i, pc in enumerate(piv):
            N[k, pc] = ctx.neg_t[R[i, f]]
    return N


def solve(ctx: FieldCtx, A, b):
    """One solution x of A x = b (None if inconsistent)."""
    A = np.asarray(A, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64).reshape(-1, 1)
    n = A.shape[1]
    if A.shape[0] == 0:
        return np.zeros(n, dtype=np.int64)
    R, piv = rref(ctx, np.hstack([A, b]))
    if n in piv:
        return None
    x = np.zeros(n, dtype=np.int64)
    for i, pc in enumerate(piv):
        x[pc] = R[i, n]
    return x


def mat_inv(ctx: FieldCtx, A):
    A = np.asarray(A, dtype=np.int64)
    n = A.shape[0]
    R, piv = rref(ctx, np.hstack([A, np.eye(n, dtype=np.int64)]))
    if piv[:n] != list(range(n)):
        raise ZeroDivisionError("matrix is singular")
    return R[:, n:]


def row_basis(ctx: FieldCtx, A):
    """Canonical basis (nonzero RREF rows) of the row space."""
    A = np.asarray(A, dtype=np.int64)
    if A.size == 0:
        return np.zeros((0, A.shape[1] if A.ndim == 2 else 0), dtype=np.int64)
    R, piv = rref(ctx, A)
    return R[: len(piv)]


def intersect(ctx: FieldCtx, U, W, n: int):
    """Row basis of span(U) ∩ span(W) inside F^n."""
    U = np.asarray(U, dtype=np.int64).reshape(-1, n)
    W = np.asarray(W, dtype=np.int64).reshape(-1, n)
    if U.shape[0] == 0 or W.shape[0] == 0:
        return np.zeros((0, n), dtype=np.int64)
    # a U = b W  <=>  [U; -W]^T [a; b] = 0
    M = np.vstack([U, ctx.neg_t[W]]).T
    K = nullspace(ctx, M)
    if K.shape[0] == 0:
        return np.zeros((0, n), dtype=np.int64)
    return row_basis(ctx, ctx.matmul(K[:, : U.shape[0]], U))


def preimage(ctx: FieldCtx, A, W, n: int):
    """Row basis of {x in F^n : A x in span(W)}."""
    A = np.asarray(A, dtype=np.int64)
    m = A.shape[0]
    W = np.asarray(W, dtype=np.int64).reshape(-1, m)
    H = nullspace(ctx, W, ncols=m) if W.shape[0] else np.eye(m, dtype=np.int64)
    if H.shape[0] == 0:
        return np.eye(n, dtype=np.int64)
    return nullspace(ctx, ctx.matmul(H, A), ncols=n)
