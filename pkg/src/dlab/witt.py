"""Truncated unramified Witt rings W_N(F_{p^d}) = (Z/p^N)[X]/(f).

f is the minimal polynomial of the Teichmueller lift of a generator of
F_{p^d}, so the Frobenius lift is exactly X -> X^p.  Elements are tuples of
d integers in [0, p^N); matrices are numpy object arrays of shape
(rows, cols, d) holding Python ints.
"""
from __future__ import annotations

from functools import cached_property

import numpy as np

from .errors import InsufficientPrecision
from .field import FieldCtx


def _vp(x: int, p: int, cap: int) -> int:
    if x == 0:
        return cap
    v = 0
    while x % p == 0:
        x //= p
        v += 1
    return min(v, cap)


class WittCtx:
    """W_N(F_{p^d}) with its Frobenius lift sigma."""

    def __init__(self, p: int, d: int = 1, N: int = 8, field: FieldCtx | None = None):
        if N < 1:
            raise ValueError("precision must be >= 1")
        self.field = field if field is not None else FieldCtx(p, d)
        self.p, self.d, self.N = p, self.field.d, N
        self.mod = p**N
        self.modulus = self._teichmuller_modulus()

    def __repr__(self):
        return f"WittCtx(p={self.p}, d={self.d}, N={self.N})"

    def with_precision(self, N: int) -> "WittCtx":
        return WittCtx(self.p, self.d, N, field=self.field)

    # -- construction of the modulus --------------------------------------
    def _teichmuller_modulus(self) -> tuple[int, ...]:
        p, d, M = self.p, self.d, self.mod
        if d == 1:
            return (0, 1)
        g = list(self.field.modulus)

        def mulmod(a, b):
            prod = [0] * (2 * d - 1)
            for i, x in enumerate(a):
                if x:
                    for j, y in enumerate(b):
                        prod[i + j] += x * y
            for k in range(2 * d - 2, d - 1, -1):
                c = prod[k]
                if c:
                    for i in range(d + 1):
                        prod[k - d + i] -= c * g[i]
            return [c % M for c in prod[:d]]

        def powmod(a, e):
            r = [1] + [0] * (d - 1)
            while e:
                if e & 1:
                    r = mulmod(r, a)
                a = mulmod(a, a)
                e >>= 1
            return r

        x = [0, 1] + [0] * (d - 2)
        tau = powmod(x, self.field.q ** (self.N - 1))
        # prod_{i<d} (Y - tau^{p^i}) with coefficients in (Z/p^N)[x]/(g)
        poly = [[1] + [0] * (d - 1)]
        conj = tau
        for _ in range(d):
            new = [[0] * d for _ in range(len(poly) + 1)]
            for i, c in enumerate(poly):
                new[i + 1] = [(u + v) % M for u, v in zip(new[i + 1], c)]
                t = mulmod(c, conj)
                new[i] = [(u - v) % M for u, v in zip(new[i], t)]
            poly = new
            conj = powmod(conj, p)
        coeffs = []
        for c in poly:
            if any(c[1:]):
                raise ArithmeticError("Teichmueller conjugates do not give a Z/p^N polynomial")
            coeffs.append(c[0])
        return tuple(coeffs)

    # -- elements -----------------------------------------------------------
    @property
    def zero(self):
        return (0,) * self.d

    @property
    def one(self):
        return (1,) + (0,) * (self.d - 1)

    @property
    def gen(self):
        """The Teichmueller generator X (for d = 1: the integer 0's lift is meaningless; returns 1)."""
        return (0, 1) + (0,) * (self.d - 2) if self.d > 1 else self.one

    def elem(self, x) -> tuple[int, ...]:
        if isinstance(x, (int, np.integer)):
            return ((int(x) % self.mod),) + (0,) * (self.d - 1)
        x = tuple(int(c) % self.mod for c in x)
        return x + (0,) * (self.d - len(x))

    def add(self, a, b):
        return tuple((x + y) % self.mod for x, y in zip(a, b))

    def sub(self, a, b):
        return tuple((x - y) % self.mod for x, y in zip(a, b))

    def neg(self, a):
        return tuple((-x) % self.mod for x in a)

    @cached_property
    def _reduction(self):
        """X^k mod f as coefficient tuples, k < 2d - 1."""
        d, f, M = self.d, self.modulus, self.mod
        rows = []
        cur = [0] * d
        for k in range(2 * d - 1):
            if k < d:
                cur = [0] * d
                cur[k] = 1
            else:
                # X * previous
                prev = rows[-1]
                top = prev[-1]
                cur = [0] + list(prev[:-1])
                cur = [(c - top * f[i]) % M for i, c in enumerate(cur)]
            rows.append(tuple(cur))
        return rows

    def mul(self, a, b):
        d, M = self.d, self.mod
        if d == 1:
            return ((a[0] * b[0]) % M,)
        prod = [0] * (2 * d - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    prod[i + j] += x * y
        out = [0] * d
        for k, c in enumerate(prod):
            if c:
                for i, r in enumerate(self._reduction[k]):
                    out[i] += c * r
        return tuple(c % M for c in out)

    def pow(self, a, e: int):
        r = self.one
        while e:
            if e & 1:
                r = self.mul(r, a)
            a = self.mul(a, a)
            e >>= 1
        return r

    def valuation(self, a) -> int:
        """p-adic valuation, capped at N (N means zero at this precision)."""
        return min(_vp(c, self.p, self.N) for c in a)

    def is_unit(self, a) -> bool:
        return any(c % self.p for c in a)

    def inv(self, a):
        if not self.is_unit(a):
            raise ZeroDivisionError(f"{a} is not a unit")
        order = (self.field.q - 1) * self.field.q ** (self.N - 1)
        return self.pow(a, order - 1)

    def div_p(self, a, k: int):
        """a / p^k for a divisible by p^k; top k digits of the result are unknown (set to 0)."""
        pk = self.p**k
        if any(c % pk for c in a):
            raise ArithmeticError(f"{a} is not divisible by p^{k}")
        return tuple((c // pk) % self.mod for c in a)

    def p_power(self, k: int):
        return self.elem(self.p**k)

    # -- Frobenius -----------------------------------------------------------
    @cached_property
    def sigma_matrix(self):
        """Column i = coefficients of X^(i p)."""
        cols = []
        Xp = self.pow(self.gen, self.p) if self.d > 1 else self.one
        cur = self.one
        for _ in range(self.d):
            cols.append(cur)
            cur = self.mul(cur, Xp)
        return [[cols[i][j] for i in range(self.d)] for j in range(self.d)]

    def frob(self, a, k: int = 1):
        """sigma^k(a); sigma has order d."""
        k %= self.d
        for _ in range(k):
            S = self.sigma_matrix
            a = tuple(sum(S[j][i] * a[i] for i in range(self.d)) % self.mod for j in range(self.d))
        return a

    # -- reduction / lifting ---------------------------------------------------
    def reduce(self, a) -> int:
        return self.field.code([c % self.p for c in a])

    def lift(self, code) -> tuple[int, ...]:
        return self.elem(self.field.coeffs(code))

    def teichmuller(self, code):
        a = self.lift(code)
        return self.pow(a, self.field.q ** (self.N - 1))

    def elements(self):
        """All p^(dN) elements (only for small rings)."""
        import itertools

        for t in itertools.product(range(self.mod), repeat=self.d):
            yield tuple(t)

    # -- matrices ---------------------------------------------------------------
    def matrix(self, rows) -> np.ndarray:
        """Build an object matrix of shape (r, c, d) from nested rows of ints or tuples."""
        rows = list(rows)
        r = len(rows)
        c = len(rows[0]) if r else 0
        A = np.zeros((r, c, self.d), dtype=object)
        A[...] = 0
        for i, row in enumerate(rows):
            for j, x in enumerate(row):
                A[i, j, :] = self.elem(x)
        return A

    def zeros(self, r, c):
        A = np.zeros((r, c, self.d), dtype=object)
        A[...] = 0
        return A

    def eye(self, n):
        A = self.zeros(n, n)
        for i in range(n):
            A[i, i, 0] = 1
        return A

    def entry(self, A, i, j):
        return tuple(int(x) for x in A[i, j])

    def madd(self, A, B):
        return (A + B) % self.mod

    def msub(self, A, B):
        return (A - B) % self.mod

    def scal(self, c, A):
        c = self.elem(c)
        out = self.zeros(*A.shape[:2])
        for i in range(A.shape[0]):
            for j in range(A.shape[1]):
                out[i, j] = self.mul(c, tuple(A[i, j]))
        return out

    def matmul(self, A, B):
        d = self.d
        r, k = A.shape[:2]
        c = B.shape[1]
        out = self.zeros(r, c)
        if k == 0:
            return out
        for s in range(d):
            for t in range(d):
                P = (A[:, :, s] @ B[:, :, t]) % self.mod
                red = self._reduction[s + t]
                for i, coef in enumerate(red):
                    if coef:
                        out[:, :, i] = out[:, :, i] + P * coef
        return out % self.mod

    def frob_mat(self, A, k: int = 1):
        k %= self.d
        if k == 0:
            return A.copy()
        out = A.copy()
        S = np.array(self.sigma_matrix, dtype=object)
        for _ in range(k):
            out = (out @ S.T) % self.mod
        return out

    def transpose(self, A):
        return np.transpose(A, (1, 0, 2)).copy()

    def reduce_mat(self, A) -> np.ndarray:
        """Entrywise reduction mod p, as field codes."""
        weights = [self.p**i for i in range(self.d)]
        out = np.zeros(A.shape[:2], dtype=np.int64)
        for i in range(A.shape[0]):
            for j in range(A.shape[1]):
                out[i, j] = sum((int(A[i, j, t]) % self.p) * weights[t] for t in range(self.d))
        return out

    def lift_mat(self, A) -> np.ndarray:
        A = np.asarray(A)
        out = self.zeros(*A.shape)
        for i in range(A.shape[0]):
            for j in range(A.shape[1]):
                out[i, j] = self.lift(A[i, j])
        return out

    def mat_valuation(self, A) -> int:
        if A.size == 0:
            return self.N
        return min(self.valuation(tuple(A[i, j])) for i in range(A.shape[0]) for j in range(A.shape[1]))

    def is_zero_mat(self, A) -> bool:
        return not np.any(A % self.mod)

    def mat_inv(self, A):
        """Inverse of a matrix in GL_n(W_N) by Gauss-Jordan with unit pivots."""
        n = A.shape[0]
        M = np.concatenate([A % self.mod, self.eye(n)], axis=1)
        for c in range(n):
            piv = next((r for r in range(c, n) if self.is_unit(tuple(M[r, c]))), None)
            if piv is None:
                raise ZeroDivisionError("matrix is not invertible over W")
            if piv != c:
                M[[c, piv]] = M[[piv, c]]
            u = self.inv(tuple(M[c, c]))
            M[c] = self._row_scale(u, M[c])
            for r in range(n):
                if r != c and any(int(x) for x in M[r, c]):
                    t = tuple(M[r, c])
                    M[r] = (M[r] - self._row_scale(t, M[c])) % self.mod
        return M[:, n:].copy()

    def _row_scale(self, c, row):
        out = np.zeros_like(row)
        out[...] = 0
        for j in range(row.shape[0]):
            out[j] = self.mul(c, tuple(row[j]))
        return out


def smith_over_witt(ctx: WittCtx, M, partial: bool = False) -> tuple[int, ...]:
    """Elementary divisor exponents of a matrix over W_N, descending.

    Raises InsufficientPrecision when a block vanishes modulo p^N, since its
    divisors cannot be certified below the precision.  With partial=True the
    exponents certified before that point are returned instead, which is the
    right answer for a rectangular matrix of generators.
    """
    A = np.array(M, dtype=object) % ctx.mod
    r, c = A.shape[:2]
    exps = []
    for k in range(min(r, c)):
        best = None
        for i in range(k, r):
            for j in range(k, c):
                v = ctx.valuation(tuple(A[i, j]))
                if best is None or v < best[0]:
                    best = (v, i, j)
        v, i, j = best
        if v >= ctx.N:
            if partial:
                break
            raise InsufficientPrecision(
                f"remaining {r - k}x{c - k} block vanishes mod p^{ctx.N}; raise the precision"
            )
        A[[k, i]] = A[[i, k]]
        A[:, [k, j]] = A[:, [j, k]]
        piv = tuple(A[k, k])
        u_inv = ctx.inv(ctx.div_p(piv, v))
        for rr in range(k + 1, r):
            e = tuple(A[rr, k])
            if any(e):
                qt = ctx.mul(ctx.div_p(e, v), u_inv)
                A[rr] = (A[rr] - ctx._row_scale(qt, A[k])) % ctx.mod
        for cc in range(k + 1, c):
            e = tuple(A[k, cc])
            if any(e):
                qt = ctx.mul(ctx.div_p(e, v), u_inv)
                A[:, cc] = (A[:, cc] - ctx._row_scale(qt, A[:, k])) % ctx.mod
        exps.append(v)
    return tuple(sorted(exps, reverse=True))
