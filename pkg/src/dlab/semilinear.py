"""Twisted (semilinear) matrix algebra and restriction of scalars to F_p."""
from __future__ import annotations

import itertools
import os
from dataclasses import dataclass, field

import numpy as np

from .errors import CapExceeded
from .field import FieldCtx, nullspace
from .witt import WittCtx

MAX_UNKNOWNS = 6000


def max_enum(default: int = 200_000) -> int:
    """Enumeration cap, overridable by DLAB_MAX_ENUM."""
    env = os.environ.get("DLAB_MAX_ENUM")
    return int(env) if env else default


def frobenius(ctx, x, k: int = 1):
    """sigma^k on a field code, a Witt element, or a matrix of either."""
    if isinstance(ctx, FieldCtx):
        if np.ndim(x) == 0:
            return int(ctx.frob(int(x), k))
        return ctx.frob(np.asarray(x, dtype=np.int64), k)
    if isinstance(ctx, WittCtx):
        if isinstance(x, np.ndarray):
            return ctx.frob_mat(x, k)
        return ctx.frob(tuple(x), k)
    raise TypeError(f"unsupported context {ctx!r}")


@dataclass(frozen=True)
class TwistedMap:
    """x -> A sigma^t(x)."""

    ctx: object
    matrix: np.ndarray
    twist: int = 0

    def _mm(self, A, B):
        return self.ctx.matmul(A, B)

    def compose(self, other: "TwistedMap") -> "TwistedMap":
        return TwistedMap(self.ctx, self._mm(self.matrix, frobenius(self.ctx, other.matrix, self.twist)),
                          self.twist + other.twist)

    def __matmul__(self, other):
        return self.compose(other)

    def apply(self, x):
        return self._mm(self.matrix, frobenius(self.ctx, x, self.twist))

    def power(self, k: int) -> "TwistedMap":
        out = TwistedMap(self.ctx, self.ctx.eye(self.matrix.shape[0]), 0)
        for _ in range(k):
            out = out.compose(self)
        return out


@dataclass(frozen=True)
class Term:
    """L sigma^twist(X_var) R, one summand of a linear equation."""

    L: np.ndarray
    var: int
    twist: int
    R: np.ndarray


@dataclass
class SolutionSpace:
    """F_p-subspace of tuples of matrices, given by a basis of coordinate vectors."""

    ctx: FieldCtx
    shapes: list
    basis: np.ndarray  # (dim, U) over F_p
    offsets: list = field(default_factory=list)

    @property
    def dim(self) -> int:
        return int(self.basis.shape[0])

    @property
    def count(self) -> int:
        return self.ctx.p**self.dim

    def unpack(self, coords) -> list:
        """F_p coordinate vector of length U -> list of code matrices."""
        coords = np.asarray(coords, dtype=np.int64)
        out = []
        for (r, c), off in zip(self.shapes, self.offsets):
            n = r * c * self.ctx.d
            out.append(self.ctx.from_fp(coords[off:off + n].reshape(r, c * self.ctx.d)))
        return out

    def unpack_many(self, coords) -> list:
        """Stack version of unpack: (k, U) coordinates -> list of (k, r, c) code arrays."""
        coords = np.asarray(coords, dtype=np.int64)
        out = []
        for (r, c), off in zip(self.shapes, self.offsets):
            n = r * c * self.ctx.d
            out.append(self.ctx.from_fp(coords[:, off:off + n].reshape(-1, r, c * self.ctx.d)))
        return out

    def point(self, t) -> list:
        """Solution with F_p coefficients t along the basis."""
        t = np.asarray(t, dtype=np.int64)
        return self.unpack((t @ self.basis) % self.ctx.p)

    def enumerate(self, cap: int | None = None):
        cap = max_enum() if cap is None else cap
        if self.count > cap:
            raise CapExceeded(f"solution space has {self.count} points, cap {cap}")
        for t in itertools.product(range(self.ctx.p), repeat=self.dim):
            yield self.point(t)


def _term_block(ctx: FieldCtx, term: Term, shape):
    """F_p matrix of X -> L sigma^t(X) R, rows indexed by output coords."""
    r, c = shape
    d, p = ctx.d, ctx.p
    L = np.asarray(term.L, dtype=np.int64)
    R = np.asarray(term.R, dtype=np.int64)
    y = np.array([ctx.frob(p**j, term.twist) for j in range(d)], dtype=np.int64)
    # out[a, b, j, i, l] = L[i, a] * y_j * R[b, l]
    Ly = ctx.mul_t[L.T[:, None, :], y[None, :, None]]  # (r, d, ro)
    out = ctx.mul_t[Ly[:, None, :, :, None], R[None, :, None, None, :]]  # (r, c, d, ro, co)
    cols = ctx.to_fp(out)  # (..., ro, co, d)
    return cols.reshape(r * c * d, -1).T


def semilinear_solve(ctx: FieldCtx, shapes, equations, max_unknowns: int = MAX_UNKNOWNS) -> SolutionSpace:
    """Solve sum_k L_k sigma^{t_k}(X_{v_k}) R_k = 0 for every equation.

    shapes lists the (rows, cols) of each unknown; equations is a list of
    lists of Term.  The result is the F_p basis of all solutions.
    """
    shapes = [tuple(s) for s in shapes]
    offsets, U = [], 0
    for r, c in shapes:
        offsets.append(U)
        U += r * c * ctx.d
    if U > max_unknowns:
        raise CapExceeded(f"{U} prime-field unknowns exceeds cap {max_unknowns}")
    blocks = []
    for eq in equations:
        if not eq:
            continue
        ro = np.asarray(eq[0].L).shape[0]
        co = np.asarray(eq[0].R).shape[1]
        A = np.zeros((ro * co * ctx.d, U), dtype=np.int64)
        for t in eq:
            r, c = shapes[t.var]
            off = offsets[t.var]
            A[:, off:off + r * c * ctx.d] += _term_block(ctx, t, (r, c))
        blocks.append(A % ctx.p)
    prime = FieldCtx(ctx.p, 1)
    A = np.concatenate(blocks, axis=0) if blocks else np.zeros((0, U), dtype=np.int64)
    basis = nullspace(prime, A, U)
    return SolutionSpace(ctx, shapes, np.asarray(basis, dtype=np.int64).reshape(-1, U), offsets)
