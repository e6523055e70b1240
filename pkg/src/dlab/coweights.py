"""Coweights of the unitary similitude group in signature (n-1, 1).

X_* is {x in Z^2n : x_i + x_{2n+1-i} = c}; the Weyl group S_n permutes
(x_1..x_n) and, mirrored, (x_2n..x_n+1); sigma swaps the two halves.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .errors import DualityViolation, IncomparableConstants, InvalidParams


@dataclass(frozen=True)
class Coweight:
    x: tuple

    def __post_init__(self):
        x = tuple(int(v) for v in self.x)
        object.__setattr__(self, "x", x)
        if len(x) % 2 or not x:
            raise InvalidParams("a coweight has even positive length")
        n = len(x) // 2
        if len({x[i] + x[2 * n - 1 - i] for i in range(n)}) != 1:
            raise InvalidParams(f"{x} violates x_i + x_(2n+1-i) = const")

    @property
    def n(self) -> int:
        return len(self.x) // 2

    @property
    def const(self) -> int:
        return self.x[0] + self.x[-1]

    @property
    def first_half(self) -> tuple:
        return self.x[: self.n]

    @classmethod
    def from_half(cls, half, c: int) -> "Coweight":
        half = tuple(int(v) for v in half)
        return cls(half + tuple(c - v for v in reversed(half)))

    def act(self, perm) -> "Coweight":
        """Weyl group element: first half permuted by perm, second half mirrored."""
        return Coweight.from_half(tuple(self.first_half[perm[i]] for i in range(self.n)), self.const)

    def dominant(self) -> "CosetG":
        return CosetG(Coweight.from_half(sorted(self.first_half, reverse=True), self.const))

    def __str__(self):
        return "(" + ",".join(map(str, self.x)) + ")"


@dataclass(frozen=True)
class CosetG:
    """Omega-orbit, stored by its dominant representative."""

    rep: Coweight

    def is_sigma_stable(self) -> bool:
        return sigma_act(self.rep).dominant() == self


@dataclass(frozen=True)
class CosetL:
    """Orbit under the permutations of positions 2..n-1 (and their mirrors)."""

    rep: Coweight

    def to_G(self) -> CosetG:
        return self.rep.dominant()


def sigma_act(x: Coweight) -> Coweight:
    n = x.n
    return Coweight(x.x[n:] + x.x[:n])


def mu(n: int) -> Coweight:
    if n < 2:
        raise InvalidParams("n >= 2")
    return Coweight((1,) + (0,) * (n - 1) + (1,) * (n - 1) + (0,))


def norm_mu(n: int) -> Coweight:
    a, b = mu(n), sigma_act(mu(n))
    return Coweight(tuple(s + t for s, t in zip(a.x, b.x))).dominant().rep


def _check_comparable(a: Coweight, b: Coweight) -> None:
    if a.n != b.n:
        raise IncomparableConstants(f"ranks differ: {a.n} vs {b.n}")
    if a.const != b.const:
        raise IncomparableConstants(f"similitude constants differ: {a.const} vs {b.const}")
    if sum(a.first_half) != sum(b.first_half):
        raise IncomparableConstants("coordinate sums differ")


def dominance_leq(a: Coweight, b: Coweight) -> bool:
    """a <= b: the dominant first half of a is majorized by that of b."""
    _check_comparable(a, b)
    sa = sorted(a.first_half, reverse=True)
    sb = sorted(b.first_half, reverse=True)
    pa = pb = 0
    for s, t in zip(sa, sb):
        pa, pb = pa + s, pb + t
        if pa > pb:
            return False
    return True


def _solve_exact(A, b):
    """Some solution of A x = b over Q (free variables 0), or None."""
    rows, cols = len(A), len(A[0])
    M = [[Fraction(v) for v in A[i]] + [Fraction(b[i])] for i in range(rows)]
    piv, r = [], 0
    for c in range(cols):
        k = next((k for k in range(r, rows) if M[k][c] != 0), None)
        if k is None:
            continue
        M[r], M[k] = M[k], M[r]
        M[r] = [v / M[r][c] for v in M[r]]
        for k in range(rows):
            if k != r and M[k][c] != 0:
                f = M[k][c]
                M[k] = [v - f * w for v, w in zip(M[k], M[r])]
        piv.append(c)
        r += 1
        if r == rows:
            break
    if any(M[k][cols] != 0 for k in range(r, rows)):
        return None
    x = [Fraction(0)] * cols
    for i, c in enumerate(piv):
        x[c] = M[i][cols]
    return x


def in_orbit_hull(a: Coweight, b: Coweight) -> bool:
    """Exact membership of a in the convex hull of the Omega-orbit of b in X_* (x) R.

    Brute force over subsets of at most dim + 1 orbit points (Caratheodory).
    """
    if a.n != b.n:
        return False
    orbit = sorted({b.act(p).x for p in itertools.permutations(range(b.n))})
    dim = len(a.x)
    for k in range(1, min(len(orbit), dim + 1) + 1):
        for sub in itertools.combinations(orbit, k):
            A = [[v[i] for v in sub] for i in range(dim)] + [[1] * k]
            lam = _solve_exact(A, list(a.x) + [1])
            if lam is not None and all(t >= 0 for t in lam):
                return True
    return False


def inv_lattice_pair(g0, g1) -> CosetG:
    """Coset of a graded lattice pair from its two elementary divisor vectors."""
    s0 = sorted((int(v) for v in g0), reverse=True)
    s1 = sorted((int(v) for v in g1), reverse=True)
    if len(s0) != len(s1) or not s0:
        raise DualityViolation("divisor vectors must have the same positive length")
    cs = {a + b for a, b in zip(s1, reversed(s0))}
    if len(cs) != 1:
        raise DualityViolation(f"no constant c with sorted g1 = c - reversed sorted g0 ({s0}, {s1})")
    return CosetG(Coweight.from_half(s0, cs.pop()))


def levi_orbit(x: Coweight) -> CosetL:
    h = x.first_half
    if x.n <= 2:
        return CosetL(x)
    mid = sorted(h[1:-1], reverse=True)
    return CosetL(Coweight.from_half((h[0],) + tuple(mid) + (h[-1],), x.const))


@dataclass(frozen=True)
class FrobTypeResult:
    ok: bool
    coweight: Coweight
    multiplicator: int
    divisors: tuple


def frob_type_check(n: int, p: int = 3, prec: int = 8) -> FrobTypeResult:
    """inv of V^2 on B(2) + S^(n-2) against norm_mu(n), with multiplicator 2."""
    from .modules import reference_module, v_square_type
    from .witt import WittCtx

    if n < 2 or n % 2:
        raise InvalidParams("frob_type_check needs n even, n >= 2")
    mod = reference_module(2, n, WittCtx(p, 2, prec))
    g0, g1 = v_square_type(mod)
    coset = inv_lattice_pair(g0, g1)
    c = coset.rep.const
    ok = coset.rep == norm_mu(n) and c == 2 and coset.is_sigma_stable()
    return FrobTypeResult(ok, coset.rep, c, (tuple(g0), tuple(g1)))
