"""Generalized braids and their graded Dieudonne lattices.

Everything here lives over W(F_p), where sigma is the identity, so F and V
are integer matrices in the basis e_1..e_2m (degree 0), f_1..f_2m (degree 1).
A lattice is stored per degree in exact p-adic Hermite normal form: a shift s
and a lower triangular integer matrix H with diagonal entries p^k_i and
entries below the diagonal reduced modulo the pivot of their row, meaning the
lattice p^-s * span_Zp(H).  Entries are Python ints, so nothing is truncated.
"""
from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import CapExceeded, InsufficientPrecision, InvalidParams, InvariantViolation
from .modules import UnitaryDModule, invariant_failures
from .witt import WittCtx, smith_over_witt


def _vp(x: int, p: int) -> int:
    if x == 0:
        raise ValueError("valuation of zero")
    v = 0
    while x % p == 0:
        x //= p
        v += 1
    return v


def _frac_inv(A):
    """Inverse of a square matrix of ints/Fractions (Gauss-Jordan over Q)."""
    n = len(A)
    M = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(A)]
    for c in range(n):
        r = next((r for r in range(c, n) if M[r][c] != 0), None)
        if r is None:
            raise ValueError("singular matrix")
        M[c], M[r] = M[r], M[c]
        piv = M[c][c]
        M[c] = [x / piv for x in M[c]]
        for r in range(n):
            if r != c and M[r][c] != 0:
                f = M[r][c]
                M[r] = [x - f * y for x, y in zip(M[r], M[c])]
    return [row[n:] for row in M]


def _matmul(A, B):
    return [[sum(A[i][k] * B[k][j] for k in range(len(B))) for j in range(len(B[0]))] for i in range(len(A))]


def _transpose(A):
    return [list(r) for r in zip(*A)]


# ---------------------------------------------------------------------------
# one graded part
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Part:
    """The lattice p^-shift * span(H) in Q_p^n, H in canonical column HNF."""

    p: int
    shift: int
    H: tuple  # rows of ints

    @property
    def n(self) -> int:
        return len(self.H)

    @property
    def pivots(self) -> tuple:
        return tuple(_vp(self.H[i][i], self.p) for i in range(self.n))

    @property
    def volume(self) -> int:
        """log_p [Z_p^n : L], negative when L is larger than Z_p^n."""
        return sum(self.pivots) - self.n * self.shift

    @property
    def floor(self) -> int:
        """t with p^t Z_p^n contained in L."""
        return sum(self.pivots) - self.shift

    def columns(self) -> list:
        """Rational basis vectors."""
        d = Fraction(1, self.p**self.shift) if self.shift >= 0 else Fraction(self.p ** -self.shift)
        return [[self.H[i][j] * d for i in range(self.n)] for j in range(self.n)]

    def scaled(self, c: int) -> "Part":
        """p^c L."""
        return Part(self.p, self.shift - c, self.H)

    def val_offsets(self) -> list:
        return [k - self.shift for k in self.pivots]


def _hnf_mod(gens, n: int, p: int, K: int):
    """Canonical lower triangular column HNF of span(gens) + p^K Z^n."""
    if K <= 0:
        return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))
    mod = p**K
    cols = [c for c in ([x % mod for x in g] for g in gens) if any(c)]
    out = []
    for r in range(n):
        best = None
        for idx, col in enumerate(cols):
            if col[r] % mod:
                v = _vp(col[r], p)
                if best is None or v < best[0]:
                    best = (v, idx)
        if best is None:  # row r only meets p^K Z^n
            out.append([mod * int(i == r) for i in range(n)])
            continue
        v, idx = best
        piv = cols.pop(idx)
        u = pow(piv[r] // p**v, -1, mod)
        piv = [(x * u) % mod for x in piv]
        new = []
        for col in cols:
            if col[r] % mod:
                q = col[r] // p**v
                col = [(x - q * y) % mod for x, y in zip(col, piv)]
            if any(col):
                new.append(col)
        cols = new
        out.append(piv)
    # reduce entries below the diagonal, bottom-up
    for r in range(n):
        pr = out[r][r]
        for j in range(r):
            q = out[j][r] // pr
            if q:
                out[j] = [(x - q * y) % mod for x, y in zip(out[j], out[r])]
    return tuple(tuple(out[j][i] for j in range(n)) for i in range(n))


def make_part(p: int, cols, floor: int) -> Part:
    """Lattice spanned by rational columns, known to contain p^floor Z_p^n."""
    n = len(cols[0]) if cols else 0
    s = 0
    for col in cols:
        for x in col:
            x = Fraction(x)
            if x:
                s = max(s, _vp(x.denominator, p) if x.denominator != 1 else 0)
    K = floor + s
    mod = p ** max(K, 1)
    gens = []
    for col in cols:
        g = []
        for x in col:
            x = Fraction(x) * p**s
            num, den = x.numerator, x.denominator
            g.append(num * pow(den, -1, mod) % mod)
        gens.append(g)
    H = _hnf_mod(gens, n, p, K)
    # normalize the shift so that H is not divisible by p
    while all(x % p == 0 for row in H for x in row):
        H = tuple(tuple(x // p for x in row) for row in H)
        s -= 1
    return Part(p, s, H)


def part_sum(a: Part, *others) -> Part:
    cols = a.columns()
    floor = a.floor
    for b in others:
        cols += b.columns()
        floor = min(floor, b.floor)
    return make_part(a.p, cols, floor)


def part_image(T, a: Part, scale: int = 0) -> Part:
    """p^scale T(L) for a nonsingular integer matrix T."""
    dv = _exact_det_val(T, a.p)
    cols = [[sum(Fraction(T[i][k]) * c[k] for k in range(len(c))) * Fraction(a.p) ** scale
             for i in range(len(T))] for c in a.columns()]
    return make_part(a.p, cols, a.floor + dv + scale)


def _exact_det_val(T, p: int) -> int:
    n = len(T)
    M = [[Fraction(x) for x in row] for row in T]
    det = Fraction(1)
    for c in range(n):
        r = next((r for r in range(c, n) if M[r][c] != 0), None)
        if r is None:
            raise ValueError("singular operator")
        if r != c:
            M[c], M[r] = M[r], M[c]
            det = -det
        det *= M[c][c]
        for r in range(c + 1, n):
            f = M[r][c] / M[c][c]
            M[r] = [x - f * y for x, y in zip(M[r], M[c])]
    return _vp(det.numerator, p) - _vp(det.denominator, p) if det.denominator != 1 else _vp(det.numerator, p)


def part_contains(a: Part, b: Part) -> bool:
    """b subset of a."""
    return part_sum(a, b) == a


def part_dual(G, gram_exp: int, other: Part) -> Part:
    """{x : x^T (p^gram_exp G) y in Z_p for all y in other}."""
    p = other.p
    GB = _matmul(G, _transpose(other.columns()))  # columns G b
    inv_T = _transpose(_frac_inv(_transpose(GB)))  # (G B)^-T, columns are the dual basis
    scale = Fraction(p) ** (-gram_exp)
    cols = [[inv_T[i][j] * scale for i in range(len(G))] for j in range(len(G))]
    # p^t e_i is in the dual iff p^(t + gram_exp) (G B)^T e_i is integral
    floor = -gram_exp - min(_frac_val(x, p) for row in GB for x in row if x)
    return make_part(p, cols, floor)


def _frac_val(x: Fraction, p: int) -> int:
    x = Fraction(x)
    v = 0
    num, den = x.numerator, x.denominator
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return v


# ---------------------------------------------------------------------------
# generalized braids
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class GenBraid:
    """Generalized braid of half-length m, defect l and jump a."""

    m: int
    l: int
    a: int
    p: int
    prec: int
    F01: tuple  # F on degree 0, e -> f
    F10: tuple
    V01: tuple
    V10: tuple
    gram: tuple  # <e_i, f_j> = p^gram_exp * gram[i][j]
    gram_exp: int

    @property
    def rank(self) -> int:
        return 2 * self.m

    @property
    def is_integral(self) -> bool:
        return self.l >= 0

    @property
    def is_quasi_braid(self) -> bool:
        return self.a == 0

    @property
    def is_braid(self) -> bool:
        return self.a == 0 and self.l == 0

    def module(self, prec: int | None = None) -> UnitaryDModule:
        """The W_prec(F_p)-module, with the form rescaled to be integral."""
        ctx = WittCtx(self.p, 1, prec or self.prec)
        shift = max(0, -self.gram_exp)
        G = [[x * self.p ** (self.gram_exp + shift) for x in row] for row in self.gram]
        m = ctx.matrix
        return UnitaryDModule(ctx, m(self.F01), m(self.F10), m(self.V01), m(self.V10), m(G))

    def lattice(self) -> "IsoLattice":
        I = tuple(tuple(int(i == j) for j in range(self.rank)) for i in range(self.rank))
        return IsoLattice(self, (Part(self.p, 0, I), Part(self.p, 0, I)), self.prec)


def _braid_F(m: int, a: int, p: int):
    n = 2 * m
    F01 = [[0] * n for _ in range(n)]
    F10 = [[0] * n for _ in range(n)]
    pos = lambda i: (i - 1) % n  # noqa: E731  index in Z/2m with 0 = 2m
    for i in range(1, n + 1):
        F01[pos(i - 1)][pos(i)] = p ** int(i == 1)
        F10[pos(i - 1)][pos(i)] = p ** (1 - int(i == 2 * a + 1))
    return F01, F10


def make_genbraid(m: int, l: int, a: int, p: int = 3, prec: int | None = None) -> GenBraid:
    if m < 1 or not 0 <= a <= m - 1:
        raise InvalidParams(f"need m >= 1 and 0 <= a <= m - 1, got m={m}, a={a}")
    n = 2 * m
    prec = prec if prec is not None else 2 * (m * max(l, 0) + a) + 4
    F01, F10 = _braid_F(m, a, p)
    # V = p F^-1 degreewise: F10 V01 = p on M0, F01 V10 = p on M1
    V01 = [[int(x * p) for x in row] for row in _frac_inv(F10)]
    V10 = [[int(x * p) for x in row] for row in _frac_inv(F01)]
    gram = [[0] * n for _ in range(n)]
    for i in range(1, n + 1):
        gram[i - 1][i - 1] = (-1) ** (i - 1) * p ** int(i <= 2 * a)
    tup = lambda A: tuple(tuple(r) for r in A)  # noqa: E731
    gb = GenBraid(m, l, a, p, prec, tup(F01), tup(F10), tup(V01), tup(V10), tup(gram), l)
    _check_genbraid(gb)
    return gb


def _check_genbraid(gb: GenBraid) -> None:
    n, p = gb.rank, gb.p
    for name, A, B in (("FV", gb.F10, gb.V01), ("FV", gb.F01, gb.V10)):
        if _matmul(A, B) != [[p * int(i == j) for j in range(n)] for i in range(n)]:
            raise InvariantViolation(f"{name} != p")
    bad = invariant_failures(gb.module(max(gb.prec, abs(gb.l) + 4)), perfect=False)
    if bad:
        raise InvariantViolation("; ".join(bad))
    N = gb.lattice()
    if N.dual().length_over(N) != 4 * (gb.m * gb.l + gb.a):
        raise InvariantViolation("lg(N^t/N) != 4(ml + a)")


# ---------------------------------------------------------------------------
# lattices
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class IsoLattice:
    """Graded lattice M = M0 + M1 in the isocrystal of a generalized braid."""

    ambient: GenBraid
    parts: tuple  # (Part, Part)
    budget: int

    def __eq__(self, other):
        return isinstance(other, IsoLattice) and self.parts == other.parts

    def __hash__(self):
        return hash(self.parts)

    @property
    def volume(self) -> int:
        return self.parts[0].volume + self.parts[1].volume

    def contains(self, other: "IsoLattice") -> bool:
        return all(part_contains(a, b) for a, b in zip(self.parts, other.parts))

    def length_over(self, sub: "IsoLattice") -> int:
        """lg(self / sub), for sub contained in self."""
        return sub.volume - self.volume

    def scaled(self, c: int) -> "IsoLattice":
        return IsoLattice(self.ambient, tuple(q.scaled(c) for q in self.parts), self.budget)

    def dual(self) -> "IsoLattice":
        gb = self.ambient
        G = [list(r) for r in gb.gram]
        d0 = part_dual(G, gb.gram_exp, self.parts[1])
        d1 = part_dual(_transpose(G), gb.gram_exp, self.parts[0])
        return IsoLattice(gb, (d0, d1), self.budget)

    def is_stable(self) -> bool:
        gb = self.ambient
        L0, L1 = self.parts
        return (part_contains(L1, part_image(gb.F01, L0)) and part_contains(L0, part_image(gb.F10, L1))
                and part_contains(L1, part_image(gb.V01, L0)) and part_contains(L0, part_image(gb.V10, L1)))

    def signature(self) -> tuple[int, int]:
        """(lg M0/V M1, lg M1/V M0) for a V-stable lattice."""
        gb = self.ambient
        L0, L1 = self.parts
        return (part_image(gb.V10, L1).volume - L0.volume, part_image(gb.V01, L0).volume - L1.volume)

    def duality_exponent(self) -> int | None:
        """lambda with M^t = p^-lambda M (the form is p^lambda-perfect), else None."""
        D = self.dual()
        diff = self.volume - D.volume
        if diff % (4 * self.ambient.m):
            return None
        lam = diff // (4 * self.ambient.m)
        return lam if D == self.scaled(-lam) else None

    def to_json(self) -> dict:
        return {"parts": [{"shift": q.shift, "basis": [list(r) for r in q.H], "val_offset": q.val_offsets()}
                          for q in self.parts],
                "precision": self.budget}


def _spend(L: IsoLattice) -> int:
    if L.budget < 1:
        raise InsufficientPrecision("precision budget exhausted by inverse operator")
    return L.budget - 1


def f_op(L: IsoLattice) -> IsoLattice:
    """L + F^-1 L1 + V F^-1 L1, with F^-1 = p^-1 V."""
    gb = L.ambient
    L0, L1 = L.parts
    Finv = part_image(gb.V10, L1, scale=-1)
    VFinv = part_image(gb.V01, Finv)
    return IsoLattice(gb, (part_sum(L0, Finv), part_sum(L1, VFinv)), _spend(L))


def v_op(L: IsoLattice) -> IsoLattice:
    """L + V^-1 L1 + F V^-1 L1, with V^-1 = p^-1 F."""
    gb = L.ambient
    L0, L1 = L.parts
    Vinv = part_image(gb.F10, L1, scale=-1)
    FVinv = part_image(gb.F01, Vinv)
    return IsoLattice(gb, (part_sum(L0, Vinv), part_sum(L1, FVinv)), _spend(L))


def in_family(L: IsoLattice) -> int | None:
    """Membership predicate: stable, signature (2m-1, 1), self-dual up to p^lambda.

    Returns lambda or None.
    """
    if not L.is_stable():
        return None
    if L.signature() != (2 * L.ambient.m - 1, 1):
        return None
    return L.duality_exponent()


@dataclass(frozen=True)
class LatticeEntry:
    lattice: IsoLattice
    alpha: int
    beta: int
    lam: int


def enumerate_lattices(gb: GenBraid) -> list[LatticeEntry]:
    """All members of the family between N and N^t, as F^alpha V^beta N."""
    if gb.l < 0:
        raise InvalidParams("enumeration needs an integral generalized braid (l >= 0)")
    bound = 2 * gb.m * gb.l + gb.a
    if gb.prec < bound + 4:
        raise InsufficientPrecision(f"precision {gb.prec} < {bound + 4}")
    N = gb.lattice()
    Nt = N.dual()
    seen = {N: (0, 0)}
    queue = deque([(N, 0, 0)])
    while queue:
        L, al, be = queue.popleft()
        if al + be >= bound:
            continue
        for op, step in ((f_op, (1, 0)), (v_op, (0, 1))):
            M = op(L)
            if M in seen or not Nt.contains(M):
                continue
            seen[M] = (al + step[0], be + step[1])
            queue.append((M, al + step[0], be + step[1]))
    out = []
    for M, (al, be) in seen.items():
        lam = in_family(M)
        if lam is not None:
            out.append(LatticeEntry(M, al, be, lam))
    out.sort(key=lambda e: (e.alpha + e.beta, e.alpha))
    return out


def lattice_module(L: IsoLattice, prec: int) -> UnitaryDModule:
    """The Dieudonne module M with its form scaled by p^-lambda (perfect)."""
    gb = L.ambient
    lam = L.duality_exponent()
    if lam is None:
        raise InvariantViolation("lattice is not self-dual up to a p-power")
    B0, B1 = (_transpose(q.columns()) for q in L.parts)
    B0i, B1i = _frac_inv(B0), _frac_inv(B1)
    ctx = WittCtx(gb.p, 1, prec)

    def conv(A):
        mod = gb.p**prec
        rows = []
        for row in A:
            r = []
            for x in row:
                x = Fraction(x)
                if x.denominator % gb.p == 0:
                    raise InvariantViolation("lattice is not stable")
                r.append(x.numerator * pow(x.denominator, -1, mod) % mod)
            rows.append(r)
        return ctx.matrix(rows)

    F01 = _matmul(_matmul(B1i, gb.F01), B0)
    F10 = _matmul(_matmul(B0i, gb.F10), B1)
    V01 = _matmul(_matmul(B1i, gb.V01), B0)
    V10 = _matmul(_matmul(B0i, gb.V10), B1)
    G = _matmul(_matmul(_transpose(B0), gb.gram), B1)
    G = [[x * Fraction(gb.p) ** (gb.gram_exp - lam) for x in row] for row in G]
    return UnitaryDModule(ctx, conv(F01), conv(F10), conv(V01), conv(V10), conv(G))


# ---------------------------------------------------------------------------
# brute-force oracle
# ---------------------------------------------------------------------------


def _subgroups(gens_of_group, p: int, S: int):
    """All subgroups of the finite group generated inside (Z/p^S)^n, with generators."""
    mod = p**S
    start = frozenset([tuple(0 for _ in gens_of_group[0])])
    # the full group
    full = set(start)
    for g in gens_of_group:
        full = {tuple((x + k * y) % mod for x, y in zip(h, g)) for h in full for k in range(mod)}
    elements = sorted(full)
    found = {start: ()}
    queue = deque([start])
    while queue:
        H = queue.popleft()
        for x in elements:
            if x in H:
                continue
            K = frozenset(tuple((a + k * b) % mod for a, b in zip(h, x)) for h in H for k in range(mod))
            if K not in found:
                found[K] = found[H] + (x,)
                queue.append(K)
    return found


def brute_force_family(gb: GenBraid, cap: int = 10) -> list[tuple[frozenset, frozenset, int]]:
    """Exhaustive search over subgroup pairs of N^t/N (independent of f_op / v_op).

    Returns (S0, S1, lambda) with S_i the subgroup of (Z/p^S)^2m, S = l + 1,
    representing M_i / N_i via x = p^-S y.
    """
    if gb.l < 0:
        raise InvalidParams("needs l >= 0")
    if 4 * (gb.m * gb.l + gb.a) > cap:
        raise CapExceeded(f"lg(N^t/N) = {4 * (gb.m * gb.l + gb.a)} exceeds {cap}")
    p, n, S = gb.p, gb.rank, gb.l + 1
    mod = p**S
    # N^t is diagonal: coordinate j is allowed p^-(gram exponent)
    exps = [gb.gram_exp + _vp(gb.gram[j][j], p) for j in range(n)]
    gens = [tuple((p ** (S - exps[j]) if i == j else 0) for i in range(n)) for j in range(n)]
    subs = _subgroups(gens, p, S)
    apply = lambda T, y: tuple(sum(T[i][k] * y[k] for k in range(n)) % mod for i in range(n))  # noqa: E731

    def maps_into(T, gens_src, dst):
        return all(apply(T, y) in dst for y in gens_src)

    P = 2 * S + gb.l + 3
    ctx = WittCtx(p, 1, P)
    out = []
    items = list(subs.items())
    for S0, g0 in items:
        for S1, g1 in items:
            if len(S0) != len(S1):
                continue  # signature, via lg(M0/VM1) = lg(M0/N0) + 2m - 1 - lg(M1/N1)
            if not (maps_into(gb.F01, g0, S1) and maps_into(gb.V01, g0, S1)
                    and maps_into(gb.F10, g1, S0) and maps_into(gb.V10, g1, S0)):
                continue
            X0 = [list(y) for y in g0] + [[mod * int(i == j) for i in range(n)] for j in range(n)]
            X1 = [list(y) for y in g1] + [[mod * int(i == j) for i in range(n)] for j in range(n)]
            # p^(2S - gram_exp) <x, y>, integral
            Gm = [[sum(x[i] * gb.gram[i][i] * y[i] for i in range(n)) for y in X1] for x in X0]
            divs = smith_over_witt(ctx, ctx.matrix(Gm), partial=True)
            if len(divs) == n and len(set(divs)) == 1:
                out.append((S0, S1, divs[0] - 2 * S + gb.gram_exp))
    return out


def lattice_to_subgroups(L: IsoLattice) -> tuple[frozenset, frozenset]:
    """Inverse of the oracle encoding, for lattices between N and N^t."""
    gb = L.ambient
    p, n, S = gb.p, gb.rank, gb.l + 1
    mod = p**S
    exps = [gb.gram_exp + _vp(gb.gram[j][j], p) for j in range(n)]
    out = []
    for q in L.parts:
        Hinv = _frac_inv(_transpose(q.columns()))
        elems = []
        for y in itertools.product(*[range(0, mod, p ** (S - e)) for e in exps]):
            x = [Fraction(v, mod) for v in y]
            c = [sum(Hinv[i][k] * x[k] for k in range(n)) for i in range(n)]
            if all(v.denominator % p for v in c):
                elems.append(tuple(y))
        out.append(frozenset(elems))
    return tuple(out)
