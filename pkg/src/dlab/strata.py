"""Newton polygons of signature (n-1, 1) and the Ekedahl-Oort strata table."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import IncomparableEndpoints, InvalidParams, InvariantViolation
from .spaces import dim_aut_formula

HALF = Fraction(1, 2)


@dataclass(frozen=True)
class NewtonPolygon:
    """A slope multiset; slopes are kept ascending with repetition."""

    slopes: tuple

    @classmethod
    def from_pairs(cls, pairs) -> "NewtonPolygon":
        out = []
        for s, k in pairs:
            out += [Fraction(s)] * int(k)
        return cls(tuple(sorted(out)))

    def multiset(self) -> dict:
        out = {}
        for s in self.slopes:
            out[s] = out.get(s, 0) + 1
        return out

    def pairs(self) -> list:
        return sorted(self.multiset().items())

    @property
    def rank(self) -> int:
        return len(self.slopes)

    def as_strings(self):
        return [str(s) for s in self.slopes]

    def format(self) -> str:
        """"slope:mult,..." in ascending slope order."""
        return ",".join(f"{s}:{k}" for s, k in self.pairs())

    @classmethod
    def parse(cls, text: str) -> "NewtonPolygon":
        return cls.from_pairs((Fraction(a), int(b)) for a, b in (t.split(":") for t in text.split(",") if t))

    def graph(self) -> list:
        """Heights of the lower convex graph at x = 0..rank."""
        ys = [Fraction(0)]
        for s in self.slopes:
            ys.append(ys[-1] + s)
        return ys

    def is_symmetric(self) -> bool:
        return sorted(self.slopes) == sorted(1 - s for s in self.slopes)

    def has_integral_breakpoints(self) -> bool:
        ys = self.graph()
        for x in range(1, self.rank):
            if self.slopes[x - 1] != self.slopes[x] and ys[x].denominator != 1:
                return False
        return ys[-1].denominator == 1


def polygon_of_isoindex(r: int, n: int) -> NewtonPolygon:
    """Polygon of N(r) + N_{1/2}^(n - 2r).

    For odd r the isocrystal N(r) is a sum of two copies of each simple part
    and for even r of one copy of rank 2r; either way the slope multiset is
    ((r-1)/2r)^2r ((r+1)/2r)^2r.
    """
    if not 0 <= r <= n // 2:
        raise InvalidParams(f"need 0 <= r <= n/2, got r={r}, n={n}")
    if r == 0:
        return NewtonPolygon((HALF,) * (2 * n))
    lo, hi = Fraction(r - 1, 2 * r), Fraction(r + 1, 2 * r)
    return NewtonPolygon(tuple(sorted((lo,) * (2 * r) + (hi,) * (2 * r) + (HALF,) * (2 * (n - 2 * r)))))


def admissible_first_slopes(n: int) -> dict:
    """first slope -> isocrystal index r (r = 0 is supersingular)."""
    out = {HALF: 0}
    for r in range(1, n // 2 + 1):
        out[HALF - Fraction(1, 2 * r)] = r
    return out


def eo_to_polygon(rho: int, n: int) -> NewtonPolygon:
    if not 1 <= rho <= n:
        raise InvalidParams(f"need 1 <= rho <= n, got rho={rho}, n={n}")
    return polygon_of_isoindex(0 if rho % 2 else rho // 2, n)


def codim_eo(rho: int, n: int) -> int:
    return dim_aut_formula(rho, n)


def dim_supersingular(n: int) -> int:
    if n < 1:
        raise InvalidParams("n >= 1")
    return (n - 1) // 2


def polygon_leq(pg1: NewtonPolygon, pg2: NewtonPolygon) -> bool:
    """pg1 <= pg2, i.e. pg1 lies weakly above pg2 at every integer abscissa."""
    g1, g2 = pg1.graph(), pg2.graph()
    if len(g1) != len(g2) or g1[-1] != g2[-1]:
        raise IncomparableEndpoints(f"endpoints differ: ({len(g1) - 1}, {g1[-1]}) vs ({len(g2) - 1}, {g2[-1]})")
    return all(a >= b for a, b in zip(g1, g2))


@dataclass(frozen=True)
class StratumRow:
    rho: int
    codim: int
    polygon: NewtonPolygon
    supersingular: bool

    def to_json(self) -> dict:
        return {"rho": self.rho, "codim": self.codim, "supersingular": self.supersingular,
                "polygon": self.polygon.format()}


def strata_table(n: int) -> list[StratumRow]:
    if n < 2:
        raise InvalidParams("n >= 2")
    rows = [StratumRow(rho, codim_eo(rho, n), eo_to_polygon(rho, n), rho % 2 == 1) for rho in range(1, n + 1)]
    odd = [r.codim for r in rows if r.supersingular]
    if min(odd) != (n - 1) - dim_supersingular(n):
        raise InvariantViolation("supersingular locus dimension does not match the odd strata")
    for a in rows:
        for b in rows:
            if a.polygon != b.polygon and polygon_leq(a.polygon, b.polygon) and a.codim < b.codim:
                raise InvariantViolation(f"codim not order-compatible at rho={a.rho}, {b.rho}")
    return rows
