"""Ranks of rational curves in P^4 from Wronskian minors.

For a curve given by five polynomials of degree <= d in an affine parameter
``t``, the gcd of the (k+1)-minors of the matrix of the first k derivatives
vanishes at each branch to order ``sum_{i<=k} (a_i - i)`` where ``a`` is the
branch's order sequence.  Summing over all branches (finite ones through
the gcd degree, the branch at infinity in the reciprocal chart) gives the
totals ``T_k``; second differences of the totals are the branch sums that
enter the rank formulas.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import Sequence

from .exact import RationalField, rank
from .polys import INFINITY, UPoly, order_at, upoly_gcd

__all__ = [
    "InvalidCurveError",
    "RationalCurveP4",
    "CurveRankReport",
    "BranchRanks",
    "stationary_totals",
    "ranks",
    "branch_rank_sequence",
    "reparameterize",
    "transform",
    "DEGREE_CAP",
    "CURVES",
    "rational_normal_quartic",
    "quintic_example",
]

DEGREE_CAP = 40


class InvalidCurveError(ValueError):
    pass


@dataclass(frozen=True)
class RationalCurveP4:
    d: int
    forms: tuple

    def __post_init__(self) -> None:
        forms = tuple(f if isinstance(f, UPoly) else UPoly(f) for f in self.forms)
        object.__setattr__(self, "forms", forms)
        if len(forms) != 5:
            raise InvalidCurveError("a curve in P^4 needs exactly 5 forms")
        if not 1 <= self.d <= DEGREE_CAP:
            raise InvalidCurveError(f"degree must lie in [1, {DEGREE_CAP}]")
        if any(f.degree() > self.d for f in forms):
            raise InvalidCurveError("a form exceeds the stated degree")
        rows = [list(f.coeffs) + [Fraction(0)] * (self.d + 1 - len(f.coeffs)) for f in forms]
        if rank(rows, RationalField(), self.d + 1) < 5:
            raise InvalidCurveError("forms are linearly dependent (degenerate curve)")
        g = UPoly([])
        for f in forms:
            g = upoly_gcd(g, f)
        if g.degree() > 0:
            raise InvalidCurveError(f"forms share the factor {g.to_str()}")
        if max(f.degree() for f in forms) < self.d:
            raise InvalidCurveError("all forms vanish at infinity")

    def at_infinity(self) -> tuple:
        """Forms in the chart ``s = 1/t``."""
        return tuple(f.reciprocal(self.d) for f in self.forms)


@dataclass(frozen=True)
class BranchRanks:
    t0: object
    orders: tuple
    ranks: tuple


@dataclass
class CurveRankReport:
    d: int
    T: list
    sums: list
    n1: int
    n2: int
    n3: int
    checks: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(self.checks.values())

    def to_dict(self) -> dict:
        return {
            "d": self.d,
            "T": list(self.T),
            "sums": list(self.sums),
            "n1": self.n1,
            "n2": self.n2,
            "n3": self.n3,
        }


def _integral(f: UPoly) -> list[int]:
    den = 1
    for c in f.coeffs:
        den = lcm(den, c.denominator)
    return [int(c * den) for c in f.coeffs]


def _imul(a: list[int], b: list[int]) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _iadd(a: list[int], b: list[int], sign: int = 1) -> list[int]:
    if len(a) < len(b):
        a = a + [0] * (len(b) - len(a))
    out = list(a)
    for i, y in enumerate(b):
        out[i] += sign * y
    while out and out[-1] == 0:
        out.pop()
    return out


def _idiff(a: list[int]) -> list[int]:
    return [i * c for i, c in enumerate(a)][1:]


def _minor_gcds(forms: Sequence[UPoly]) -> list[UPoly]:
    """gcd of the (k+1)-minors of ``[C, C', ..., C^(k)]`` for k = 0..4.

    Minors are built row by row with Laplace expansion along the newest
    derivative row, so every minor of size k+1 reuses those of size k.
    Diagonal rescaling of the forms to integers does not change any gcd.
    """
    rows = [[_integral(f) for f in forms]]
    for _ in range(4):
        rows.append([_idiff(f) for f in rows[-1]])
    minors: dict[tuple, list[int]] = {(c,): rows[0][c] for c in range(5)}
    out = []
    for k in range(5):
        if k:
            nxt = {}
            for cols in itertools.combinations(range(5), k + 1):
                acc: list[int] = []
                for pos, c in enumerate(cols):
                    rest = cols[:pos] + cols[pos + 1:]
                    sign = -1 if (k + pos) % 2 else 1
                    acc = _iadd(acc, _imul(rows[k][c], minors[rest]), sign)
                nxt[cols] = acc
            minors = nxt
        g = UPoly([])
        for m in minors.values():
            if m:
                g = upoly_gcd(g, UPoly(m))
                if g.degree() == 0:
                    break
        if g.is_zero():
            raise InvalidCurveError("all minors vanish identically (degenerate curve)")
        out.append(g)
    return out


def stationary_totals(C: RationalCurveP4) -> list[int]:
    """``T_0..T_4``: finite gcd degrees plus orders at the point at infinity."""
    finite = _minor_gcds(C.forms)
    at_inf = _minor_gcds(C.at_infinity())
    return [g.degree() + order_at(h, 0) for g, h in zip(finite, at_inf)]


def ranks(C: RationalCurveP4) -> CurveRankReport:
    d = C.d
    T = stationary_totals(C)
    s0 = T[1] - 2 * T[0]
    s1 = T[2] - 2 * T[1] + T[0]
    s2 = T[3] - 2 * T[2] + T[1]
    s3 = T[4] - 2 * T[3] + T[2]
    n1 = 2 * (d - 1) - s0
    n2 = 3 * (d - 2) - (2 * s0 + s1)
    n3 = 4 * (d - 3) - (3 * s0 + 2 * s1 + s2)
    checks = {
        "T0=0": T[0] == 0,
        "nonnegative": min(T) >= 0 and min(n1, n2, n3) >= 0,
        "rank-relation-1": s0 + n1 == 2 * d - 2,
        "rank-relation-2": s1 + d + n2 == 2 * n1 - 2,
        "rank-relation-3": s2 + n1 + n3 == 2 * n2 - 2,
        "rank-relation-4": s3 + n2 == 2 * n3 - 2,
        "stationary-total": 4 * s0 + 3 * s1 + 2 * s2 + s3 == 5 * d - 20,
    }
    return CurveRankReport(d, T, [s0, s1, s2, s3], n1, n2, n3, checks)


def branch_rank_sequence(C: RationalCurveP4, t0) -> BranchRanks:
    """Order sequence and rank sequence of the branch at ``t0`` (rational or INFINITY)."""
    if t0 is INFINITY:
        forms, at = C.at_infinity(), Fraction(0)
    else:
        forms, at = C.forms, Fraction(t0)
    cum = [order_at(g, at) for g in _minor_gcds(forms)]
    orders = [k + cum[k] - (cum[k - 1] if k else 0) for k in range(5)]
    rk = tuple(orders[i + 1] - orders[i] for i in range(4))
    return BranchRanks(t0, tuple(orders), rk)


def reparameterize(C: RationalCurveP4, a, b, c, e) -> RationalCurveP4:
    """Substitute ``t -> (a t + b) / (c t + e)`` and clear denominators."""
    if a * e - b * c == 0:
        raise ValueError("singular Moebius transformation")
    num, den = UPoly([b, a]), UPoly([e, c])
    npow = [UPoly([1])]
    dpow = [UPoly([1])]
    for _ in range(C.d):
        npow.append(npow[-1] * num)
        dpow.append(dpow[-1] * den)
    forms = []
    for f in C.forms:
        acc = UPoly([])
        for k, coef in enumerate(f.coeffs):
            if coef:
                acc = acc + npow[k] * dpow[C.d - k] * coef
        forms.append(acc)
    return RationalCurveP4(C.d, tuple(forms))


def transform(C: RationalCurveP4, M: Sequence[Sequence]) -> RationalCurveP4:
    """Apply an invertible 5x5 matrix to the coordinate forms."""
    if rank([[Fraction(x) for x in row] for row in M], RationalField(), 5) != 5:
        raise ValueError("matrix is singular")
    forms = []
    for row in M:
        acc = UPoly([])
        for coef, f in zip(row, C.forms):
            if coef:
                acc = acc + f * coef
        forms.append(acc)
    return RationalCurveP4(C.d, tuple(forms))


def rational_normal_quartic() -> RationalCurveP4:
    return RationalCurveP4(4, tuple(UPoly([0] * k + [1]) for k in range(5)))


def quintic_example() -> RationalCurveP4:
    """``(1, t^2, t^3, t^4, t^5)``: a cusp at 0 and a flex-like branch at infinity."""
    return RationalCurveP4(5, tuple(UPoly([0] * k + [1]) for k in (0, 2, 3, 4, 5)))


CURVES = {"rnc4": rational_normal_quartic, "quintic": quintic_example}
