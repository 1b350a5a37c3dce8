"""Parameterized varieties and the constructors used throughout the package.

A :class:`ParamVariety` is a polynomial map from affine n-space to the
affine cone over P^r.  Tangent spaces of the projective image are read off
the point vector together with its first partial derivatives.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from functools import cached_property
from typing import Mapping, Sequence

from .exact import (ExactMatrix, Field, PrimeField, RandomSource, RationalField,
                    kernel_basis, rank)
from .polys import MPoly, compile_polys, find_root_mod_p

__all__ = [
    "ParamVariety",
    "LinearCenter",
    "SamplingError",
    "veronese",
    "segre",
    "cone_over",
    "project",
    "join",
    "linear_space",
    "scroll_ex1",
    "scroll_ex2",
    "scroll_ex3",
    "random_point",
    "hyperplane_point",
    "CATALOG",
    "builtin",
    "catalog_names",
]

RETRY_BUDGET = 32


class SamplingError(RuntimeError):
    """Random sampling failed to produce a usable point within its budget."""


@dataclass(frozen=True, eq=False)
class ParamVariety:
    name: str
    params: tuple[str, ...]
    coords: tuple[MPoly, ...]
    tags: frozenset = frozenset()
    expected: Mapping[str, int] = field(default_factory=dict)
    case: str | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "params", tuple(self.params))
        object.__setattr__(self, "coords", tuple(self.coords))
        object.__setattr__(self, "tags", frozenset(self.tags))
        if not self.coords:
            raise ValueError("a variety needs at least one coordinate")
        for c in self.coords:
            if c.variables != self.params:
                raise ValueError(f"coordinate {c.to_str()} does not use parameters {self.params}")
        if all(c.is_zero() for c in self.coords):
            raise ValueError("all coordinates are identically zero")

    @property
    def n(self) -> int:
        return len(self.params)

    @property
    def r(self) -> int:
        return len(self.coords) - 1

    @property
    def nparams(self) -> int:
        return len(self.params)

    @property
    def ncoords(self) -> int:
        return len(self.coords)

    @cached_property
    def jacobian(self) -> tuple[tuple[MPoly, ...], ...]:
        """``jacobian[i][j] = d coords[j] / d params[i]``."""
        return tuple(tuple(c.diff(v) for c in self.coords) for v in self.params)

    @cached_property
    def hessian(self) -> dict[tuple[int, int], tuple[MPoly, ...]]:
        """Second partials for ``a <= b``, one tuple of r+1 polynomials each."""
        out = {}
        for a in range(self.n):
            for b in range(a, self.n):
                out[(a, b)] = tuple(d.diff(self.params[b]) for d in self.jacobian[a])
        return out

    @cached_property
    def _compiled(self) -> dict:
        return {}

    def _evaluator(self, fld: Field, order: int):
        key = (fld, order)
        cache = self._compiled
        if key not in cache:
            polys = list(self.coords)
            if order >= 1:
                for row in self.jacobian:
                    polys.extend(row)
            if order >= 2:
                for a, b in sorted(self.hessian):
                    polys.extend(self.hessian[(a, b)])
            cache[key] = compile_polys(polys, fld)
        return cache[key]

    def jet(self, fld: Field, u: Sequence, order: int = 1):
        """Values, Jacobian rows and (for ``order=2``) the full Hessian stack at ``u``.

        The Hessian is returned as ``hess[a][b]``, a vector of length r+1.
        """
        flat = self._evaluator(fld, order)(u)
        m = self.ncoords
        vals = flat[:m]
        jac = [flat[m * (i + 1):m * (i + 2)] for i in range(self.n)] if order >= 1 else []
        if order < 2:
            return vals, jac, None
        hess = [[None] * self.n for _ in range(self.n)]
        pos = m * (self.n + 1)
        for a, b in sorted(self.hessian):
            vec = flat[pos:pos + m]
            hess[a][b] = vec
            hess[b][a] = vec
            pos += m
        return vals, jac, hess

    def values(self, fld: Field, u: Sequence) -> list:
        return self.jet(fld, u, order=0)[0]

    def coords_independent(self) -> bool:
        """True when the coordinates are linearly independent polynomials."""
        monos = sorted({e for c in self.coords for e in c.terms})
        rows = [[c.terms.get(e, Fraction(0)) for e in monos] for c in self.coords]
        return rank(rows, RationalField(), len(monos)) == len(self.coords)

    def with_meta(self, name: str | None = None, tags=None, expected=None,
                  case=None) -> "ParamVariety":
        return ParamVariety(
            name=self.name if name is None else name,
            params=self.params,
            coords=self.coords,
            tags=self.tags if tags is None else frozenset(tags),
            expected=self.expected if expected is None else dict(expected),
            case=self.case if case is None else case,
        )

    def __repr__(self) -> str:
        return f"ParamVariety({self.name!r}, n={self.n}, r={self.r})"


@dataclass(frozen=True)
class LinearCenter:
    """Row space of ``matrix`` is the projection center (ambient coordinates)."""

    matrix: ExactMatrix

    def __post_init__(self) -> None:
        if self.matrix.rank() != self.matrix.nrows:
            raise ValueError("center rows must be linearly independent")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], ncols: int | None = None) -> "LinearCenter":
        return cls(ExactMatrix(rows, RationalField(), cols=ncols))


# ---------------------------------------------------------------------------
# constructors


def _monomials(nvars: int, d: int) -> list[tuple[int, ...]]:
    """Exponent vectors of degree ``d``, lexicographically descending."""
    out = [e for e in itertools.product(range(d, -1, -1), repeat=nvars) if sum(e) == d]
    return out


def veronese(n: int, d: int) -> ParamVariety:
    """The d-th Veronese embedding of P^n in the chart ``x_n = 1``.

    Coordinates are the degree-d monomials of ``x_0..x_n`` in descending lex
    order, so the constant coordinate (``x_n^d``) comes last.
    """
    if n < 1 or d < 1:
        raise ValueError("veronese needs n >= 1 and d >= 1")
    params = tuple(f"x{i}" for i in range(n))
    coords = []
    for e in _monomials(n + 1, d):
        coords.append(MPoly(params, {e[:n]: 1}))
    return ParamVariety(f"veronese:{n}:{d}", params, coords)


def segre(a: int, b: int) -> ParamVariety:
    """Seg(a, b) in the chart ``x_0 = y_0 = 1``; coordinate ``z_ij = x_i y_j`` row-major."""
    if a < 1 or b < 1:
        raise ValueError("segre needs a, b >= 1")
    params = tuple([f"x{i}" for i in range(1, a + 1)] + [f"y{j}" for j in range(1, b + 1)])
    one = MPoly.const(params, 1)
    xs = [one] + [MPoly.var(params, f"x{i}") for i in range(1, a + 1)]
    ys = [one] + [MPoly.var(params, f"y{j}") for j in range(1, b + 1)]
    coords = [x * y for x in xs for y in ys]
    return ParamVariety(f"segre:{a}:{b}", params, coords)


def linear_space(n: int) -> ParamVariety:
    """P^n itself, charted as ``u -> (1, u_1, ..., u_n)``."""
    params = tuple(f"u{i}" for i in range(1, n + 1))
    coords = [MPoly.const(params, 1)] + [MPoly.var(params, v) for v in params]
    return ParamVariety(f"linear:{n}", params, coords)


def _fresh(names: Sequence[str], stem: str, k: int) -> list[str]:
    taken = set(names)
    out = []
    i = 1
    while len(out) < k:
        cand = f"{stem}{i}"
        if cand not in taken:
            out.append(cand)
            taken.add(cand)
        i += 1
    return out


def cone_over(X: ParamVariety, k: int) -> ParamVariety:
    """Cone over ``X`` with vertex the span of k new coordinate axes."""
    if k < 1:
        raise ValueError("cone_over needs k >= 1")
    extra = _fresh(X.params, "w", k)
    params = X.params + tuple(extra)
    coords = [c.embed(params) for c in X.coords]
    coords += [MPoly.var(params, w) for w in extra]
    tags = set(X.tags) - {"smooth-claimed"}
    tags.add("cone")
    expected = {"vertex_dim": k - 1}
    return ParamVariety(f"cone:{k}:{X.name}", params, coords, tags, expected)


def _integral_rows(rows: Sequence[Sequence[Fraction]]) -> list[list[Fraction]]:
    out = []
    for row in rows:
        den = 1
        for x in row:
            den = lcm(den, Fraction(x).denominator)
        out.append([Fraction(x) * den for x in row])
    return out


def project(X: ParamVariety, C: LinearCenter, name: str | None = None) -> ParamVariety:
    """Linear projection of ``X`` from the span of the rows of ``C``."""
    M = C.matrix
    if M.cols != X.ncoords:
        raise ValueError(f"center has {M.cols} columns, variety has {X.ncoords} coordinates")
    if M.nrows > X.r - 1:
        raise ValueError("center too large for a projection")
    if not isinstance(M.field, RationalField):
        raise ValueError("projection centers must be rational")
    if M.nrows == 0:
        return X.with_meta(name=name or X.name)
    forms = _integral_rows(kernel_basis([list(r) for r in M.rows], M.field, M.cols))
    coords = []
    for form in forms:
        acc = MPoly(X.params)
        for c, poly in zip(form, X.coords):
            if c:
                acc = acc + poly * c
        coords.append(acc)
    tags = set(X.tags) - {"smooth-claimed"}
    return ParamVariety(name or f"proj:{X.name}", X.params, coords, tags)


def join(X: ParamVariety, Y: ParamVariety) -> ParamVariety:
    """Chart ``(u, v, lam) -> coords_X(u) + lam * coords_Y(v)`` of the join."""
    if X.r != Y.r:
        raise ValueError(f"ambient mismatch: P^{X.r} vs P^{Y.r}")
    left = tuple(f"{p}_a" for p in X.params)
    right = tuple(f"{p}_b" for p in Y.params)
    params = left + right + ("lam",)
    lam = MPoly.var(params, "lam")
    coords = []
    for cx, cy in zip(X.coords, Y.coords):
        coords.append(cx.rename(left).embed(params) + lam * cy.rename(right).embed(params))
    return ParamVariety(f"join:{X.name}:{Y.name}", params, coords)


def _poly_list(params, exprs) -> list[MPoly]:
    return [e if isinstance(e, MPoly) else MPoly.const(params, e) for e in exprs]


def scroll_ex1() -> ParamVariety:
    """Tangent lines to a conic in a plane, joined to the lines of S(2,3) in a skew P^6.

    The line over ``t`` in the plane is the tangent to ``(1, t, t^2)``;
    the matching line of the rational normal scroll joins ``(1, t, t^2)``
    and ``(1, t, t^2, t^3)`` in the two blocks of the P^6.
    """
    params = ("t", "a", "b", "c")
    t, a, b, c = (MPoly.var(params, v) for v in params)
    plane = [1 + 0 * t, t + a, t * t + 2 * t * a]
    scroll = [b, b * t, b * t * t, c, c * t, c * t * t, c * t * t * t]
    return ParamVariety("scroll-ex1", params, _poly_list(params, plane + scroll),
                        {"scroll"}, case="v")


def scroll_ex2() -> ParamVariety:
    """Osculating planes of a rational normal quartic in P^4, joined to a quartic in a skew P^4."""
    params = ("t", "a", "b", "c")
    t, a, b, c = (MPoly.var(params, v) for v in params)
    q = [t ** k for k in range(5)]
    dq = [k * t ** (k - 1) if k else MPoly(params) for k in range(5)]
    ddq = [Fraction(k * (k - 1), 2) * t ** (k - 2) if k > 1 else MPoly(params) for k in range(5)]
    plane = [q[k] + a * dq[k] + b * ddq[k] for k in range(5)]
    curve = [c * t ** k for k in range(5)]
    return ParamVariety("scroll-ex2", params, _poly_list(params, plane + curve),
                        {"scroll"}, case="vi")


def scroll_ex3() -> ParamVariety:
    """Tangent spaces to V(3,2) at the points 2H, H on the twisted cubic of planes.

    Coordinates are the coefficients of the quadric ``H(t) * H'`` with
    ``H(t) = (1, t, t^2, t^3)`` and ``H' = (1, a, b, c)``.
    """
    params = ("t", "a", "b", "c")
    t, a, b, c = (MPoly.var(params, v) for v in params)
    g = [MPoly.const(params, 1), t, t * t, t * t * t]
    h = [MPoly.const(params, 1), a, b, c]
    coords = []
    for i in range(4):
        for j in range(i, 4):
            coords.append(g[i] * h[i] if i == j else g[i] * h[j] + g[j] * h[i])
    return ParamVariety("scroll-ex3", params, coords, {"scroll"}, case="vii")


# ---------------------------------------------------------------------------
# named constructions


def _veronese_center(X: ParamVariety, n: int, d: int, rows: Sequence[Mapping[tuple, int]]):
    """Center rows given as {homogeneous exponent: coefficient} in Veronese coordinates."""
    monos = _monomials(n + 1, d)
    index = {e: i for i, e in enumerate(monos)}
    out = []
    for row in rows:
        vec = [0] * len(monos)
        for e, c in row.items():
            vec[index[e]] = c
        out.append(vec)
    return LinearCenter.from_rows(out, len(monos))


def _e(*idx: int, nvars: int = 5) -> tuple[int, ...]:
    out = [0] * nvars
    for i in idx:
        out[i] += 1
    return tuple(out)


def v42_internal() -> ParamVariety:
    """V(4,2) projected from its point v(e_0)."""
    V = veronese(4, 2)
    C = _veronese_center(V, 4, 2, [{_e(0, 0): 1}])
    return project(V, C, "v42-point").with_meta(tags={"smooth-claimed"}, case="viii")


def v42_conic() -> ParamVariety:
    """V(4,2) projected from the plane of the conic v(<e_0, e_1>)."""
    V = veronese(4, 2)
    C = _veronese_center(V, 4, 2, [{_e(0, 0): 1}, {_e(0, 1): 1}, {_e(1, 1): 1}])
    return project(V, C, "v42-conic").with_meta(tags={"smooth-claimed"}, case="ix")


def v42_quartic() -> ParamVariety:
    """V(4,2) projected from the P^4 spanned by the quartic v(conic x0*x2 = x1^2)."""
    V = veronese(4, 2)
    rows = [{_e(0, 0): 1}, {_e(0, 1): 1}, {_e(0, 2): 1, _e(1, 1): 1}, {_e(1, 2): 1}, {_e(2, 2): 1}]
    C = _veronese_center(V, 4, 2, rows)
    return project(V, C, "v42-quartic").with_meta(tags={"smooth-claimed"}, case="x")


def seg23_section() -> ParamVariety:
    """Hyperplane section z01 + z12 + z20 = 0 of Seg(2,3), embedded in P^10."""
    S = segre(2, 3)
    params = ("x1", "x2", "y2", "y3")
    x1, x2, y2, y3 = (MPoly.var(params, v) for v in params)
    sub = {"x1": x1, "x2": x2, "y1": -(x1 * y2) - x2, "y2": y2, "y3": y3}
    full = [c.substitute(sub) for c in S.coords]
    # z01 is the dependent coordinate; dropping it is projection from e_01,
    # which is off the hyperplane and so an isomorphism on the section
    coords = full[:1] + full[2:]
    return ParamVariety("seg23-section", params, coords, {"smooth-claimed"}, case="xi")


def point_cone_segre_example() -> ParamVariety:
    """A 4-fold in the cone with vertex a point over Seg(2,2) in P^9."""
    S = segre(2, 2)
    x1, y2 = MPoly.var(S.params, "x1"), MPoly.var(S.params, "y2")
    coords = list(S.coords) + [x1 * x1 + y2 * y2]
    return ParamVariety("xii-point-cone", S.params, coords, case="xii")


def line_cone_v32_example() -> ParamVariety:
    """A 4-fold in the cone with vertex a line over V(3,2) in P^11."""
    V = veronese(3, 2)
    params = V.params + ("s",)
    s = MPoly.var(params, "s")
    u = MPoly.var(params, V.params[0])
    coords = [c.embed(params) for c in V.coords] + [s, s * s + u * s]
    return ParamVariety("xiii-line-cone", params, coords, case="xiii")


def v22_cone_example() -> ParamVariety:
    """A 4-fold in the cone with vertex a P^3 over V(2,2) in P^9."""
    V = veronese(2, 2)
    params = V.params + ("s1", "s2")
    s1, s2 = MPoly.var(params, "s1"), MPoly.var(params, "s2")
    u1, u2 = (MPoly.var(params, v) for v in V.params)
    coords = [c.embed(params) for c in V.coords]
    coords += [s1, s2, s1 * s1 + u2 * s2, s2 * s2 + u1 * s1 + s1 * s2]
    return ParamVariety("xiv-v22-cone", params, coords, case="xiv")


def quadric_threefold(rank5: bool = True) -> ParamVariety:
    """Quadric hypersurface in P^4: smooth (rank 5) or a rank-4 cone."""
    params = ("u1", "u2", "u3")
    u1, u2, u3 = (MPoly.var(params, v) for v in params)
    q = u1 * u1 + u2 * u2 + (u3 * u3 if rank5 else 0)
    coords = [MPoly.const(params, 1), u1, u2, u3, q]
    return ParamVariety("quadric3" if rank5 else "quadric3-rank4", params, coords)


def nondefective_fourfold() -> ParamVariety:
    """A fixed cubic 4-fold chart in P^9 whose secant variety fills the ambient space."""
    params = ("u1", "u2", "u3", "u4")
    u1, u2, u3, u4 = (MPoly.var(params, v) for v in params)
    coords = [MPoly.const(params, 1), u1, u2, u3, u4,
              u1 ** 3 + u2 * u3 * u4,
              u2 ** 3 + u1 * u3 * u4 + u4 * u4,
              u3 ** 3 + u1 * u2 * u4 + u1 * u1,
              u4 ** 3 + u1 * u2 * u3 + u2 * u3,
              u1 * u1 * u2 + u3 * u3 * u4 + u1 * u4 * u4]
    return ParamVariety("fourfold-p9", params, coords)


def _with_case(X: ParamVariety, case: str | None, tags=(), **expected) -> ParamVariety:
    merged = dict(X.expected)
    merged.update(expected)
    return X.with_meta(tags=set(X.tags) | set(tags), expected=merged, case=case)


def _catalog() -> dict:
    entries = {
        "veronese:1:3": lambda: veronese(1, 3),
        "veronese:2:2": lambda: _with_case(veronese(2, 2), None, {"smooth-claimed"},
                                           s=4, delta=1, f=1, gamma=1, theta_formula=2),
        "veronese:3:2": lambda: _with_case(veronese(3, 2), None, {"smooth-claimed"}, s=6, f=1),
        "veronese:4:2": lambda: _with_case(veronese(4, 2), "viii", {"smooth-claimed"},
                                           s=8, delta=1, f=1, gamma=1, epsilon=1,
                                           theta_formula=2, species=3),
        "segre:2:2": lambda: _with_case(segre(2, 2), "iv", {"smooth-claimed"},
                                        s=7, delta=1, f=2, gamma=2, epsilon=2,
                                        theta_formula=3, species=2),
        "segre:2:3": lambda: _with_case(segre(2, 3), None, {"smooth-claimed"}, s=9, f=2),
        "segre:1:2": lambda: segre(1, 2),
        "cone:1:veronese:2:2": lambda: _with_case(cone_over(veronese(2, 2), 1), None, f=2),
        "cone:2:veronese:2:2": lambda: _with_case(cone_over(veronese(2, 2), 2), "i", f=3),
        "cone:3:veronese:1:4": lambda: _with_case(cone_over(veronese(1, 4), 3), "i", f=3),
        "cone:1:veronese:3:2": lambda: _with_case(cone_over(veronese(3, 2), 1), "i", f=2),
        "cone:1:segre:2:2": lambda: _with_case(cone_over(segre(2, 2), 1), None, f=3),
        "scroll-ex1": scroll_ex1,
        "scroll-ex2": scroll_ex2,
        "scroll-ex3": scroll_ex3,
        "v42-point": v42_internal,
        "v42-conic": v42_conic,
        "v42-quartic": v42_quartic,
        "seg23-section": seg23_section,
        "xii-point-cone": point_cone_segre_example,
        "xiii-line-cone": line_cone_v32_example,
        "xiv-v22-cone": v22_cone_example,
        "quadric3": lambda: quadric_threefold(True),
        "quadric3-rank4": lambda: quadric_threefold(False),
        "fourfold-p9": nondefective_fourfold,
    }
    return entries


CATALOG = _catalog()


def catalog_names() -> list[str]:
    return sorted(CATALOG)


def builtin(name: str) -> ParamVariety:
    """Resolve a canonical name such as ``veronese:4:2`` or ``cone:2:segre:2:2``."""
    if name in CATALOG:
        return CATALOG[name]()
    head, _, rest = name.partition(":")
    try:
        if head == "veronese":
            n, d = (int(x) for x in rest.split(":"))
            return veronese(n, d)
        if head == "segre":
            a, b = (int(x) for x in rest.split(":"))
            return segre(a, b)
        if head == "linear":
            return linear_space(int(rest))
        if head == "cone":
            k, _, base = rest.partition(":")
            return cone_over(builtin(base), int(k))
    except ValueError as exc:
        raise KeyError(f"bad builtin {name!r}: {exc}") from None
    raise KeyError(f"unknown builtin {name!r}")


# ---------------------------------------------------------------------------
# sampling


def random_point(X: ParamVariety, rng: RandomSource, fld: Field | None = None,
                 budget: int = RETRY_BUDGET):
    """A random parameter point and its (not identically zero) ambient vector."""
    fld = fld or rng.field
    for _ in range(budget):
        u = rng.raw_vector(X.n, fld)
        vals = X.values(fld, u)
        if any(v != 0 for v in vals):
            return u, vals
    raise SamplingError(f"{X.name}: coordinates vanish at every sampled point")


def _restricted_form(X: ParamVariety, h: Sequence, fld: PrimeField) -> dict[tuple, int]:
    p = fld.p
    out: dict[tuple, int] = {}
    for hj, poly in zip(h, X.coords):
        if hj % p == 0:
            continue
        for e, c in poly.terms.items():
            out[e] = (out.get(e, 0) + hj * fld.from_rational(c)) % p
    return {e: c for e, c in out.items() if c}


def hyperplane_point(X: ParamVariety, h: Sequence, rng: RandomSource,
                     budget: int = RETRY_BUDGET) -> list[int]:
    """A parameter point u over F_p with ``h . coords(u) = 0``.

    All but one randomly chosen parameter are fixed at random values and the
    remaining univariate equation is solved over F_p.
    """
    fld = rng.field
    if not isinstance(fld, PrimeField):
        raise ValueError("hyperplane_point works over a prime field")
    if len(h) != X.ncoords:
        raise ValueError("hyperplane has the wrong length")
    h = [x.value if hasattr(x, "value") else fld.coerce(x) for x in h]
    form = _restricted_form(X, h, fld)
    if not form:
        raise ValueError("hyperplane vanishes identically on the variety")
    p = fld.p
    for _ in range(budget):
        free = rng.randrange(X.n)
        u = rng.raw_vector(X.n, fld)
        uni: dict[int, int] = {}
        for e, c in form.items():
            t = c
            for i, k in enumerate(e):
                if i != free and k:
                    t = t * pow(u[i], k, p) % p
            uni[e[free]] = (uni.get(e[free], 0) + t) % p
        deg = max(uni)
        coeffs = [uni.get(k, 0) for k in range(deg + 1)]
        root = find_root_mod_p(coeffs, p, rng)
        if root is None:
            continue
        u[free] = root
        if any(v for v in X.values(fld, u)):
            return u
    raise SamplingError(f"{X.name}: no point on the hyperplane section after {budget} tries")
