"""Sparse multivariate polynomials over Q, dense univariate ones, and F_p root finding."""
from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Mapping, Sequence, Union

from .exact import Field, FieldMismatchError, FieldScalar, PrimeField, RandomSource

__all__ = [
    "MPoly",
    "UPoly",
    "INFINITY",
    "upoly_gcd",
    "content_and_orders",
    "order_at",
    "compile_polys",
    "find_root_mod_p",
]

Number = Union[int, Fraction]


class _Infinity:
    __slots__ = ()

    def __repr__(self) -> str:
        return "INFINITY"


INFINITY = _Infinity()


class MPoly:
    """Sparse polynomial with rational coefficients in a fixed ordered variable list."""

    __slots__ = ("variables", "terms", "_hash")

    def __init__(self, variables: Sequence[str], terms: Mapping[tuple, Number] | None = None):
        self.variables = tuple(variables)
        k = len(self.variables)
        clean = {}
        for exps, c in (terms or {}).items():
            if c == 0:
                continue
            exps = tuple(exps)
            if len(exps) != k or any(e < 0 for e in exps):
                raise ValueError(f"bad exponent vector {exps}")
            clean[exps] = Fraction(c)
        self.terms = clean
        self._hash = None

    @classmethod
    def var(cls, variables: Sequence[str], name: str) -> "MPoly":
        variables = tuple(variables)
        i = variables.index(name)
        return cls(variables, {tuple(int(j == i) for j in range(len(variables))): 1})

    @classmethod
    def const(cls, variables: Sequence[str], c: Number) -> "MPoly":
        return cls(variables, {(0,) * len(tuple(variables)): c})

    def _lift(self, other) -> "MPoly":
        if isinstance(other, MPoly):
            if other.variables != self.variables:
                raise ValueError(f"variable lists differ: {self.variables} vs {other.variables}")
            return other
        if isinstance(other, (int, Fraction)):
            return MPoly.const(self.variables, other)
        return NotImplemented

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) + c
        return MPoly(self.variables, out)

    __radd__ = __add__

    def __neg__(self):
        return MPoly(self.variables, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        out: dict[tuple, Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return MPoly(self.variables, out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "MPoly":
        if k < 0:
            raise ValueError("negative exponent")
        result = MPoly.const(self.variables, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = MPoly.const(self.variables, other)
        if not isinstance(other, MPoly):
            return NotImplemented
        return self.variables == other.variables and self.terms == other.terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.variables, frozenset(self.terms.items())))
        return self._hash

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(e) for e in self.terms), default=-1)

    def degree_in(self, v: str) -> int:
        i = self.variables.index(v)
        return max((e[i] for e in self.terms), default=-1)

    def constant_term(self) -> Fraction:
        return self.terms.get((0,) * len(self.variables), Fraction(0))

    def diff(self, v: str) -> "MPoly":
        if v not in self.variables:
            raise ValueError(f"{v!r} is not a variable of this polynomial")
        i = self.variables.index(v)
        out = {}
        for e, c in self.terms.items():
            if e[i]:
                ne = e[:i] + (e[i] - 1,) + e[i + 1:]
                out[ne] = c * e[i]
        return MPoly(self.variables, out)

    def eval(self, point: Sequence) -> FieldScalar | Fraction:
        """Evaluate at a point of FieldScalars (or plain rationals, giving a Fraction)."""
        if len(point) != len(self.variables):
            raise ValueError("point length does not match variable count")
        if point and all(isinstance(x, FieldScalar) for x in point):
            field = point[0].field
            for x in point:
                if x.field != field:
                    raise FieldMismatchError(f"{x.field} vs {field}")
            return FieldScalar(self.eval_raw(field, [x.value for x in point]), field)
        if any(isinstance(x, FieldScalar) for x in point):
            raise FieldMismatchError("point mixes field scalars and plain numbers")
        total = Fraction(0)
        for e, c in self.terms.items():
            term = c
            for x, k in zip(point, e):
                if k:
                    term *= Fraction(x) ** k
            total += term
        return total

    def eval_raw(self, field: Field, values: Sequence):
        return compile_polys([self], field)(values)[0]

    def substitute(self, assignment: Mapping[str, "MPoly"]) -> "MPoly":
        """Replace variables by polynomials; unassigned ones map to themselves."""
        if not assignment:
            return self
        newvars = next(iter(assignment.values())).variables
        if any(im.variables != newvars for im in assignment.values()):
            raise ValueError("assignment images live in different variable lists")
        images = []
        for v in self.variables:
            if v in assignment:
                images.append(assignment[v])
            elif v in newvars:
                images.append(MPoly.var(newvars, v))
            else:
                raise ValueError(f"no image for {v!r}")
        powers: list[dict[int, MPoly]] = [{0: MPoly.const(newvars, 1), 1: im} for im in images]

        def power(i: int, k: int) -> MPoly:
            cache = powers[i]
            if k not in cache:
                cache[k] = power(i, k - 1) * images[i]
            return cache[k]

        out: dict[tuple, Fraction] = {}
        for e, c in self.terms.items():
            term = MPoly.const(newvars, c)
            for i, k in enumerate(e):
                if k:
                    term = term * power(i, k)
            for te, tc in term.terms.items():
                out[te] = out.get(te, 0) + tc
        return MPoly(newvars, out)

    def rename(self, variables: Sequence[str]) -> "MPoly":
        """Same polynomial with the variable names replaced positionally."""
        if len(variables) != len(self.variables):
            raise ValueError("rename needs the same number of variables")
        return MPoly(variables, self.terms)

    def embed(self, variables: Sequence[str]) -> "MPoly":
        """Reinterpret in a larger variable list containing all current variables."""
        variables = tuple(variables)
        idx = [variables.index(v) for v in self.variables]
        out = {}
        for e, c in self.terms.items():
            ne = [0] * len(variables)
            for j, k in zip(idx, e):
                ne[j] = k
            out[tuple(ne)] = c
        return MPoly(variables, out)

    def to_upoly(self) -> "UPoly":
        if len(self.variables) != 1:
            raise ValueError("not univariate")
        deg = self.degree()
        coeffs = [Fraction(0)] * (deg + 1)
        for (k,), c in self.terms.items():
            coeffs[k] = c
        return UPoly(coeffs)

    def sorted_terms(self) -> list[tuple[tuple, Fraction]]:
        """Terms by descending total degree, then lexicographically descending exponents."""
        return sorted(self.terms.items(), key=lambda t: (-sum(t[0]), tuple(-k for k in t[0])))

    def to_str(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for exps, c in self.sorted_terms():
            factors = []
            for v, k in zip(self.variables, exps):
                if k == 1:
                    factors.append(v)
                elif k > 1:
                    factors.append(f"{v}^{k}")
            mag = abs(c)
            if mag != 1 or not factors:
                factors.insert(0, str(mag))
            body = "*".join(factors)
            if not parts:
                parts.append(("-" if c < 0 else "") + body)
            else:
                parts.append((" - " if c < 0 else " + ") + body)
        return "".join(parts)

    def __repr__(self) -> str:
        return f"MPoly({self.to_str()!r}, vars={list(self.variables)})"


class _Compiled:
    """A batch of polynomials reduced into one field for fast repeated evaluation."""

    __slots__ = ("field", "nvars", "polys", "maxdeg")

    def __init__(self, polys: Sequence[MPoly], field: Field):
        self.field = field
        self.nvars = len(polys[0].variables) if polys else 0
        maxdeg = [0] * self.nvars
        compiled = []
        for poly in polys:
            terms = []
            for e, c in poly.terms.items():
                fac = tuple((i, k) for i, k in enumerate(e) if k)
                for i, k in fac:
                    if k > maxdeg[i]:
                        maxdeg[i] = k
                terms.append((field.from_rational(c), fac))
            compiled.append(terms)
        self.polys = compiled
        self.maxdeg = maxdeg

    def __call__(self, values: Sequence) -> list:
        field = self.field
        if isinstance(field, PrimeField):
            p = field.p
            pw = []
            for x, m in zip(values, self.maxdeg):
                row = [1, x % p]
                for _ in range(m - 1):
                    row.append(row[-1] * x % p)
                pw.append(row)
            out = []
            for terms in self.polys:
                acc = 0
                for c, fac in terms:
                    t = c
                    for i, k in fac:
                        t = t * pw[i][k] % p
                    acc += t
                out.append(acc % p)
            return out
        pw = []
        for x, m in zip(values, self.maxdeg):
            row = [Fraction(1), Fraction(x)]
            for _ in range(m - 1):
                row.append(row[-1] * x)
            pw.append(row)
        out = []
        for terms in self.polys:
            acc = Fraction(0)
            for c, fac in terms:
                t = c
                for i, k in fac:
                    t = t * pw[i][k]
                acc += t
            out.append(field.check(acc))
        return out


def compile_polys(polys: Sequence[MPoly], field: Field) -> _Compiled:
    return _Compiled(polys, field)


# ---------------------------------------------------------------------------
# univariate over Q


class UPoly:
    """Dense univariate polynomial over Q, coefficients low degree first."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[Number]):
        cs = [Fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs = tuple(cs)

    @classmethod
    def t(cls) -> "UPoly":
        return cls([0, 1])

    @classmethod
    def const(cls, c: Number) -> "UPoly":
        return cls([c])

    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def lc(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def __add__(self, other):
        other = _ulift(other)
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (Fraction(0),) * (n - len(self.coeffs))
        b = other.coeffs + (Fraction(0),) * (n - len(other.coeffs))
        return UPoly(x + y for x, y in zip(a, b))

    __radd__ = __add__

    def __neg__(self):
        return UPoly(-c for c in self.coeffs)

    def __sub__(self, other):
        return self + (-_ulift(other))

    def __rsub__(self, other):
        return _ulift(other) - self

    def __mul__(self, other):
        other = _ulift(other)
        if self.is_zero() or other.is_zero():
            return UPoly([])
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return UPoly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "UPoly":
        result = UPoly([1])
        for _ in range(k):
            result = result * self
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = UPoly([other])
        if not isinstance(other, UPoly):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def diff(self) -> "UPoly":
        return UPoly(c * i for i, c in enumerate(self.coeffs) if i)

    def __call__(self, x: Number) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def compose(self, q: "UPoly") -> "UPoly":
        acc = UPoly([])
        for c in reversed(self.coeffs):
            acc = acc * q + c
        return acc

    def divmod(self, other: "UPoly") -> tuple["UPoly", "UPoly"]:
        if other.is_zero():
            raise ZeroDivisionError("division by zero polynomial")
        rem = list(self.coeffs)
        dq = len(rem) - len(other.coeffs) + 1
        if dq <= 0:
            return UPoly([]), self
        quot = [Fraction(0)] * dq
        lead = other.coeffs[-1]
        for k in range(dq - 1, -1, -1):
            c = rem[k + len(other.coeffs) - 1] / lead
            quot[k] = c
            if c:
                for j, b in enumerate(other.coeffs):
                    rem[k + j] -= c * b
        return UPoly(quot), UPoly(rem[:len(other.coeffs) - 1])

    def monic(self) -> "UPoly":
        if self.is_zero():
            return self
        lead = self.coeffs[-1]
        return UPoly(c / lead for c in self.coeffs)

    def reciprocal(self, d: int) -> "UPoly":
        """``s^d · p(1/s)``, the chart at infinity for degree-``d`` homogenization."""
        if self.degree() > d:
            raise ValueError("degree exceeds homogenization degree")
        cs = list(self.coeffs) + [Fraction(0)] * (d + 1 - len(self.coeffs))
        return UPoly(reversed(cs))

    def to_str(self, var: str = "t") -> str:
        return MPoly([var], {(k,): c for k, c in enumerate(self.coeffs)}).to_str()

    def __repr__(self) -> str:
        return f"UPoly({self.to_str()!r})"


def _ulift(x) -> UPoly:
    if isinstance(x, UPoly):
        return x
    if isinstance(x, (int, Fraction)):
        return UPoly([x])
    raise TypeError(f"cannot combine UPoly with {type(x).__name__}")


def _primitive(coeffs: Sequence[Fraction]) -> list[int]:
    den = lcm(*(c.denominator for c in coeffs)) if coeffs else 1
    ints = [int(c * den) for c in coeffs]
    g = 0
    for x in ints:
        g = gcd(g, x)
    if g == 0:
        return []
    ints = [x // g for x in ints]
    if ints[-1] < 0:
        ints = [-x for x in ints]
    return ints


def _prem(a: list[int], b: list[int]) -> list[int]:
    """Pseudo-remainder of integer coefficient lists."""
    r = list(a)
    lb = b[-1]
    db = len(b) - 1
    while len(r) - 1 >= db and r:
        shift = len(r) - 1 - db
        lr = r[-1]
        r = [x * lb for x in r]
        for j, y in enumerate(b):
            r[shift + j] -= lr * y
        while r and r[-1] == 0:
            r.pop()
    return r


def upoly_gcd(a: UPoly, b: UPoly) -> UPoly:
    """Monic gcd over Q via primitive pseudo-remainder sequences."""
    if a.is_zero():
        return b.monic()
    if b.is_zero():
        return a.monic()
    x, y = _primitive(a.coeffs), _primitive(b.coeffs)
    if len(x) < len(y):
        x, y = y, x
    while y:
        r = _prem(x, y)
        x, y = y, (_primitive([Fraction(c) for c in r]) if r else [])
    return UPoly(x).monic()


def content_and_orders(ps: Sequence[UPoly], reference_degree: int | None = None):
    """gcd of ``ps``, its degree, and the order at infinity of the system.

    The order at infinity is ``min(ref - deg p)`` over nonzero members, where
    ``ref`` defaults to the largest degree present (so the default is 0).
    Pass the homogenization degree as ``reference_degree`` for the
    coordinate-chart meaning.
    """
    nonzero = [p for p in ps if not p.is_zero()]
    if not nonzero:
        raise ValueError("all polynomials are zero")
    g = UPoly([])
    for p in nonzero:
        g = upoly_gcd(g, p)
        if g.degree() == 0:
            break
    ref = max(p.degree() for p in nonzero) if reference_degree is None else reference_degree
    at_inf = min(ref - p.degree() for p in nonzero)
    return g, g.degree(), at_inf


def order_at(p: UPoly, t0, reference_degree: int | None = None) -> int:
    """Vanishing order of ``p`` at a rational ``t0`` or at :data:`INFINITY`."""
    if p.is_zero():
        raise ValueError("order of the zero polynomial")
    if t0 is INFINITY:
        if reference_degree is None:
            raise ValueError("order at infinity needs a reference degree")
        return reference_degree - p.degree()
    t0 = Fraction(t0)
    coeffs = list(p.coeffs)
    k = 0
    while True:
        # synthetic division by (t - t0)
        acc = Fraction(0)
        quot = []
        for c in reversed(coeffs):
            acc = acc * t0 + c
            quot.append(acc)
        if acc != 0:
            return k
        coeffs = list(reversed(quot[:-1]))
        k += 1


# ---------------------------------------------------------------------------
# univariate over F_p (lists low degree first, trimmed)


def _ptrim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _pmul(a: list[int], b: list[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _ptrim([c % p for c in out])


def _pdivmod(a: list[int], b: list[int], p: int) -> tuple[list[int], list[int]]:
    r = list(a)
    db = len(b) - 1
    inv = pow(b[-1], -1, p)
    if len(r) - 1 < db:
        return [], r
    q = [0] * (len(r) - db)
    for k in range(len(r) - 1 - db, -1, -1):
        c = r[k + db] * inv % p
        q[k] = c
        if c:
            for j, y in enumerate(b):
                r[k + j] = (r[k + j] - c * y) % p
    return _ptrim(q), _ptrim(r[:db])


def _pmonic(a: list[int], p: int) -> list[int]:
    inv = pow(a[-1], -1, p)
    return [x * inv % p for x in a]


def _pgcd(a: list[int], b: list[int], p: int) -> list[int]:
    a, b = _ptrim(list(a)), _ptrim(list(b))
    while b:
        a, b = b, _pdivmod(a, b, p)[1]
    return _pmonic(a, p) if a else []


def _ppowmod(base: list[int], e: int, mod: list[int], p: int) -> list[int]:
    result = [1]
    base = _pdivmod(base, mod, p)[1]
    while e:
        if e & 1:
            result = _pdivmod(_pmul(result, base, p), mod, p)[1]
        base = _pdivmod(_pmul(base, base, p), mod, p)[1]
        e >>= 1
    return result


def find_root_mod_p(coeffs: Sequence[int], p: int, rng: RandomSource) -> int | None:
    """A root in F_p of the polynomial with the given coefficients, or ``None``.

    Isolates the product of linear factors with ``gcd(f, x^p - x)`` and
    splits it by equal-degree (Cantor-Zassenhaus) splitting.
    """
    f = _ptrim([c % p for c in coeffs])
    if not f:
        return rng.randrange(p)
    if len(f) == 1:
        return None
    f = _pmonic(f, p)
    xp = _ppowmod([0, 1], p, f, p)
    h = list(xp) + [0] * max(0, 2 - len(xp))
    h[1] = (h[1] - 1) % p
    g = _pgcd(f, _ptrim(h), p) if _ptrim(list(h)) else f
    if len(g) < 2:
        return None
    while len(g) > 2:
        a = rng.randrange(p)
        w = _ppowmod([a, 1], (p - 1) // 2, g, p)
        w = list(w) + [0] * max(0, 1 - len(w))
        w[0] = (w[0] - 1) % p
        w = _ptrim(w)
        if not w:
            continue
        d = _pgcd(g, w, p)
        if 1 < len(d) < len(g):
            other = _pdivmod(g, d, p)[0]
            g = d if len(d) <= len(other) else _pmonic(other, p)
    return -g[0] * pow(g[1], -1, p) % p
