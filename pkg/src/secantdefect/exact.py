"""Exact scalars, dense linear algebra over Q or F_p, and seeded randomness.

Algorithms work on raw field values (``int`` residues for F_p, ``Fraction``
for Q) and take the field as an explicit argument; :class:`FieldScalar` and
:class:`ExactMatrix` are thin checked wrappers used at API boundaries.
"""
from __future__ import annotations

import hashlib
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Union

from sympy import isprime

__all__ = [
    "FieldMismatchError",
    "HeightOverflowError",
    "BadPrimeError",
    "PrimeField",
    "RationalField",
    "Field",
    "FieldScalar",
    "ExactMatrix",
    "RandomSource",
    "random_scalar",
    "random_prime",
    "echelon",
    "rank",
    "kernel_basis",
    "row_space_meet",
    "matmul",
]

PRIME_LOW = 1 << 61
PRIME_HIGH = 1 << 63
DEFAULT_HEIGHT_CAP = 1 << 16
DEFAULT_WINDOW = 10**4


class FieldMismatchError(ValueError):
    """Raised when values from different fields are combined."""


class HeightOverflowError(ArithmeticError):
    """Raised when a rational exceeds the configured bit-height cap."""


class BadPrimeError(ArithmeticError):
    """A rational constant has a denominator divisible by the working prime."""


@dataclass(frozen=True)
class PrimeField:
    p: int

    tag = "modp"

    def __post_init__(self) -> None:
        if self.p < 3 or not isprime(self.p):
            raise ValueError(f"{self.p} is not an odd prime")

    @property
    def zero(self) -> int:
        return 0

    @property
    def one(self) -> int:
        return 1

    def coerce(self, x: Union[int, Fraction]) -> int:
        if isinstance(x, Fraction):
            return self.from_rational(x)
        return int(x) % self.p

    def from_rational(self, q: Fraction) -> int:
        den = q.denominator % self.p
        if den == 0:
            raise BadPrimeError(f"denominator {q.denominator} vanishes mod {self.p}")
        return q.numerator * pow(den, -1, self.p) % self.p

    def add(self, a: int, b: int) -> int:
        return (a + b) % self.p

    def sub(self, a: int, b: int) -> int:
        return (a - b) % self.p

    def mul(self, a: int, b: int) -> int:
        return a * b % self.p

    def neg(self, a: int) -> int:
        return -a % self.p

    def inv(self, a: int) -> int:
        if a % self.p == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(a, -1, self.p)

    def __str__(self) -> str:
        return f"F_{self.p}"


@dataclass(frozen=True)
class RationalField:
    height_cap: int = DEFAULT_HEIGHT_CAP

    tag = "rational"

    @property
    def zero(self) -> Fraction:
        return Fraction(0)

    @property
    def one(self) -> Fraction:
        return Fraction(1)

    def check(self, q: Fraction) -> Fraction:
        if (q.numerator.bit_length() > self.height_cap
                or q.denominator.bit_length() > self.height_cap):
            raise HeightOverflowError(f"rational height exceeds {self.height_cap} bits")
        return q

    def coerce(self, x: Union[int, Fraction]) -> Fraction:
        return self.check(Fraction(x))

    def from_rational(self, q: Fraction) -> Fraction:
        return self.check(Fraction(q))

    def add(self, a, b):
        return self.check(a + b)

    def sub(self, a, b):
        return self.check(a - b)

    def mul(self, a, b):
        return self.check(a * b)

    def neg(self, a):
        return -a

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return 1 / Fraction(a)

    def __str__(self) -> str:
        return "Q"


Field = Union[PrimeField, RationalField]


@dataclass(frozen=True)
class FieldScalar:
    """A field element tagged with its field; mixing fields raises."""

    value: Union[int, Fraction]
    field: Field

    def __post_init__(self) -> None:
        object.__setattr__(self, "value", self.field.coerce(self.value))

    def _other(self, other) -> Union[int, Fraction]:
        if isinstance(other, FieldScalar):
            if other.field != self.field:
                raise FieldMismatchError(f"{self.field} vs {other.field}")
            return other.value
        if isinstance(other, (int, Fraction)):
            return self.field.coerce(other)
        return NotImplemented

    def __add__(self, other):
        o = self._other(other)
        return FieldScalar(self.field.add(self.value, o), self.field)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._other(other)
        return FieldScalar(self.field.sub(self.value, o), self.field)

    def __rsub__(self, other):
        o = self._other(other)
        return FieldScalar(self.field.sub(o, self.value), self.field)

    def __mul__(self, other):
        o = self._other(other)
        return FieldScalar(self.field.mul(self.value, o), self.field)

    __rmul__ = __mul__

    def __neg__(self):
        return FieldScalar(self.field.neg(self.value), self.field)

    def __truediv__(self, other):
        o = self._other(other)
        return FieldScalar(self.field.mul(self.value, self.field.inv(o)), self.field)

    def __eq__(self, other) -> bool:
        if isinstance(other, FieldScalar):
            if other.field != self.field:
                raise FieldMismatchError(f"{self.field} vs {other.field}")
            return self.value == other.value
        if isinstance(other, (int, Fraction)):
            return self.value == self.field.coerce(other)
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.value, self.field))

    def is_zero(self) -> bool:
        return self.value == 0

    def __repr__(self) -> str:
        return f"FieldScalar({self.value}, {self.field})"


# ---------------------------------------------------------------------------
# elimination on raw rows


def echelon(rows: Sequence[Sequence], field: Field, ncols: int | None = None):
    """Reduced row echelon form. Returns ``(nonzero_rows, pivot_columns)``.

    Pivots are the first nonzero entry in column order.
    """
    m = [list(r) for r in rows]
    if ncols is None:
        ncols = len(m[0]) if m else 0
    pivots: list[int] = []
    nrows = len(m)
    if isinstance(field, PrimeField):
        p = field.p
        top = 0
        for c in range(ncols):
            if top == nrows:
                break
            piv = None
            for i in range(top, nrows):
                if m[i][c]:
                    piv = i
                    break
            if piv is None:
                continue
            m[top], m[piv] = m[piv], m[top]
            inv = pow(m[top][c], -1, p)
            prow = [x * inv % p for x in m[top]]
            m[top] = prow
            for i in range(nrows):
                if i != top:
                    a = m[i][c]
                    if a:
                        m[i] = [(x - a * y) % p for x, y in zip(m[i], prow)]
            pivots.append(c)
            top += 1
        return m[:top], pivots
    cap = field.check
    top = 0
    for c in range(ncols):
        if top == nrows:
            break
        piv = None
        for i in range(top, nrows):
            if m[i][c] != 0:
                piv = i
                break
        if piv is None:
            continue
        m[top], m[piv] = m[piv], m[top]
        inv = 1 / Fraction(m[top][c])
        prow = [Fraction(x) * inv for x in m[top]]
        m[top] = prow
        for i in range(nrows):
            if i != top:
                a = m[i][c]
                if a != 0:
                    m[i] = [cap(x - a * y) for x, y in zip(m[i], prow)]
        pivots.append(c)
        top += 1
    return m[:top], pivots


def rank(rows, field: Field | None = None, ncols: int | None = None) -> int:
    """Rank of a raw row list, or of an :class:`ExactMatrix` when ``field`` is omitted."""
    if isinstance(rows, ExactMatrix):
        return rows.rank()
    if not rows:
        return 0
    return len(echelon(rows, field, ncols)[0])


def kernel_basis(rows, field: Field | None = None, ncols: int | None = None) -> list[list]:
    """Right kernel basis as raw vectors, one per free column."""
    if isinstance(rows, ExactMatrix):
        return [list(v) for v in rows.kernel_basis()]
    if ncols is None:
        ncols = len(rows[0])
    zero = field.zero
    one = field.one
    if not rows:
        return [[one if j == i else zero for j in range(ncols)] for i in range(ncols)]
    red, pivots = echelon(rows, field, ncols)
    pivset = set(pivots)
    basis = []
    for free in range(ncols):
        if free in pivset:
            continue
        v = [zero] * ncols
        v[free] = one
        for row, pc in zip(red, pivots):
            v[pc] = field.neg(row[free])
        basis.append(v)
    return basis


def row_space_meet(a, b, field: Field | None = None) -> list[list]:
    """Basis (raw rows) of the intersection of the row spaces of ``a`` and ``b``."""
    if isinstance(a, ExactMatrix):
        if not isinstance(b, ExactMatrix):
            raise TypeError("both arguments must be ExactMatrix")
        if a.field != b.field:
            raise FieldMismatchError(f"{a.field} vs {b.field}")
        if a.cols != b.cols:
            raise ValueError("column counts differ")
        meet = row_space_meet(a.rows, b.rows, a.field)
        return ExactMatrix(meet, a.field, cols=a.cols)
    if not a or not b:
        return []
    ncols = len(a[0])
    a = echelon(a, field, ncols)[0]
    b = echelon(b, field, ncols)[0]
    if not a or not b:
        return []
    # left kernel of [a; b]: x·a + y·b = 0 puts x·a in both spans
    stacked = a + b
    transposed = [list(col) for col in zip(*stacked)]
    combos = kernel_basis(transposed, field, len(stacked))
    out = []
    for x in combos:
        out.append(_combine(x[:len(a)], a, field))
    return echelon(out, field, ncols)[0] if out else []


def _combine(coeffs, rows, field: Field) -> list:
    ncols = len(rows[0])
    if isinstance(field, PrimeField):
        p = field.p
        acc = [0] * ncols
        for c, row in zip(coeffs, rows):
            if c:
                acc = [(x + c * y) % p for x, y in zip(acc, row)]
        return acc
    acc = [Fraction(0)] * ncols
    for c, row in zip(coeffs, rows):
        if c:
            acc = [field.check(x + c * y) for x, y in zip(acc, row)]
    return acc


def matmul(a, b, field: Field) -> list[list]:
    """Raw matrix product ``a @ b``."""
    bt = list(zip(*b))
    if isinstance(field, PrimeField):
        p = field.p
        return [[sum(x * y for x, y in zip(row, col)) % p for col in bt] for row in a]
    return [[field.check(sum((x * y for x, y in zip(row, col)), Fraction(0))) for col in bt]
            for row in a]


class ExactMatrix:
    """Immutable dense matrix over one exact field."""

    __slots__ = ("rows", "field", "cols")

    def __init__(self, rows, field: Field, cols: int | None = None):
        conv = []
        for row in rows:
            r = []
            for x in row:
                if isinstance(x, FieldScalar):
                    if x.field != field:
                        raise FieldMismatchError(f"{x.field} vs {field}")
                    r.append(x.value)
                else:
                    r.append(field.coerce(x))
            conv.append(tuple(r))
        if cols is None:
            cols = len(conv[0]) if conv else 0
        if any(len(r) != cols for r in conv):
            raise ValueError("ragged matrix")
        self.rows = tuple(conv)
        self.field = field
        self.cols = cols

    @classmethod
    def identity(cls, n: int, field: Field) -> "ExactMatrix":
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)], field)

    @classmethod
    def zeros(cls, m: int, n: int, field: Field) -> "ExactMatrix":
        return cls([[0] * n for _ in range(m)], field, cols=n)

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def shape(self) -> tuple[int, int]:
        return (len(self.rows), self.cols)

    def __getitem__(self, ij) -> FieldScalar:
        i, j = ij
        return FieldScalar(self.rows[i][j], self.field)

    def __eq__(self, other) -> bool:
        return (isinstance(other, ExactMatrix) and self.field == other.field
                and self.cols == other.cols and self.rows == other.rows)

    def __hash__(self) -> int:
        return hash((self.rows, self.field, self.cols))

    def __matmul__(self, other: "ExactMatrix") -> "ExactMatrix":
        if self.field != other.field:
            raise FieldMismatchError(f"{self.field} vs {other.field}")
        if self.cols != other.nrows:
            raise ValueError("shape mismatch")
        return ExactMatrix(matmul(self.rows, other.rows, self.field), self.field, cols=other.cols)

    def transpose(self) -> "ExactMatrix":
        return ExactMatrix(list(zip(*self.rows)), self.field, cols=self.nrows)

    def stack(self, other: "ExactMatrix") -> "ExactMatrix":
        if self.field != other.field:
            raise FieldMismatchError(f"{self.field} vs {other.field}")
        if self.cols != other.cols:
            raise ValueError("column counts differ")
        return ExactMatrix(self.rows + other.rows, self.field, cols=self.cols)

    def rank(self) -> int:
        return rank(self.rows, self.field, self.cols)

    def kernel_basis(self) -> list[tuple]:
        return [tuple(v) for v in kernel_basis(self.rows, self.field, self.cols)]

    def apply(self, v: Sequence) -> list:
        """``M·v`` for a raw column vector."""
        if not self.rows:
            return []
        return [row[0] for row in matmul(self.rows, [[x] for x in v], self.field)]

    def __repr__(self) -> str:
        return f"ExactMatrix({self.nrows}x{self.cols} over {self.field})"


# ---------------------------------------------------------------------------
# randomness


def _derive(seed: int, label: str) -> int:
    digest = hashlib.sha256(f"{seed}:{label}".encode()).digest()
    return int.from_bytes(digest[:8], "big")


class RandomSource:
    """Seeded scalar stream bound to a field.

    Children created with :meth:`child` get independent streams derived
    deterministically from ``(seed, label)``.
    """

    def __init__(self, seed: int, field: Field | None = None, window: int = DEFAULT_WINDOW):
        if not 0 <= seed < 1 << 64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        self.seed = seed
        self.field = field
        self.window = window
        self._rng = random.Random(seed)
        self.position = 0

    def child(self, label: str, field: Field | None = None) -> "RandomSource":
        return RandomSource(_derive(self.seed, label), field or self.field, self.window)

    def raw(self, field: Field | None = None):
        """Next raw value in ``field`` (defaults to the bound field)."""
        field = field or self.field
        if field is None:
            raise ValueError("no field configured")
        self.position += 1
        if isinstance(field, PrimeField):
            return self._rng.randrange(field.p)
        return Fraction(self._rng.randint(-self.window, self.window))

    def raw_vector(self, n: int, field: Field | None = None) -> list:
        return [self.raw(field) for _ in range(n)]

    def randrange(self, n: int) -> int:
        self.position += 1
        return self._rng.randrange(n)

    def randbits(self, k: int) -> int:
        self.position += 1
        return self._rng.getrandbits(k)


def random_scalar(rng: RandomSource, field: Field | None = None) -> FieldScalar:
    field = field or rng.field
    return FieldScalar(rng.raw(field), field)


def random_prime(rng: RandomSource) -> int:
    """Uniformly drawn prime with 2^61 < p < 2^63."""
    while True:
        c = PRIME_LOW + 1 + rng.randrange(PRIME_HIGH - PRIME_LOW - 1)
        c |= 1
        if c < PRIME_HIGH and isprime(c):
            return c
