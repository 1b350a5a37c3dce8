"""Secant defect invariants by exact sampling.

Every quantity comes from ranks of tangent frames (point vector plus
Jacobian rows) and of second fundamental forms at random points over a
prime field.  Ranks of spans are maximized over trials, kernel dimensions
minimized, and top-level reports are accepted only when several primes and
seeds agree.
"""
from __future__ import annotations

from dataclasses import asdict, dataclass, field as dc_field
from typing import Sequence

from .catalog import LinearCenter, ParamVariety, SamplingError, hyperplane_point, join, project
from .exact import (Field, PrimeField, RandomSource, RationalField,
                    echelon, kernel_basis, matmul, random_prime, rank, row_space_meet)

__all__ = [
    "NotDefectiveError",
    "TangentFrame",
    "QuadricSystem",
    "LinearImage",
    "InvariantReport",
    "tangent_frame",
    "chart_dim",
    "secant_dim",
    "secant_dim_join_oracle",
    "fibre_defect",
    "second_fundamental_form",
    "tangential_defect",
    "dual_defect",
    "tangential_projection",
    "gamma",
    "epsilon",
    "theta_oracle",
    "cone_vertex",
    "section_defects",
    "analyze",
    "full_report",
]

DEFAULT_TRIALS = 3
FRAME_BUDGET = 32


class NotDefectiveError(ValueError):
    """The invariant is only defined for secant defective varieties."""


@dataclass(frozen=True)
class TangentFrame:
    u: tuple
    point: tuple
    rows: tuple
    rank: int


@dataclass(frozen=True)
class QuadricSystem:
    """Second fundamental form at one point.

    ``matrices`` is a basis of the span of the conormal Hessian combinations;
    ``fibre`` is the dimension of the chart's fibres through the point (zero
    for an immersive chart) and is subtracted from kernel counts.
    """

    field: Field
    n: int
    matrices: tuple
    conormal: tuple
    fibre: int

    @property
    def m(self) -> int:
        return len(self.matrices)

    @property
    def projective_dim(self) -> int:
        return len(self.matrices) - 1

    def common_kernel_dim(self) -> int:
        if not self.matrices:
            return self.n - self.fibre
        stacked = [row for Q in self.matrices for row in Q]
        return self.n - rank(stacked, self.field, self.n) - self.fibre

    def combination_kernel_dim(self, coeffs: Sequence) -> int:
        if not self.matrices:
            return self.n - self.fibre
        fld = self.field
        combo = [[fld.zero] * self.n for _ in range(self.n)]
        for c, Q in zip(coeffs, self.matrices):
            for i in range(self.n):
                row = combo[i]
                for j in range(self.n):
                    row[j] = fld.add(row[j], fld.mul(c, Q[i][j]))
        return self.n - rank(combo, fld, self.n) - self.fibre

    def restrict(self, basis: Sequence[Sequence]) -> "QuadricSystem":
        """Restriction to the span of the given direction vectors (``B^T Q B``)."""
        B = [list(col) for col in zip(*basis)]
        Bt = [list(v) for v in basis]
        mats = tuple(matmul(matmul(Bt, Q, self.field), B, self.field) for Q in self.matrices)
        return QuadricSystem(self.field, len(basis), mats, self.conormal, self.fibre)


class LinearImage:
    """The chart ``L . base(u)`` for a fixed matrix ``L`` over one field."""

    def __init__(self, base, L: Sequence[Sequence], fld: Field, name: str = ""):
        self.base = base
        self.L = [list(r) for r in L]
        self.field = fld
        self.name = name or f"image:{getattr(base, 'name', '?')}"

    @property
    def nparams(self) -> int:
        return self.base.nparams

    @property
    def ncoords(self) -> int:
        return len(self.L)

    def _apply(self, vec):
        return [row[0] for row in matmul(self.L, [[x] for x in vec], self.field)]

    def jet(self, fld: Field, u: Sequence, order: int = 1):
        if fld != self.field:
            raise ValueError("linear image is bound to another field")
        vals, jac, hess = self.base.jet(fld, u, order)
        vals = self._apply(vals)
        jac = [self._apply(row) for row in jac]
        if hess is not None:
            n = len(hess)
            new = [[None] * n for _ in range(n)]
            for a in range(n):
                for b in range(a, n):
                    new[a][b] = new[b][a] = self._apply(hess[a][b])
            hess = new
        return vals, jac, hess

    def values(self, fld: Field, u: Sequence) -> list:
        return self.jet(fld, u, 0)[0]


def _secant_chart(X):
    """Cached join(X, X) for ParamVarieties."""
    if isinstance(X, ParamVariety):
        cache = X._compiled
        if "secant-chart" not in cache:
            cache["secant-chart"] = join(X, X)
        return cache["secant-chart"]
    raise TypeError("secant charts need a ParamVariety")


# ---------------------------------------------------------------------------
# frames


def _frame(chart, fld: Field, u: Sequence) -> list:
    vals, jac, _ = chart.jet(fld, u, 1)
    return [vals] + jac


def tangent_frame(X, u: Sequence, fld: Field | None = None) -> TangentFrame:
    """Point vector followed by the Jacobian rows at ``u``."""
    if fld is None:
        fld = u[0].field if u and hasattr(u[0], "field") else PrimeField(_default_prime())
    u = [x.value if hasattr(x, "value") else fld.coerce(x) for x in u]
    rows = _frame(X, fld, u)
    if all(v == 0 for v in rows[0]):
        raise ValueError("all coordinates vanish at this parameter point")
    return TangentFrame(tuple(u), tuple(rows[0]), tuple(tuple(r) for r in rows),
                        rank(rows, fld, X.ncoords))


def _default_prime() -> int:
    return random_prime(RandomSource(0))


def _sample_frame(chart, rng: RandomSource, want: int | None = None,
                  budget: int = FRAME_BUDGET):
    """Random point and frame; with ``want`` set, resample until the frame has that rank."""
    fld = rng.field
    for _ in range(budget):
        u = rng.raw_vector(chart.nparams, fld)
        rows = _frame(chart, fld, u)
        if all(v == 0 for v in rows[0]):
            continue
        if want is None or rank(rows, fld, chart.ncoords) == want:
            return u, rows
    raise SamplingError(f"{getattr(chart, 'name', 'chart')}: no frame of rank {want} "
                        f"in {budget} samples")


def chart_dim(chart, rng: RandomSource, trials: int = DEFAULT_TRIALS) -> int:
    """Projective dimension of the image: max frame rank over trials, minus one."""
    best = -1
    for _ in range(trials):
        _, rows = _sample_frame(chart, rng)
        best = max(best, rank(rows, rng.field, chart.ncoords) - 1)
    return best


def _secant_samples(X, rng: RandomSource, dim: int, trials: int):
    best, pair = -1, None
    for _ in range(trials):
        _, F0 = _sample_frame(X, rng, dim + 1)
        _, F1 = _sample_frame(X, rng, dim + 1)
        s = rank(F0 + F1, rng.field, X.ncoords) - 1
        if s > best:
            best, pair = s, (F0, F1)
    return best, pair


def secant_dim(X, rng: RandomSource, trials: int = DEFAULT_TRIALS) -> int:
    """dim S(X) from the span of tangent frames at two random points."""
    dim = chart_dim(X, rng, trials)
    return _secant_samples(X, rng, dim, trials)[0]


def secant_dim_join_oracle(X, rng: RandomSource, trials: int = DEFAULT_TRIALS) -> int:
    """dim S(X) as the image dimension of the join chart of X with itself."""
    return chart_dim(_secant_chart(X), rng, trials)


def fibre_defect(X, rng: RandomSource, trials: int = DEFAULT_TRIALS) -> tuple[int, int]:
    """``(f, meet_rank)``: f = 2n+1-s and the rank of the meet of the two frames."""
    dim = chart_dim(X, rng, trials)
    s, (F0, F1) = _secant_samples(X, rng, dim, trials)
    meet = row_space_meet(F0, F1, rng.field)
    return 2 * dim + 1 - s, len(meet)


# ---------------------------------------------------------------------------
# second fundamental form


def _quadric_system(chart, fld: Field, u: Sequence, full_rank: int | None = None) -> QuadricSystem:
    vals, jac, hess = chart.jet(fld, u, 2)
    frame = [vals] + jac
    n = chart.nparams
    frame_rank = rank(frame, fld, chart.ncoords)
    fibre = n - (frame_rank - 1) if full_rank is None else n - (full_rank - 1)
    conormal = kernel_basis(frame, fld, chart.ncoords)
    flat = []
    for lam in conormal:
        entries = []
        for a in range(n):
            for b in range(a, n):
                vec = hess[a][b]
                entries.append(_dot(lam, vec, fld))
        flat.append(entries)
    basis = echelon(flat, fld, n * (n + 1) // 2)[0] if flat else []
    mats = []
    for entries in basis:
        Q = [[fld.zero] * n for _ in range(n)]
        k = 0
        for a in range(n):
            for b in range(a, n):
                Q[a][b] = Q[b][a] = entries[k]
                k += 1
        mats.append(Q)
    return QuadricSystem(fld, n, tuple(mats), tuple(tuple(v) for v in conormal), fibre)


def _dot(a, b, fld: Field):
    if isinstance(fld, PrimeField):
        return sum(x * y for x, y in zip(a, b)) % fld.p
    return fld.check(sum(x * y for x, y in zip(a, b)))


def second_fundamental_form(X, u: Sequence, fld: Field | None = None) -> QuadricSystem:
    """II at ``u``: conormal combinations of the coordinate Hessians."""
    frame = tangent_frame(X, u, fld)
    fld = fld or (u[0].field if hasattr(u[0], "field") else None)
    if fld is None:
        raise ValueError("field required")
    if frame.rank != X.nparams + 1:
        raise ValueError("degenerate tangent frame at this point")
    return _quadric_system(X, fld, list(frame.u))


def _random_system(chart, rng: RandomSource, dim: int | None) -> QuadricSystem:
    want = None if dim is None else dim + 1
    u, _ = _sample_frame(chart, rng, want)
    return _quadric_system(chart, rng.field, u)


def _t(chart, rng: RandomSource, trials: int, dim: int | None = None) -> int:
    return min(_random_system(chart, rng, dim).common_kernel_dim() for _ in range(trials))


def _d(chart, rng: RandomSource, trials: int, dim: int | None = None) -> int:
    out = []
    for _ in range(trials):
        Q = _random_system(chart, rng, dim)
        out.append(Q.combination_kernel_dim(rng.raw_vector(Q.m)))
    return min(out)


def tangential_defect(X, rng: RandomSource, trials: int = DEFAULT_TRIALS) -> int:
    """Dimension of the general fibre of the Gauss map."""
    return _t(X, rng, trials, chart_dim(X, rng, trials))


def dual_defect(X, rng: RandomSource, trials: int = DEFAULT_TRIALS) -> int:
    """Kernel dimension of a general quadric in II."""
    return _d(X, rng, trials, chart_dim(X, rng, trials))


# ---------------------------------------------------------------------------
# tangential projection and derived invariants


def _conormal_at(X, rng: RandomSource, dim: int) -> list:
    u, frame = _sample_frame(X, rng, dim + 1)
    return kernel_basis(frame, rng.field, X.ncoords)


def tangential_projection(X: ParamVariety, u: Sequence) -> ParamVariety:
    """Projection of ``X`` from its tangent space at the rational point ``u``."""
    Q = RationalField()
    u = [Q.coerce(x.value if hasattr(x, "value") else x) for x in u]
    rows = _frame(X, Q, u)
    if rank(rows, Q, X.ncoords) != X.n + 1:
        raise ValueError("degenerate tangent frame at this point")
    basis = echelon(rows, Q, X.ncoords)[0]
    return project(X, LinearCenter.from_rows(basis, X.ncoords), name=f"tau:{X.name}")


def _x1(X, rng: RandomSource, dim: int) -> LinearImage:
    return LinearImage(X, _conormal_at(X, rng, dim), rng.field, f"tau:{getattr(X, 'name', '')}")


def _require_defective(X, rng: RandomSource, trials: int) -> tuple[int, int, int]:
    dim = chart_dim(X, rng, trials)
    s = _secant_samples(X, rng, dim, trials)[0]
    delta = min(X.ncoords - 1, 2 * dim + 1) - s
    if delta <= 0:
        raise NotDefectiveError(f"{getattr(X, 'name', 'variety')} is not secant defective")
    return dim, s, 2 * dim + 1 - s


def gamma(X, rng: RandomSource, trials: int = DEFAULT_TRIALS) -> int:
    """Contact defect, as t(X_1) + f(X)."""
    dim, _, f = _require_defective(X, rng, trials)
    return _t(_x1(X, rng, dim), rng, trials) + f


def epsilon(X, rng: RandomSource, trials: int = DEFAULT_TRIALS) -> int:
    """Bitangent contact dimension, as d(X_1) + f(X)."""
    dim, _, f = _require_defective(X, rng, trials)
    return _d(_x1(X, rng, dim), rng, trials) + f


def theta_oracle(X, rng: RandomSource, trials: int = DEFAULT_TRIALS) -> tuple[int, int]:
    """``(2*gamma + 1 - f, t(S(X)))``."""
    dim, s, f = _require_defective(X, rng, trials)
    if s >= X.ncoords - 1:
        raise ValueError("secant variety fills the ambient space")
    g = _t(_x1(X, rng, dim), rng, trials) + f
    return 2 * g + 1 - f, _t(_secant_chart(X), rng, trials)


def cone_vertex(X, rng: RandomSource, budget: int = 64) -> int:
    """Projective dimension of the common part of all tangent spaces (-1 if empty)."""
    fld = rng.field
    _, F = _sample_frame(X, rng)
    meet = echelon(F, fld, X.ncoords)[0]
    stable = 0
    for _ in range(budget):
        if stable >= 2:
            break
        _, G = _sample_frame(X, rng)
        new = row_space_meet(meet, G, fld) if meet else []
        stable = stable + 1 if len(new) == len(meet) else 0
        meet = new
    return len(meet) - 1


# ---------------------------------------------------------------------------
# hyperplane sections


def _section_frame(frame: list, h: Sequence, fld: Field) -> list:
    """Rows spanning (row space of frame) ∩ h^perp."""
    pair = [[_dot(row, h, fld) for row in frame]]
    combos = kernel_basis(pair, fld, len(frame))
    out = []
    for x in combos:
        acc = [fld.zero] * len(frame[0])
        for c, row in zip(x, frame):
            if c:
                acc = [fld.add(a, fld.mul(c, b)) for a, b in zip(acc, row)]
        out.append(acc)
    return out


def section_defects(X: ParamVariety, rng: RandomSource, h: Sequence | None = None,
                    trials: int = DEFAULT_TRIALS) -> tuple[int, int]:
    """``(f(Y), t(Y))`` for the hyperplane section Y = X ∩ {h = 0}.

    Frames of Y are T_X ∩ {h = 0}; the quadrics of Y are those of X restricted
    to parameter directions tangent to the section.
    """
    fld = rng.field
    n = X.nparams
    if n < 2:
        raise ValueError("sections of curves are points")
    if h is None:
        h = rng.raw_vector(X.ncoords)
    points = []

    def point():
        for _ in range(FRAME_BUDGET):
            u = hyperplane_point(X, h, rng)
            frame = _frame(X, fld, u)
            if rank(frame, fld, X.ncoords) == n + 1:
                return u, frame
        raise SamplingError(f"{X.name}: only singular points found on the section")

    s_y = -1
    for _ in range(trials):
        _, F0 = point()
        u1, F1 = point()
        points.append(u1)
        Y0, Y1 = _section_frame(F0, h, fld), _section_frame(F1, h, fld)
        s_y = max(s_y, rank(Y0 + Y1, fld, X.ncoords) - 1)
    f_y = 2 * (n - 1) + 1 - s_y

    t_y = None
    for u in points:
        system = _quadric_system(X, fld, u)
        _, jac, _ = X.jet(fld, u, 1)
        normal = [[_dot(row, h, fld) for row in jac]]
        W = kernel_basis(normal, fld, n)
        t_here = system.restrict(W).common_kernel_dim()
        t_y = t_here if t_y is None else min(t_y, t_here)
    return f_y, t_y


# ---------------------------------------------------------------------------
# reports


INVARIANT_KEYS = ("n", "r", "s", "s_join", "sigma", "delta", "f", "meet_rank", "t", "d",
                  "ii_dim", "x1_dim", "gamma", "epsilon", "theta_formula", "theta_direct",
                  "species", "is_cone", "vertex_dim")


def analyze(X, rng: RandomSource, trials: int = DEFAULT_TRIALS) -> tuple[dict, dict]:
    """One sampling run over a single field: ``(invariants, checks)``."""
    fld = rng.field
    inv: dict = {"r": X.ncoords - 1}
    checks: dict[str, bool] = {}
    dim = chart_dim(X, rng, trials)
    n = inv["n"] = dim
    checks["chart-immersive"] = dim == X.nparams
    s, (F0, F1) = _secant_samples(X, rng, dim, trials)
    inv["s"] = s
    inv["s_join"] = secant_dim_join_oracle(X, rng, trials)
    checks["secant=join-oracle"] = s == inv["s_join"]
    inv["sigma"] = min(inv["r"], 2 * n + 1)
    inv["delta"] = inv["sigma"] - s
    inv["f"] = 2 * n + 1 - s
    inv["meet_rank"] = len(row_space_meet(F0, F1, fld))
    checks["meet-rank=f"] = inv["meet_rank"] == inv["f"]
    checks["f>=delta>=0"] = inv["f"] >= inv["delta"] >= 0

    inv["ii_dim"] = max(_random_system(X, rng, dim).projective_dim for _ in range(trials))
    inv["t"] = _t(X, rng, trials, dim)
    inv["d"] = _d(X, rng, trials, dim)
    inv["vertex_dim"] = cone_vertex(X, rng)
    inv["is_cone"] = inv["vertex_dim"] >= 0

    for key in ("x1_dim", "gamma", "epsilon", "theta_formula", "theta_direct", "species"):
        inv[key] = None
    if inv["delta"] > 0:
        f = inv["f"]
        X1 = _x1(X, rng, dim)
        inv["x1_dim"] = chart_dim(X1, rng, trials)
        checks["x1-dim=n-f"] = inv["x1_dim"] == n - f
        inv["gamma"] = _t(X1, rng, trials) + f
        inv["epsilon"] = _d(X1, rng, trials) + f
        inv["species"] = n - inv["gamma"]
        inv["theta_formula"] = 2 * inv["gamma"] + 1 - f
        checks["epsilon>=gamma>=f"] = inv["epsilon"] >= inv["gamma"] >= f
        if s < inv["r"]:
            inv["theta_direct"] = _t(_secant_chart(X), rng, trials)
            checks["theta-formula=direct"] = inv["theta_formula"] == inv["theta_direct"]
    return inv, checks


@dataclass
class InvariantReport:
    name: str
    n: int
    r: int
    s: int
    sigma: int
    delta: int
    f: int
    t: int
    d: int
    gamma: int | None
    epsilon: int | None
    theta_formula: int | None
    species: int | None
    is_cone: bool
    vertex_dim: int
    trials: int
    primes_used: list
    seed: int
    field: str = "modp"
    s_join: int | None = None
    theta_direct: int | None = None
    meet_rank: int | None = None
    ii_dim: int | None = None
    x1_dim: int | None = None
    tags: list = dc_field(default_factory=list)
    seeds: list = dc_field(default_factory=list)
    checks: list = dc_field(default_factory=list)
    disagreements: list = dc_field(default_factory=list)
    provenance: dict = dc_field(default_factory=dict)

    @property
    def consistent(self) -> bool:
        return not self.disagreements and all(c["status"] == "pass" for c in self.checks)

    @property
    def defective(self) -> bool:
        return self.delta > 0

    def invariants(self) -> dict:
        return {k: getattr(self, k) for k in INVARIANT_KEYS}

    def to_dict(self) -> dict:
        return asdict(self)


def full_report(X, seed: int = 0, primes: int = 3, seeds: int = 3,
                trials: int = DEFAULT_TRIALS, field_kind: str = "modp") -> InvariantReport:
    """All invariants, recomputed for every (prime, seed) pair and compared."""
    master = RandomSource(seed)
    runs = []
    primes_used: list[int] = []
    run_seeds: list[int] = []
    if field_kind == "modp":
        fields = []
        for i in range(primes):
            p = random_prime(master.child(f"prime:{i}"))
            primes_used.append(p)
            fields.append(PrimeField(p))
    elif field_kind == "rational":
        fields = [RationalField()]
    else:
        raise ValueError(f"unknown field kind {field_kind!r}")
    failed = []
    for i, fld in enumerate(fields):
        for j in range(seeds):
            rng = master.child(f"run:{i}:{j}", fld)
            run_seeds.append(rng.seed)
            try:
                runs.append(analyze(X, rng, trials))
            except SamplingError as exc:
                failed.append(str(exc))
    if not runs:
        raise SamplingError(f"every run exhausted its sampling budget: {failed[0]}")

    first, _ = runs[0]
    disagreements = sorted({k for inv, _ in runs for k in INVARIANT_KEYS if inv[k] != first[k]})
    check_names = sorted({c for _, ch in runs for c in ch})
    checks = [{"name": "consensus", "status": "fail" if disagreements else "pass"}]
    if failed:
        checks.append({"name": "sampling", "status": "fail"})
    for c in check_names:
        ok = all(ch.get(c, True) for _, ch in runs)
        checks.append({"name": c, "status": "pass" if ok else "fail"})
    provenance = {k: "via reduction" for k in ("gamma", "epsilon", "theta_formula", "species")
                  if first[k] is not None}
    return InvariantReport(
        name=getattr(X, "name", "variety"),
        trials=trials,
        primes_used=primes_used,
        seed=seed,
        field=field_kind,
        tags=sorted(getattr(X, "tags", ())),
        seeds=run_seeds,
        checks=checks,
        disagreements=disagreements,
        provenance=provenance,
        **first,
    )
