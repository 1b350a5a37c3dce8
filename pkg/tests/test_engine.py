from fractions import Fraction

import pytest

from secantdefect.catalog import (
    ParamVariety, builtin, cone_over, linear_space, quadric_threefold, segre, veronese,
)
from secantdefect.engine import (
    NotDefectiveError, analyze, chart_dim, cone_vertex, dual_defect, epsilon, fibre_defect,
    full_report, gamma, second_fundamental_form, secant_dim, secant_dim_join_oracle,
    tangent_frame, tangential_defect, tangential_projection, theta_oracle,
)
from secantdefect.exact import PrimeField, RandomSource, RationalField, rank
from secantdefect.polys import MPoly

P = PrimeField(2305843009213693951)


def rng(seed=0, fld=P):
    return RandomSource(seed, fld)


def test_tangent_frame_of_linear_space_is_constant():
    X = linear_space(3)
    r = rng()
    frames = [tangent_frame(X, r.raw_vector(3), P) for _ in range(3)]
    assert all(f.rank == 4 for f in frames)
    assert rank([list(row) for f in frames for row in f.rows], P, 4) == 4


def test_tangent_frame_veronese_surface():
    assert tangent_frame(veronese(2, 2), rng().raw_vector(2), P).rank == 3


def test_pinched_point_is_resampled():
    # (1, u, v^2, v^3, u*v^2): the frame drops rank along v = 0
    params = ("u", "v")
    u, v = MPoly.var(params, "u"), MPoly.var(params, "v")
    X = ParamVariety("pinch", params, [MPoly.const(params, 1), u, v**2, v**3, u * v**2])
    assert tangent_frame(X, [5, 0], P).rank == 2
    assert chart_dim(X, rng()) == 2
    assert secant_dim(X, rng()) == 4


@pytest.mark.parametrize("name,s", [
    ("veronese:2:2", 4), ("segre:2:2", 7), ("veronese:1:3", 3), ("veronese:3:2", 6),
    ("segre:2:3", 9), ("linear:3", 3),
])
def test_secant_dim_matches_join_oracle(name, s):
    X = builtin(name)
    assert secant_dim(X, rng(1)) == s
    assert secant_dim_join_oracle(X, rng(2)) == s


def test_fibre_defect_values():
    assert fibre_defect(segre(2, 2), rng())[0] == 2
    f, meet = fibre_defect(veronese(4, 2), rng())
    assert f == meet == 1
    assert fibre_defect(builtin("fourfold-p9"), rng())[0] == 0


def test_second_fundamental_form():
    X = linear_space(3)
    assert second_fundamental_form(X, [1, 2, 3], P).m == 0
    V = veronese(2, 2)
    Q = second_fundamental_form(V, rng().raw_vector(2), P)
    assert Q.projective_dim == 2 == V.r - V.n - 1
    # complete system: spans all symmetric 2x2 matrices
    flat = [[M[0][0], M[0][1], M[1][1]] for M in Q.matrices]
    assert rank(flat, P, 3) == 3
    Qd = second_fundamental_form(quadric_threefold(True), [1, 2, 3], P)
    assert Qd.m == 1 and rank(Qd.matrices[0], P, 3) == 3


def test_tangential_defect():
    assert tangential_defect(veronese(3, 2), rng()) == 0
    assert tangential_defect(veronese(4, 2), rng()) == 0
    assert tangential_defect(cone_over(veronese(2, 2), 1), rng()) == 1
    assert tangential_defect(cone_over(veronese(2, 2), 2), rng()) == 2


def test_dual_defect():
    assert dual_defect(quadric_threefold(True), rng()) == 0
    assert dual_defect(quadric_threefold(False), rng()) == 1
    assert dual_defect(segre(1, 2), rng()) > 0


def test_tangential_projection_dimensions():
    X1 = tangential_projection(segre(2, 2), [2, 3, 5, 7])
    assert X1.r <= 3 and chart_dim(X1, rng()) == 2
    Y1 = tangential_projection(veronese(3, 2), [2, 3, 5])
    assert Y1.r == 5 and chart_dim(Y1, rng()) == 2


def test_gamma_epsilon_theta():
    S = segre(2, 2)
    assert gamma(S, rng()) == 2 and epsilon(S, rng()) == 2
    assert theta_oracle(S, rng()) == (3, 3)
    assert gamma(veronese(4, 2), rng()) == 1
    assert theta_oracle(veronese(2, 2), rng()) == (2, 2)
    assert theta_oracle(veronese(4, 2), rng()) == (2, 2)
    C = cone_over(veronese(2, 2), 1)
    assert epsilon(C, rng()) == 2 == gamma(C, rng())
    with pytest.raises(NotDefectiveError):
        gamma(veronese(1, 3), rng())


def test_epsilon_exceeds_gamma_when_x1_is_dual_defective():
    # X1 of Seg(2,3) is Seg(1,2), a scroll in planes
    X = segre(2, 3)
    assert epsilon(X, rng()) > gamma(X, rng())


def test_cone_vertex():
    assert cone_vertex(cone_over(veronese(2, 2), 1), rng()) == 0
    assert cone_vertex(veronese(3, 2), rng()) == -1
    assert cone_vertex(cone_over(segre(2, 2), 2), rng()) == 1


def test_analyze_checks_pass():
    inv, checks = analyze(segre(2, 2), rng(3))
    assert all(checks.values())
    assert (inv["s"], inv["f"], inv["gamma"], inv["epsilon"]) == (7, 2, 2, 2)


def test_full_report_segre():
    rep = full_report(segre(2, 2), seed=5)
    assert rep.consistent and not rep.disagreements
    assert (rep.n, rep.r, rep.s, rep.f, rep.gamma, rep.epsilon, rep.theta_formula,
            rep.species, rep.is_cone) == (4, 8, 7, 2, 2, 2, 3, 2, False)
    assert len(rep.primes_used) == 3 and len(rep.seeds) == 9


def test_full_report_rational_field_agrees():
    a = full_report(veronese(2, 2), field_kind="rational", seeds=1)
    b = full_report(veronese(2, 2), seeds=1, primes=1)
    assert a.invariants() == b.invariants()


def test_full_report_is_deterministic():
    a = full_report(builtin("scroll-ex1"), seed=9, primes=2, seeds=2)
    b = full_report(builtin("scroll-ex1"), seed=9, primes=2, seeds=2)
    assert a.to_dict() == b.to_dict()


def test_full_report_rejects_unknown_field():
    with pytest.raises(ValueError):
        full_report(veronese(2, 2), field_kind="reals")


def test_rational_sampling_window():
    r = RandomSource(0, RationalField())
    assert all(abs(x) <= r.window for x in r.raw_vector(20))
    assert isinstance(r.raw(), Fraction)


def test_exhausted_sampling_is_flagged_not_raised(monkeypatch):
    import secantdefect.engine as engine

    good = PrimeField(1000003)
    primes = iter([P.p, good.p])
    monkeypatch.setattr(engine, "random_prime", lambda rng: next(primes))
    pts = ("u",)
    # coordinates vanish identically modulo the first prime only
    X = ParamVariety("bad-prime-line", pts, [MPoly.const(pts, P.p), MPoly.var(pts, "u") * P.p])
    rep = full_report(X, primes=2, seeds=1)
    assert {"name": "sampling", "status": "fail"} in rep.checks
    assert not rep.consistent and rep.s == 1
