from math import comb

import pytest

from secantdefect.catalog import (
    CATALOG, LinearCenter, ParamVariety, SamplingError, builtin, catalog_names, cone_over,
    hyperplane_point, join, linear_space, project, random_point, scroll_ex2, scroll_ex3, segre,
    veronese,
)
from secantdefect.exact import PrimeField, RandomSource, rank
from secantdefect.polys import MPoly

P = PrimeField(2305843009213693951)


@pytest.mark.parametrize("n,d", [(1, 3), (2, 2), (3, 2), (4, 2), (2, 3)])
def test_veronese_sizes(n, d):
    X = veronese(n, d)
    assert X.ncoords == comb(n + d, d) and X.n == n
    assert X.coords_independent()


def test_segre_sizes():
    assert (segre(2, 2).n, segre(2, 2).r) == (4, 8)
    assert segre(1, 1).ncoords == 4
    assert (segre(2, 3).n, segre(2, 3).r) == (5, 11)


def test_cone_over():
    C = cone_over(veronese(2, 2), 1)
    assert (C.n, C.r) == (3, 6) and "cone" in C.tags and C.expected["vertex_dim"] == 0
    with pytest.raises(ValueError):
        cone_over(veronese(2, 2), 0)


def test_projections():
    V = veronese(4, 2)
    assert project(V, LinearCenter.from_rows([], V.ncoords)).coords == V.coords
    assert builtin("v42-point").r == 13
    assert builtin("v42-conic").r == 11
    assert builtin("v42-quartic").r == 9
    with pytest.raises(ValueError):
        LinearCenter.from_rows([[1] + [0] * 14, [2] + [0] * 14])
    with pytest.raises(ValueError):
        project(V, LinearCenter.from_rows([[1, 0, 0]]))


def test_join_chart():
    X = veronese(2, 2)
    J = join(X, X)
    assert J.nparams == 2 * X.n + 1 and J.ncoords == X.ncoords
    with pytest.raises(ValueError):
        join(X, segre(2, 2))
    # two points give the line through them
    a = ParamVariety("pa", (), [MPoly.const((), 1), MPoly.const((), 0), MPoly.const((), 2)])
    b = ParamVariety("pb", (), [MPoly.const((), 0), MPoly.const((), 1), MPoly.const((), 3)])
    L = join(a, b)
    assert L.params == ("lam",)
    rng = RandomSource(0, P)
    vals = [L.values(P, rng.raw_vector(1)) for _ in range(4)]
    assert rank(vals, P, 3) == 2
    assert rank(vals + [[1, 0, 2], [0, 1, 3]], P, 3) == 2


def test_builtin_names():
    for name in catalog_names():
        assert builtin(name).name
    assert builtin("linear:3").r == 3 and linear_space(3).n == 3
    assert builtin("cone:2:segre:2:2").n == 6
    with pytest.raises(KeyError):
        builtin("veronese:x:2")
    with pytest.raises(KeyError):
        builtin("torus")


def test_scroll_examples():
    X = scroll_ex3()
    assert (X.n, X.r) == (4, 9) and "scroll" in X.tags
    # the planes (c = 0 part) of the second scroll lie in a P^4
    Y = scroll_ex2()
    rng = RandomSource(1, P)
    pts = []
    for _ in range(12):
        u = rng.raw_vector(4)
        u[3] = 0
        pts.append(Y.values(P, u))
    assert rank(pts, P, Y.ncoords) - 1 <= 5


def test_random_point_reproducible_and_on_veronese():
    X = veronese(2, 2)
    u1, v1 = random_point(X, RandomSource(5, P))
    u2, v2 = random_point(X, RandomSource(5, P))
    assert (u1, v1) == (u2, v2)
    a00, a01, a02, a11, a12, a22 = v1
    S = [[a00, a01, a02], [a01, a11, a12], [a02, a12, a22]]
    assert rank(S, P, 3) == 1


def test_random_point_zero_map():
    pts = ("u",)
    with pytest.raises(ValueError):
        ParamVariety("zero", pts, [MPoly(pts), MPoly(pts)])
    # nonzero over Q but identically zero mod p
    Z = ParamVariety("bad-prime", pts, [MPoly.var(pts, "u") * P.p, MPoly.const(pts, P.p)])
    with pytest.raises(SamplingError):
        random_point(Z, RandomSource(0, P), budget=4)


def test_hyperplane_point_contract():
    conic = veronese(1, 2)  # coordinates (x0^2, x0, 1)
    rng = RandomSource(3, P)
    u = hyperplane_point(conic, [1, 0, 0], rng)
    assert conic.values(P, u)[0] == 0
    S = segre(2, 2)
    for i in range(5):
        h = rng.raw_vector(S.ncoords)
        u = hyperplane_point(S, h, rng)
        vals = S.values(P, u)
        assert sum(a * b for a, b in zip(h, vals)) % P.p == 0
    with pytest.raises(ValueError):
        hyperplane_point(S, [0] * S.ncoords, rng)


@pytest.mark.parametrize("name", sorted(CATALOG))
def test_catalog_entries_are_well_formed(name):
    X = CATALOG[name]()
    assert X.coords_independent()
    assert X.case is None or X.n == 4
