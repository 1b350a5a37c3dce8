from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy import GF, Matrix
from sympy.polys.matrices import DomainMatrix

from secantdefect.exact import (
    PRIME_HIGH, PRIME_LOW, BadPrimeError, ExactMatrix, FieldMismatchError, FieldScalar,
    HeightOverflowError, PrimeField, RandomSource, RationalField, echelon, kernel_basis,
    matmul, random_prime, random_scalar, rank, row_space_meet,
)

P = PrimeField(2305843009213693951)  # 2^61 - 1
Q = RationalField()


def _sympy_rank_mod(rows, p):
    K = GF(p)
    m, n = len(rows), len(rows[0])
    return DomainMatrix([[K(x) for x in r] for r in rows], (m, n), K).rank()


def _rand_matrix(rng, m, n, fld=P):
    return [rng.raw_vector(n, fld) for _ in range(m)]


def test_trivial_ranks():
    assert rank([[0] * 3] * 3, P, 3) == 0
    assert ExactMatrix.identity(4, P).rank() == 4
    assert ExactMatrix.zeros(3, 3, Q).rank() == 0


def test_factored_product_rank():
    rng = RandomSource(1, P)
    A, B = _rand_matrix(rng, 4, 2), _rand_matrix(rng, 2, 6)
    AB = matmul(A, B, P)
    assert rank(AB, P, 6) == 2
    # independent full-rank witness: some 2x2 minor is nonzero
    minors = [(AB[i][a] * AB[j][b] - AB[i][b] * AB[j][a]) % P.p
              for i in range(4) for j in range(i + 1, 4)
              for a in range(6) for b in range(a + 1, 6)]
    assert any(minors)


def test_kernel_examples():
    assert kernel_basis([[1, 0, 0], [0, 1, 0], [0, 0, 1]], P, 3) == []
    ker = kernel_basis([[1, 0, 0]], Q, 3)
    assert len(ker) == 2 and all(v[0] == 0 for v in ker)
    assert rank(ker, Q, 3) == 2


def test_kernel_of_gram_matrix():
    rng = RandomSource(2, P)
    A = _rand_matrix(rng, 2, 5)
    At = [list(c) for c in zip(*A)]
    G = matmul(At, A, P)
    ker = kernel_basis(G, P, 5)
    assert len(ker) == 3
    for v in ker:
        assert all(x == 0 for x in ExactMatrix(G, P).apply(v))


def test_meet_examples():
    I3 = ExactMatrix.identity(3, P)
    assert row_space_meet(I3, I3).rank() == 3
    a = [[1, 0, 0, 0, 0], [0, 1, 0, 0, 0]]
    b = [[0, 0, 1, 0, 0], [0, 0, 0, 1, 0]]
    assert row_space_meet(a, b, Q) == []
    rng = RandomSource(3, P)
    A, B = _rand_matrix(rng, 5, 8), _rand_matrix(rng, 5, 8)
    assert rank(A + B, P, 8) == 8
    assert len(row_space_meet(A, B, P)) == 5 + 5 - 8


def test_meet_vectors_lie_in_both_spans():
    rng = RandomSource(4, P)
    A, B = _rand_matrix(rng, 4, 6), _rand_matrix(rng, 4, 6)
    for v in row_space_meet(A, B, P):
        assert rank(A + [v], P, 6) == rank(A, P, 6)
        assert rank(B + [v], P, 6) == rank(B, P, 6)


def test_echelon_pivots_are_first_nonzero():
    rows, piv = echelon([[0, 2, 4], [0, 1, 3], [1, 1, 1]], Q, 3)
    assert piv == [0, 1, 2]
    rows, piv = echelon([[0, 2, 4], [0, 1, 2]], Q, 3)
    assert piv == [1] and rows == [[0, 1, 2]]


@settings(max_examples=40, deadline=None)
@given(st.lists(st.lists(st.integers(-5, 5), min_size=4, max_size=4), min_size=1, max_size=5))
def test_rank_matches_sympy_over_q(rows):
    assert rank([[Fraction(x) for x in r] for r in rows], Q, 4) == Matrix(rows).rank()


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32), st.integers(1, 6), st.integers(1, 6), st.integers(1, 4))
def test_rank_matches_sympy_mod_p(seed, m, n, k):
    rng = RandomSource(seed, P)
    # rank <= k by construction
    A, B = _rand_matrix(rng, m, k), _rand_matrix(rng, k, n)
    M = matmul(A, B, P)
    assert rank(M, P, n) == _sympy_rank_mod(M, P.p)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32), st.integers(1, 6), st.integers(1, 6), st.integers(2, 8))
def test_meet_dimension_identity(seed, a, b, n):
    rng = RandomSource(seed, P)
    A, B = _rand_matrix(rng, a, n), _rand_matrix(rng, b, n)
    assert len(row_space_meet(A, B, P)) == rank(A, P, n) + rank(B, P, n) - rank(A + B, P, n)


@settings(max_examples=30, deadline=None)
@given(st.lists(st.lists(st.integers(-9, 9), min_size=5, max_size=5), min_size=1, max_size=4))
def test_rank_nullity(rows):
    M = [[Fraction(x) for x in r] for r in rows]
    ker = kernel_basis(M, Q, 5)
    assert rank(M, Q, 5) + len(ker) == 5
    for v in ker:
        assert all(sum(a * b for a, b in zip(r, v)) == 0 for r in M)


def test_field_scalar_arithmetic_and_mismatch():
    a, b = FieldScalar(3, PrimeField(7)), FieldScalar(5, PrimeField(7))
    assert (a + b).value == 1 and (a * b).value == 1 and (a / b * b) == a
    assert (a - b).value == 5 and (-a).value == 4
    with pytest.raises(FieldMismatchError):
        a + FieldScalar(1, PrimeField(11))
    with pytest.raises(FieldMismatchError):
        ExactMatrix([[1]], PrimeField(7)) @ ExactMatrix([[1]], PrimeField(11))


def test_field_errors():
    with pytest.raises(ZeroDivisionError):
        PrimeField(7).inv(0)
    with pytest.raises(BadPrimeError):
        PrimeField(7).from_rational(Fraction(1, 7))
    with pytest.raises(HeightOverflowError):
        RationalField(height_cap=8).check(Fraction(1, 1000))
    with pytest.raises(ValueError):
        PrimeField(8)


def test_from_rational_is_a_ring_map():
    F = PrimeField(101)
    x, y = Fraction(3, 4), Fraction(-5, 6)
    assert F.from_rational(x * y) == F.mul(F.from_rational(x), F.from_rational(y))
    assert F.from_rational(x + y) == F.add(F.from_rational(x), F.from_rational(y))


def test_random_source_determinism_and_range():
    assert RandomSource(42, P).raw() == RandomSource(42, P).raw()
    a, b = RandomSource(1, P), RandomSource(2, P)
    assert a.raw_vector(8) != b.raw_vector(8)
    small = PrimeField(10007)
    r = RandomSource(5, small)
    assert all(0 <= r.raw() < small.p for _ in range(10**4))
    assert RandomSource(9).child("x", P).raw() == RandomSource(9).child("x", P).raw()
    assert RandomSource(9).child("x", P).raw() != RandomSource(9).child("y", P).raw()
    assert isinstance(random_scalar(RandomSource(3, P)), FieldScalar)
    with pytest.raises(ValueError):
        RandomSource(-1)


def test_random_prime_range():
    rng = RandomSource(0)
    for _ in range(3):
        p = random_prime(rng)
        assert PRIME_LOW < p < PRIME_HIGH
        PrimeField(p)


def test_matrix_ops():
    A = ExactMatrix([[1, 2], [3, 4]], Q)
    assert (A @ ExactMatrix.identity(2, Q)).rows == A.rows
    assert A.transpose().rows == ((1, 3), (2, 4))
    assert A.stack(A).rank() == 2
    with pytest.raises(ValueError):
        A @ ExactMatrix([[1, 2, 3]], Q)
