from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from secantdefect.parse import ParseError, parse_poly, parse_rational
from secantdefect.polys import MPoly

V = ("u1", "u2")
u1, u2 = MPoly.var(V, "u1"), MPoly.var(V, "u2")


def test_examples():
    p = parse_poly("u1^2 + 2*u1*u2", V)
    assert p == u1**2 + 2 * u1 * u2 and len(p.terms) == 2
    assert parse_rational("3/2") == Fraction(3, 2)
    cube = parse_poly("(u1+u2)^3", V)
    assert sorted(cube.terms.values()) == [1, 1, 3, 3]


def test_whitespace_and_signs():
    assert parse_poly("  - u1 +\n 3/4 * u2 ", V) == -u1 + Fraction(3, 4) * u2
    assert parse_poly("-(u1 - 1)^2", V) == -((u1 - 1) ** 2)
    assert parse_poly("+u1", V) == u1


@pytest.mark.parametrize("src,line,col,fragment", [
    ("2u1", 1, 2, "implicit multiplication"),
    ("u1 u2", 1, 4, "implicit multiplication"),
    ("u3 + 1", 1, 1, "unknown identifier"),
    ("1/0", 1, 3, "denominator"),
    ("u1^u2", 1, 4, "exponent"),
    ("(u1 + 1", 1, 8, "expected ')'"),
    ("u1 +\n  + $", 2, 5, "unexpected character"),
    ("", 1, 1, "empty"),
    ("u1 +", 1, 5, "end of input"),
    ("u1^100000", 1, 4, "exponent exceeds"),
])
def test_errors_carry_position(src, line, col, fragment):
    with pytest.raises(ParseError) as info:
        parse_poly(src, V)
    err = info.value
    assert (err.line, err.column) == (line, col)
    assert fragment in str(err)


def test_parse_rational_rejects_variables():
    with pytest.raises(ParseError):
        parse_rational("u")
    assert parse_rational(-4) == -4
    assert parse_rational("-7/3") == Fraction(-7, 3)


coeffs = st.fractions(min_value=-9, max_value=9, max_denominator=5)
monos = st.tuples(st.integers(0, 3), st.integers(0, 3))


@settings(max_examples=60, deadline=None)
@given(st.dictionaries(monos, coeffs, max_size=5))
def test_to_str_round_trip(terms):
    p = MPoly(V, terms)
    assert parse_poly(p.to_str(), V) == p


@settings(max_examples=100, deadline=None)
@given(st.text(alphabet="u12+-*/^() 3\n", max_size=12))
def test_malformed_input_never_crashes(src):
    try:
        parse_poly(src, V)
    except ParseError as err:
        assert err.line >= 1 and err.column >= 1
