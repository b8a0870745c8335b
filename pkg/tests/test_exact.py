from fractions import Fraction

import pytest
import sympy
from hypothesis import given, strategies as st

from cohomtools.exact import (QSqrt, format_number, nullspace, parse_rational, rank, rref,
                              sqrt_rational, squarefree_part)

small = st.integers(-6, 6)
fracs = st.fractions(min_value=-5, max_value=5, max_denominator=7)


def matrices(max_rows=5, max_cols=6):
    return st.integers(1, max_cols).flatmap(
        lambda c: st.lists(st.lists(small, min_size=c, max_size=c), min_size=1, max_size=max_rows))


@given(matrices())
def test_rref_matches_sympy(rows):
    ncols = len(rows[0])
    R, piv = rref(rows, ncols)
    S, spiv = sympy.Matrix(rows).rref()
    assert list(piv) == list(spiv)
    assert [[sympy.Rational(x.numerator, x.denominator) for x in map(Fraction, r)] for r in R] \
        == [list(S.row(i)) for i in range(len(piv))]


@given(matrices())
def test_rank_and_nullspace(rows):
    ncols = len(rows[0])
    assert rank(rows, ncols) == sympy.Matrix(rows).rank()
    ns = nullspace(rows, ncols)
    assert len(ns) == ncols - rank(rows, ncols)
    for v in ns:
        assert all(sum(Fraction(a) * b for a, b in zip(r, v)) == 0 for r in rows)


@given(st.lists(st.lists(fracs, min_size=3, max_size=3), min_size=1, max_size=4))
def test_rref_fractions(rows):
    R, piv = rref(rows, 3)
    assert len(piv) == sympy.Matrix(rows).rank()
    for r, p in zip(R, piv):
        assert r[p] == 1


def test_rref_empty_needs_ncols():
    with pytest.raises(ValueError):
        rref([])
    assert rref([], 3) == ([], [])
    assert rank([], 3) == 0


@pytest.mark.parametrize("n,expected", [(1, (1, 1)), (12, (2, 3)), (72, (6, 2)), (49, (7, 1)), (30, (1, 30))])
def test_squarefree_part(n, expected):
    assert squarefree_part(n) == expected


def test_squarefree_rejects_nonpositive():
    with pytest.raises(ValueError):
        squarefree_part(0)


@given(st.fractions(min_value=0, max_value=50, max_denominator=30))
def test_sqrt_rational_squares_back(q):
    r = sqrt_rational(q)
    assert r * r == q
    assert r >= 0
    assert sympy.sqrt(sympy.Rational(q.numerator, q.denominator)).equals(
        sympy.sympify(format_number(r).replace("sqrt", "sqrt")))


def test_sqrt_rational_negative():
    with pytest.raises(ValueError):
        sqrt_rational(Fraction(-1, 2))


@given(fracs, fracs, fracs, fracs, st.sampled_from([2, 3, 5, 6, 7]))
def test_qsqrt_field_ops(a, b, c, e, d):
    x, y = QSqrt.make(a, b, d), QSqrt.make(c, e, d)
    sx = sympy.Rational(a.numerator, a.denominator) + sympy.Rational(b.numerator, b.denominator) * sympy.sqrt(d)
    sy = sympy.Rational(c.numerator, c.denominator) + sympy.Rational(e.numerator, e.denominator) * sympy.sqrt(d)
    for got, want in ((x + y, sx + sy), (x - y, sx - sy), (x * y, sx * sy)):
        assert sympy.simplify(sympy.sympify(format_number(got)) - want) == 0
    if y != 0:
        assert sympy.simplify(sympy.sympify(format_number(x / y)) - sx / sy) == 0
    assert (x < y) == bool(sx < sy)


def test_qsqrt_collapses_to_fraction():
    x = QSqrt(1, 1, 2)
    y = QSqrt(1, -1, 2)
    assert x * y == Fraction(-1)
    assert isinstance(x * y, Fraction)
    assert isinstance(x + y, Fraction)


def test_qsqrt_rejects_mixed_fields():
    with pytest.raises(ArithmeticError):
        QSqrt(0, 1, 2) + QSqrt(0, 1, 3)
    with pytest.raises(ValueError):
        QSqrt(0, 1, 4)


def test_rref_over_quadratic_field():
    s = sqrt_rational(3)
    R, piv = rref([[1, s], [s, 3]], 2)
    assert piv == [0] and R[0][1] == s


@pytest.mark.parametrize("text,value", [("3/4", Fraction(3, 4)), (" -2 ", Fraction(-2)), ("0", 0)])
def test_parse_rational(text, value):
    assert parse_rational(text) == value


def test_format_number():
    assert format_number(Fraction(3, 4)) == "3/4"
    assert format_number(5) == "5"
    assert format_number(QSqrt(Fraction(1, 2), -1, 3)) == "1/2-1*sqrt(3)"
