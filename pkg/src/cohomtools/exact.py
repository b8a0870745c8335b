"""Exact field arithmetic and row-reduction.

Vectors and matrices are plain Python sequences (or numpy ``object`` arrays)
whose entries are ``int``, ``Fraction`` or :class:`QSqrt`.  Rational inputs go
through a fraction-free integer elimination; anything containing a quadratic
irrationality falls back to a generic Gauss-Jordan over the field.
"""

from __future__ import annotations

from fractions import Fraction
from functools import reduce
from math import gcd
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "QSqrt",
    "as_field",
    "parse_rational",
    "format_number",
    "sqrt_rational",
    "squarefree_part",
    "rref",
    "rank",
    "nullspace",
    "is_zero_vector",
    "dot",
    "matvec",
]


def squarefree_part(n: int) -> tuple[int, int]:
    """Return ``(s, d)`` with ``n == s*s*d`` and ``d`` squarefree."""
    if n <= 0:
        raise ValueError("squarefree_part needs a positive integer")
    s, d, p = 1, n, 2
    while p * p <= d:
        while d % (p * p) == 0:
            d //= p * p
            s *= p
        p += 1
    return s, d


class QSqrt:
    """An element ``a + b*sqrt(d)`` of a real quadratic field.

    Arithmetic that lands back in the rationals returns a ``Fraction`` so that
    purely rational data never carries the wrapper around.
    """

    __slots__ = ("a", "b", "d")

    def __init__(self, a, b, d: int):
        if d < 2 or squarefree_part(d)[0] != 1:
            raise ValueError(f"radicand must be squarefree and > 1, got {d}")
        self.a = Fraction(a)
        self.b = Fraction(b)
        self.d = d

    @staticmethod
    def make(a, b, d):
        b = Fraction(b)
        if b == 0:
            return Fraction(a)
        return QSqrt(a, b, d)

    def _coerce(self, other):
        if isinstance(other, QSqrt):
            if other.d != self.d:
                raise ArithmeticError(
                    f"mixing Q(sqrt {self.d}) with Q(sqrt {other.d})")
            return other.a, other.b
        if isinstance(other, (int, Fraction)):
            return Fraction(other), Fraction(0)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QSqrt.make(self.a + o[0], self.b + o[1], self.d)

    __radd__ = __add__

    def __neg__(self):
        return QSqrt(-self.a, -self.b, self.d)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QSqrt.make(self.a - o[0], self.b - o[1], self.d)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QSqrt.make(o[0] - self.a, o[1] - self.b, self.d)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        a, b = o
        return QSqrt.make(self.a * a + self.b * b * self.d,
                          self.a * b + self.b * a, self.d)

    __rmul__ = __mul__

    def norm(self) -> Fraction:
        return self.a * self.a - self.d * self.b * self.b

    def inverse(self):
        n = self.norm()
        return QSqrt.make(self.a / n, -self.b / n, self.d)

    def __truediv__(self, other):
        if isinstance(other, QSqrt):
            return self * other.inverse()
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QSqrt.make(self.a / o[0], self.b / o[0], self.d)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self.inverse() * o[0]

    def __eq__(self, other):
        if isinstance(other, QSqrt):
            return (self.a, self.b, self.d) == (other.a, other.b, other.d)
        if isinstance(other, (int, Fraction)):
            return self.b == 0 and self.a == other
        return NotImplemented

    def __hash__(self):
        return hash((self.a, self.b, self.d))

    def __bool__(self):
        return self.a != 0 or self.b != 0

    def __float__(self):
        return float(self.a) + float(self.b) * float(np.sqrt(self.d))

    def sign(self) -> int:
        # sign of a + b*sqrt(d) without floating point
        sa = (self.a > 0) - (self.a < 0)
        sb = (self.b > 0) - (self.b < 0)
        if sa == sb or sb == 0:
            return sa if sa else sb
        if sa == 0:
            return sb
        return sa if self.a * self.a > self.d * self.b * self.b else sb

    def __lt__(self, other):
        return _sign(self - other) < 0

    def __gt__(self, other):
        return _sign(self - other) > 0

    def __le__(self, other):
        return _sign(self - other) <= 0

    def __ge__(self, other):
        return _sign(self - other) >= 0

    def __repr__(self):
        return f"QSqrt({self.a}, {self.b}, {self.d})"

    def __str__(self):
        return format_number(self)


def _sign(x) -> int:
    if isinstance(x, QSqrt):
        return x.sign()
    return (x > 0) - (x < 0)


def sqrt_rational(q) -> Fraction | QSqrt:
    """Exact square root of a nonnegative rational."""
    q = Fraction(q)
    if q < 0:
        raise ValueError("negative radicand")
    if q == 0:
        return Fraction(0)
    num, den = q.numerator * q.denominator, q.denominator
    s, d = squarefree_part(num)
    if d == 1:
        return Fraction(s, den)
    return QSqrt(0, Fraction(s, den), d)


def parse_rational(text) -> Fraction:
    """Parse ``"p/q"``, ``"p"`` or an int into a Fraction."""
    if isinstance(text, (int, Fraction)):
        return Fraction(text)
    return Fraction(str(text).strip())


def as_field(x):
    if isinstance(x, (Fraction, QSqrt)):
        return x
    if isinstance(x, (int, np.integer)):
        return Fraction(int(x))
    if isinstance(x, str):
        return parse_rational(x)
    raise TypeError(f"not an exact scalar: {x!r}")


def format_number(x) -> str:
    if isinstance(x, QSqrt):
        parts = []
        if x.a:
            parts.append(format_number(x.a))
        b = format_number(x.b)
        parts.append(f"{b}*sqrt({x.d})")
        return "+".join(parts).replace("+-", "-")
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def dot(u: Sequence, v: Sequence):
    total = 0
    for a, b in zip(u, v):
        if a and b:
            total += a * b
    return total


def matvec(rows: Sequence[Sequence], v: Sequence) -> list:
    return [dot(r, v) for r in rows]


def is_zero_vector(v: Iterable) -> bool:
    return not any(v)


def _all_rational(rows) -> bool:
    for r in rows:
        for x in r:
            if isinstance(x, QSqrt):
                return False
    return True


def _integer_rows(rows) -> list[list[int]]:
    out = []
    for r in rows:
        fr = [Fraction(x) for x in r]
        den = reduce(lambda a, b: a * b // gcd(a, b),
                     (f.denominator for f in fr), 1)
        out.append([int(f * den) for f in fr])
    return out


def _rref_integer(rows: list[list[int]], ncols: int):
    # fraction-free Gauss-Jordan; rows kept primitive to bound growth
    m = [r[:] for r in rows if any(r)]
    pivots: list[int] = []
    prow = 0
    for col in range(ncols):
        if prow >= len(m):
            break
        sel = None
        best = None
        for i in range(prow, len(m)):
            v = m[i][col]
            if v and (best is None or abs(v) < best):
                sel, best = i, abs(v)
                if best == 1:
                    break
        if sel is None:
            continue
        m[prow], m[sel] = m[sel], m[prow]
        pr = m[prow]
        p = pr[col]
        for i in range(len(m)):
            if i == prow:
                continue
            a = m[i][col]
            if not a:
                continue
            g = gcd(p, a)
            fp, fa = p // g, a // g
            r = m[i]
            new = [fp * x - fa * y for x, y in zip(r, pr)]
            c = reduce(gcd, new, 0)
            if c > 1:
                new = [x // c for x in new]
            m[i] = new
        pivots.append(col)
        prow += 1
    m = m[:prow]
    out = []
    for r, col in zip(m, pivots):
        p = r[col]
        out.append([Fraction(x, p) for x in r])
    return out, pivots


def _rref_generic(rows, ncols: int):
    m = [[as_field(x) for x in r] for r in rows]
    pivots: list[int] = []
    prow = 0
    for col in range(ncols):
        if prow >= len(m):
            break
        sel = next((i for i in range(prow, len(m)) if m[i][col]), None)
        if sel is None:
            continue
        m[prow], m[sel] = m[sel], m[prow]
        inv = 1 / m[prow][col]
        m[prow] = [x * inv if x else x for x in m[prow]]
        pr = m[prow]
        for i in range(len(m)):
            if i != prow and m[i][col]:
                a = m[i][col]
                m[i] = [x - a * y if y else x for x, y in zip(m[i], pr)]
        pivots.append(col)
        prow += 1
    return m[:prow], pivots


def rref(rows: Sequence[Sequence], ncols: int | None = None):
    """Reduced row echelon form of ``rows``.

    Returns ``(R, pivots)`` where ``R`` lists only the nonzero rows, each with
    a leading 1 in the column recorded in ``pivots``.
    """
    rows = [list(r) for r in rows]
    if ncols is None:
        if not rows:
            raise ValueError("ncols required for an empty matrix")
        ncols = len(rows[0])
    if not rows:
        return [], []
    if _all_rational(rows):
        return _rref_integer(_integer_rows(rows), ncols)
    return _rref_generic(rows, ncols)


def rank(rows: Sequence[Sequence], ncols: int | None = None) -> int:
    if len(rows) == 0:
        return 0
    return len(rref(rows, ncols)[1])


def nullspace(rows: Sequence[Sequence], ncols: int) -> list[list]:
    """Basis of ``{x : rows @ x == 0}``."""
    r, pivots = rref(rows, ncols) if len(rows) else ([], [])
    pivset = set(pivots)
    basis = []
    for free in range(ncols):
        if free in pivset:
            continue
        v = [Fraction(0)] * ncols
        v[free] = Fraction(1)
        for row, pc in zip(r, pivots):
            if row[free]:
                v[pc] = -row[free]
        basis.append(v)
    return basis
