"""Reduced root systems of rank <= 2 and Chevalley structure constants.

Roots are stored as integer coefficient tuples over the simple roots; the
inner product lives in the rational Gram matrix of the simple system, so all
lengths and Cartan integers are exact.  Labelling follows the convention
used throughout the package: for G2 the first simple root is the short one,
for B2 the first simple root is the long one.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from fractions import Fraction
from itertools import product
from typing import Dict, Tuple

Root = Tuple[int, ...]

# Gram matrices of the simple roots, short roots of squared length 2.
_GRAMS = {
    "A1": ((2,),),
    "A2": ((2, -1), (-1, 2)),
    "B2": ((4, -2), (-2, 2)),
    "G2": ((2, -3), (-3, 6)),
}


class RootSystemError(ValueError):
    pass


def _height_key(r: Root):
    return (sum(r), tuple(-c for c in r))


@dataclass(frozen=True)
class RootSystem:
    kind: str
    rank: int
    gram: Tuple[Tuple[Fraction, ...], ...]
    cartan: Tuple[Tuple[int, ...], ...]
    positive_roots: Tuple[Root, ...]
    roots: Tuple[Root, ...] = field(repr=False)

    @property
    def simple_roots(self) -> Tuple[Root, ...]:
        return tuple(tuple(int(i == j) for j in range(self.rank))
                     for i in range(self.rank))

    def inner(self, a: Root, b: Root) -> Fraction:
        return sum((Fraction(a[i]) * self.gram[i][j] * b[j]
                    for i in range(self.rank) for j in range(self.rank)),
                   Fraction(0))

    def norm2(self, a: Root) -> Fraction:
        return self.inner(a, a)

    def cartan_integer(self, a: Root, b: Root) -> int:
        """``2<a,b>/<b,b>``."""
        v = 2 * self.inner(a, b) / self.norm2(b)
        if v.denominator != 1:
            raise RootSystemError(f"non-integral Cartan number for {a}, {b}")
        return int(v)

    def is_root(self, a: Root) -> bool:
        return tuple(a) in self._rootset

    @cached_property
    def _rootset(self):
        return frozenset(self.roots)

    def height(self, a: Root) -> int:
        return sum(a)

    def coroot_coefficients(self, a: Root) -> Tuple[int, ...]:
        """Coefficients of ``a^vee`` in the simple coroots."""
        n = self.norm2(a)
        out = []
        for i, c in enumerate(a):
            v = Fraction(c) * self.gram[i][i] / n
            if v.denominator != 1:
                raise RootSystemError("coroot not integral")
            out.append(int(v))
        return tuple(out)

    def reflect(self, i: int, a: Root) -> Root:
        """Simple reflection ``s_i`` (0-based) applied to ``a``."""
        c = self.cartan_integer(a, self.simple_roots[i])
        return tuple(x - (c if k == i else 0) for k, x in enumerate(a))

    def label(self, a: Root) -> str:
        return root_label(a)


def add(a: Root, b: Root) -> Root:
    return tuple(x + y for x, y in zip(a, b))


def neg(a: Root) -> Root:
    return tuple(-x for x in a)


def scale(k: int, a: Root) -> Root:
    return tuple(k * x for x in a)


def root_label(a: Root) -> str:
    """Human label such as ``3a1+2a2`` or ``-a1``."""
    terms = []
    for i, c in enumerate(a, start=1):
        if c == 0:
            continue
        coef = "" if abs(c) == 1 else str(abs(c))
        sign = "-" if c < 0 else "+"
        terms.append((sign, f"{coef}a{i}"))
    if not terms:
        return "0"
    s = "".join(sg + t for sg, t in terms)
    return s[1:] if s.startswith("+") else s


def parse_root_label(text: str, rank: int) -> Root:
    """Inverse of :func:`root_label`; accepts ``a1+a2``, ``3a1+a2``, ``-a2``."""
    t = text.replace(" ", "").replace("α", "a")
    if not t:
        raise ValueError("empty root label")
    coeffs = [0] * rank
    i = 0
    sign = 1
    if t[0] in "+-":
        sign = -1 if t[0] == "-" else 1
        i = 1
    while i < len(t):
        j = i
        while j < len(t) and t[j].isdigit():
            j += 1
        k = int(t[i:j]) if j > i else 1
        if j >= len(t) or t[j] != "a":
            raise ValueError(f"bad root label {text!r}")
        j += 1
        m = j
        while m < len(t) and t[m].isdigit():
            m += 1
        if m == j:
            raise ValueError(f"bad root label {text!r}")
        idx = int(t[j:m]) - 1
        if not 0 <= idx < rank:
            raise ValueError(f"simple root index out of range in {text!r}")
        coeffs[idx] += sign * k
        if m < len(t):
            if t[m] not in "+-":
                raise ValueError(f"bad root label {text!r}")
            sign = -1 if t[m] == "-" else 1
            m += 1
            if m >= len(t):
                raise ValueError(f"bad root label {text!r}")
        i = m
    return tuple(coeffs)


def build_root_system(kind: str) -> RootSystem:
    if kind not in _GRAMS:
        raise RootSystemError(f"unsupported root system {kind!r}")
    gram = tuple(tuple(Fraction(x) for x in row) for row in _GRAMS[kind])
    rank = len(gram)
    cartan = tuple(tuple(int(2 * gram[i][j] / gram[j][j]) for j in range(rank))
                   for i in range(rank))
    simple = [tuple(int(i == j) for j in range(rank)) for i in range(rank)]

    # grow positive roots by height using unbroken alpha_i strings
    positive = set(simple)
    layer = list(simple)
    while layer:
        nxt = []
        for beta in layer:
            for i, a in enumerate(simple):
                if beta == a:
                    continue
                p = 0
                while tuple(b - (p + 1) * x for b, x in zip(beta, a)) in positive:
                    p += 1
                c = sum(beta[k] * cartan[k][i] for k in range(rank))
                q = p - c
                cand = add(beta, a)
                if q > 0 and cand not in positive:
                    positive.add(cand)
                    nxt.append(cand)
        layer = nxt
    pos = tuple(sorted(positive, key=_height_key))
    roots = pos + tuple(neg(r) for r in pos)
    return RootSystem(kind, rank, gram, cartan, pos, roots)


def root_string(rs: RootSystem, alpha: Root, beta: Root) -> Tuple[int, int]:
    """``(p, q)``: the ``alpha``-string through ``beta`` runs from
    ``beta - p*alpha`` to ``beta + q*alpha``."""
    alpha, beta = tuple(alpha), tuple(beta)
    if not (rs.is_root(alpha) and rs.is_root(beta)):
        raise RootSystemError("root_string needs two roots")
    if alpha == beta or alpha == neg(beta):
        raise RootSystemError("root_string undefined for proportional roots")
    p = 0
    while rs.is_root(tuple(b - (p + 1) * a for a, b in zip(alpha, beta))):
        p += 1
    q = 0
    while rs.is_root(tuple(b + (q + 1) * a for a, b in zip(alpha, beta))):
        q += 1
    return p, q


@dataclass(frozen=True)
class ChevalleyConstants:
    """Structure constants ``N[a, b]`` with ``[e_a, e_b] = N[a, b] e_{a+b}``."""

    pairs: Dict[Tuple[Root, Root], int]
    root_strings: Dict[Tuple[Root, Root], int]
    extraspecial: Tuple[Tuple[Root, Root], ...]

    def n(self, a: Root, b: Root) -> int:
        return self.pairs.get((tuple(a), tuple(b)), 0)


def _special_pairs(rs: RootSystem):
    order = {r: i for i, r in enumerate(rs.positive_roots)}
    out = {}
    for xi in rs.positive_roots:
        if sum(xi) == 1:
            continue
        cands = []
        for a in rs.positive_roots:
            b = tuple(x - y for x, y in zip(xi, a))
            if b in order and order[a] < order[b]:
                cands.append((a, b))
        out[xi] = sorted(cands, key=lambda ab: order[ab[0]])
    return out


def chevalley_constants(rs: RootSystem) -> ChevalleyConstants:
    """Chevalley structure constants, extraspecial pairs taken positive.

    Signs are propagated from the extraspecial pairs with the standard
    relations (antisymmetry, the three-term cyclic rule, ``N_{-a,-b} =
    -N_{a,b}`` and the four-root quadratic rule) until every pair is fixed.
    """
    roots = rs.roots
    mag = {}
    for a, b in product(roots, roots):
        s = add(a, b)
        if rs.is_root(s):
            p, _ = root_string(rs, a, b)
            mag[(a, b)] = p + 1
    sign: Dict[Tuple[Root, Root], int] = {}
    extras = []
    for xi, pairs in _special_pairs(rs).items():
        extras.append(pairs[0])
        sign[pairs[0]] = 1

    def N(a, b):
        if (a, b) not in mag:
            return 0
        s = sign.get((a, b))
        return None if s is None else s * mag[(a, b)]

    def setv(pair, value):
        if pair not in mag:
            if value != 0:
                raise RootSystemError(f"nonzero constant for non-root sum {pair}")
            return False
        if value == 0:
            raise RootSystemError(f"zero constant for root pair {pair}")
        s = 1 if value > 0 else -1
        if abs(value) != mag[pair]:
            raise RootSystemError(f"magnitude clash at {pair}: {value}")
        old = sign.get(pair)
        if old is None:
            sign[pair] = s
            return True
        if old != s:
            raise RootSystemError(f"sign clash at {pair}")
        return False

    triples = [(a, b, neg(add(a, b))) for (a, b) in mag]
    quads = []
    for a, b, c in product(roots, repeat=3):
        d = neg(add(add(a, b), c))
        if not rs.is_root(d):
            continue
        four = (a, b, c, d)
        if any(x == neg(y) for i, x in enumerate(four) for y in four[i + 1:]):
            continue
        quads.append(four)

    changed = True
    while changed:
        changed = False
        for (a, b) in list(mag):
            v = N(a, b)
            if v is not None:
                changed |= setv((b, a), -v)
                changed |= setv((neg(a), neg(b)), -v)
        for a, b, c in triples:
            # N_{a,b}/(c,c) = N_{b,c}/(a,a) = N_{c,a}/(b,b)
            vals = [(N(a, b), rs.norm2(c)), (N(b, c), rs.norm2(a)),
                    (N(c, a), rs.norm2(b))]
            known = next((v / w for v, w in vals if v is not None), None)
            if known is None:
                continue
            for (pair, w) in (((a, b), rs.norm2(c)), ((b, c), rs.norm2(a)),
                              ((c, a), rs.norm2(b))):
                val = known * w
                if val.denominator != 1:
                    raise RootSystemError("non-integral cyclic constant")
                changed |= setv(pair, int(val))
        for a, b, c, d in quads:
            terms = [((a, b), (c, d), add(a, b)), ((b, c), (a, d), add(b, c)),
                     ((c, a), (b, d), add(c, a))]
            live = [(p1, p2, s) for p1, p2, s in terms
                    if p1 in mag and p2 in mag]
            unknown = [t for t in live if N(*t[0]) is None or N(*t[1]) is None]
            if len(unknown) != 1:
                continue
            p1, p2, s = unknown[0]
            rest = sum((Fraction(N(*q1) * N(*q2)) / rs.norm2(qs)
                        for q1, q2, qs in live if (q1, q2, qs) != unknown[0]),
                       Fraction(0))
            prod_needed = -rest * rs.norm2(s)
            v1, v2 = N(*p1), N(*p2)
            if v1 is None and v2 is None:
                continue
            if v1 is None:
                val = prod_needed / v2
                target = p1
            else:
                val = prod_needed / v1
                target = p2
            if val.denominator != 1:
                raise RootSystemError("non-integral quadratic-rule constant")
            changed |= setv(target, int(val))

    missing = [p for p in mag if p not in sign]
    if missing:
        raise RootSystemError(f"undetermined Chevalley signs: {missing[:4]}")
    pairs = {p: sign[p] * mag[p] for p in mag}
    strings = {}
    for a, b in product(roots, roots):
        if a != b and a != neg(b):
            strings[(a, b)] = root_string(rs, a, b)[0]
    return ChevalleyConstants(pairs, strings, tuple(extras))


def weyl_group_elements(rs: RootSystem, generators) -> list[tuple[int, ...]]:
    """Words (tuples of 0-based simple-reflection indices) for every element of
    the subgroup generated by ``generators``, one shortest word per element."""
    def act(word, r):
        for i in reversed(word):
            r = rs.reflect(i, r)
        return r

    seen = {}
    frontier = [()]
    key = lambda w: tuple(act(w, s) for s in rs.simple_roots)
    seen[key(())] = ()
    while frontier:
        nxt = []
        for w in frontier:
            for g in generators:
                w2 = (g,) + w
                k = key(w2)
                if k not in seen:
                    seen[k] = w2
                    nxt.append(w2)
        frontier = nxt
    return sorted(seen.values(), key=lambda w: (len(w), w))


def apply_weyl_word(rs: RootSystem, word, r: Root) -> Root:
    for i in reversed(word):
        r = rs.reflect(i, r)
    return r
