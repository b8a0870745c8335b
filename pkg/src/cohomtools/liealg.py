"""Real semisimple Lie algebra models with exact structure constants.

Three presets are available:

``G2C_G2``    the complex exceptional algebra g2(C) regarded as a real
              algebra, Cartan involution fixing the compact form.
``SL3C_SU3``  sl3(C) regarded as real, same recipe.
``SO_2_NP2``  so(2, n+2) in its defining representation with theta = -X^T.

Elements are coordinate vectors on the model's ordered basis.  Entries may
be ``int``, ``Fraction`` or :class:`~cohomtools.exact.QSqrt`.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import product
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from . import kernels
from .exact import as_field, dot, format_number, nullspace, parse_rational, rank, rref
from .rootsys import (Root, RootSystem, add, build_root_system, chevalley_constants,
                      neg, root_label)

SCHEMA_VERSION = 1

PRESETS = ("G2C_G2", "SL3C_SU3", "SO_2_NP2")


class InvariantError(AssertionError):
    """A structural invariant failed on exact data."""


class DecompositionMismatch(InvariantError):
    """Eigenvalue data does not match the expected root system."""


def normalize_preset(name: str) -> str:
    key = name.strip().upper().replace("-", "_")
    aliases = {"G2C_G2": "G2C_G2", "SL3C_SU3": "SL3C_SU3", "SO_2_NP2": "SO_2_NP2"}
    if key not in aliases:
        raise ValueError(f"unknown preset {name!r}; expected one of {PRESETS}")
    return aliases[key]


# ---------------------------------------------------------------------------
# subspaces


class Subspace:
    """Exact linear subspace of ``Q^ambient`` (or of a quadratic extension),
    stored by its reduced row echelon basis so equality is structural."""

    __slots__ = ("rows", "pivots", "ambient", "model_key")

    def __init__(self, rows: Sequence[Sequence], ambient: int, model_key: str = ""):
        rows = [list(r) for r in rows if any(r)]
        for r in rows:
            if len(r) != ambient:
                raise ValueError(f"row of length {len(r)} in ambient {ambient}")
        if rows:
            R, piv = rref(rows, ambient)
        else:
            R, piv = [], []
        self.rows: Tuple[Tuple, ...] = tuple(tuple(r) for r in R)
        self.pivots: Tuple[int, ...] = tuple(piv)
        self.ambient = ambient
        self.model_key = model_key

    @classmethod
    def zero(cls, ambient: int, model_key: str = "") -> "Subspace":
        return cls([], ambient, model_key)

    @classmethod
    def full(cls, ambient: int, model_key: str = "") -> "Subspace":
        return cls([[int(i == j) for j in range(ambient)] for i in range(ambient)],
                   ambient, model_key)

    @property
    def dim(self) -> int:
        return len(self.rows)

    def __len__(self) -> int:
        return self.dim

    def basis(self) -> List[List]:
        return [list(r) for r in self.rows]

    def residual(self, v: Sequence) -> List:
        """``v`` minus its reduction modulo this subspace (zero iff ``v`` lies in it)."""
        res = list(v)
        for r, pc in zip(self.rows, self.pivots):
            c = res[pc]
            if c:
                res = [x - c * y if y else x for x, y in zip(res, r)]
        return res

    def __contains__(self, v) -> bool:
        return not any(self.residual(v))

    def issubset(self, other: "Subspace") -> bool:
        self._check(other)
        return all(r in other for r in self.rows)

    def __le__(self, other):
        return self.issubset(other)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Subspace):
            return NotImplemented
        return (self.ambient == other.ambient and self.pivots == other.pivots
                and self.rows == other.rows)

    def __hash__(self):
        return hash((self.ambient, self.rows))

    def __add__(self, other: "Subspace") -> "Subspace":
        self._check(other)
        return Subspace(list(self.rows) + list(other.rows), self.ambient, self.model_key)

    def __and__(self, other: "Subspace") -> "Subspace":
        self._check(other)
        if not self.rows or not other.rows:
            return Subspace.zero(self.ambient, self.model_key)
        res = [other.residual(r) for r in self.rows]
        # columns of the constraint matrix are the residuals of our basis
        cols = len(res)
        mat = [[res[i][k] for i in range(cols)] for k in range(self.ambient)]
        mat = [row for row in mat if any(row)]
        if not mat:
            return self
        ys = nullspace(mat, cols)
        vecs = [combine(y, self.rows) for y in ys]
        return Subspace(vecs, self.ambient, self.model_key)

    def coordinates(self, v: Sequence) -> List:
        """Coefficients of ``v`` in the RREF basis (``v`` must lie in the span)."""
        if v not in self:
            raise ValueError("vector not in subspace")
        return [v[pc] for pc in self.pivots]

    def _check(self, other):
        if self.ambient != other.ambient:
            raise ValueError("subspaces live in different ambients")

    def __repr__(self):
        return f"Subspace(dim={self.dim}, ambient={self.ambient})"

    def to_json(self):
        return [[format_number(x) for x in r] for r in self.rows]


def combine(coeffs: Sequence, rows: Sequence[Sequence]) -> List:
    n = len(rows[0]) if rows else 0
    out = [0] * n
    for c, r in zip(coeffs, rows):
        if not c:
            continue
        for k, x in enumerate(r):
            if x:
                out[k] += c * x
    return out


def span(vectors: Sequence[Sequence], ambient: int, model_key: str = "") -> Subspace:
    return Subspace(vectors, ambient, model_key)


def sum_spaces(spaces: Sequence[Subspace], ambient: int, model_key: str = "") -> Subspace:
    rows = []
    for s in spaces:
        rows.extend(s.rows)
    return Subspace(rows, ambient, model_key)


def is_direct_sum(spaces: Sequence[Subspace]) -> bool:
    total = sum(s.dim for s in spaces)
    if not spaces:
        return True
    return sum_spaces(spaces, spaces[0].ambient).dim == total


def _positive_definite(M: Sequence[Sequence]) -> bool:
    """Sylvester test through exact symmetric elimination."""
    n = len(M)
    A = [[Fraction(x) for x in row] for row in M]
    for i in range(n):
        p = A[i][i]
        if p <= 0:
            return False
        for r in range(i + 1, n):
            f = A[r][i] / p
            if f:
                for c in range(i, n):
                    A[r][c] -= f * A[i][c]
    return True


# ---------------------------------------------------------------------------
# the model


@dataclass(eq=False)
class LieAlgebraModel:
    """A real Lie algebra given by an integral structure tensor.

    ``structure[a, b, k]`` is the coefficient of basis vector ``k`` in
    ``[x_a, x_b]``; ``theta[:, a]`` is the image of ``x_a`` under the Cartan
    involution; ``complex_j`` (if present) is multiplication by ``i``.
    """

    preset: str
    n: Optional[int]
    labels: List[str]
    structure: np.ndarray
    theta: np.ndarray
    a_basis: List[List[int]]
    positive_element: List[Fraction]
    root_kind: str
    complex_j: Optional[np.ndarray] = None
    extra: Dict = field(default_factory=dict)

    @property
    def dim(self) -> int:
        return len(self.labels)

    @property
    def key(self) -> str:
        return self.preset if self.n is None else f"{self.preset}({self.n})"

    @property
    def name(self) -> str:
        return self.key

    # -- sparse caches ------------------------------------------------------

    @cached_property
    def _table(self):
        C = self.structure
        out = []
        for a in range(self.dim):
            nz = np.argwhere(C[a] != 0)
            out.append([(int(b), int(k), int(C[a, b, k])) for b, k in nz])
        return out

    @cached_property
    def _theta_rows(self):
        T = self.theta
        return [[(int(c), int(T[r, c])) for c in np.nonzero(T[r])[0]]
                for r in range(self.dim)]

    @cached_property
    def _j_rows(self):
        if self.complex_j is None:
            return None
        J = self.complex_j
        return [[(int(c), int(J[r, c])) for c in np.nonzero(J[r])[0]]
                for r in range(self.dim)]

    @cached_property
    def killing(self) -> np.ndarray:
        return kernels.killing_form(self.structure)

    @cached_property
    def inner(self) -> np.ndarray:
        """Gram matrix of ``<X, Y> = -B(X, theta Y)``."""
        return -(self.killing @ self.theta)

    @cached_property
    def _inner_rows(self):
        P = self.inner
        return [[(int(c), int(P[r, c])) for c in np.nonzero(P[r])[0]]
                for r in range(self.dim)]

    # -- elementwise operations ---------------------------------------------

    def basis_vector(self, i: int) -> List[int]:
        v = [0] * self.dim
        v[i] = 1
        return v

    def bracket(self, X: Sequence, Y: Sequence) -> List:
        if len(X) != self.dim or len(Y) != self.dim:
            raise ValueError(f"bracket expects vectors of length {self.dim}")
        out = [0] * self.dim
        table = self._table
        for a, xa in enumerate(X):
            if not xa:
                continue
            for b, k, c in table[a]:
                yb = Y[b]
                if yb:
                    out[k] += xa * yb * c
        return out

    def _apply_sparse(self, rows, X):
        return [sum((c * X[j] for j, c in r if X[j]), 0) for r in rows]

    def apply_theta(self, X: Sequence) -> List:
        return self._apply_sparse(self._theta_rows, X)

    def apply_j(self, X: Sequence) -> List:
        if self._j_rows is None:
            raise ValueError(f"{self.key} carries no complex structure")
        return self._apply_sparse(self._j_rows, X)

    def ip(self, X: Sequence, Y: Sequence):
        """``<X, Y>``."""
        PY = self._apply_sparse(self._inner_rows, Y)
        return dot(X, PY)

    def killing_value(self, X, Y):
        B = self.killing
        BY = [sum((int(B[r, c]) * Y[c] for c in range(self.dim) if Y[c] and B[r, c]), 0)
              for r in range(self.dim)]
        return dot(X, BY)

    def proj_p(self, X: Sequence) -> List:
        t = self.apply_theta(X)
        return [(x - y) / 2 if (x or y) else 0 for x, y in zip(X, t)]

    def proj_k(self, X: Sequence) -> List:
        t = self.apply_theta(X)
        return [(x + y) / 2 if (x or y) else 0 for x, y in zip(X, t)]

    def ad_matrix(self, X: Sequence) -> List[List]:
        """Matrix of ``ad X`` acting on coordinate columns (row ``k``, column ``b``)."""
        M = [[0] * self.dim for _ in range(self.dim)]
        for a, xa in enumerate(X):
            if not xa:
                continue
            for b, k, c in self._table[a]:
                M[k][b] += xa * c
        return M

    def ad_int(self, X: Sequence[int]) -> np.ndarray:
        x = np.asarray([int(v) for v in X], dtype=np.int64)
        return np.einsum("a,abk->kb", x, self.structure)

    # -- subspace helpers ---------------------------------------------------

    def span(self, vectors) -> Subspace:
        return Subspace(vectors, self.dim, self.key)

    def zero_space(self) -> Subspace:
        return Subspace.zero(self.dim, self.key)

    def full_space(self) -> Subspace:
        return Subspace.full(self.dim, self.key)

    def ominus(self, W: Subspace, V: Subspace) -> Subspace:
        """Orthogonal complement of ``V`` inside ``W`` for ``<,>``."""
        if not W.rows:
            return W
        if not V.rows:
            return W
        PV = [self._apply_sparse(self._inner_rows, v) for v in V.rows]
        mat = [[dot(pv, w) for w in W.rows] for pv in PV]
        ys = nullspace(mat, W.dim)
        return self.span([combine(y, W.rows) for y in ys])

    def bracket_space(self, A: Subspace, B: Subspace) -> Subspace:
        return self.span([self.bracket(x, y) for x in A.rows for y in B.rows])

    def is_subalgebra(self, S: Subspace) -> bool:
        rows = S.rows
        for i, x in enumerate(rows):
            for y in rows[i + 1:]:
                if self.bracket(x, y) not in S:
                    return False
        return True

    def image(self, S: Subspace, f) -> Subspace:
        return self.span([f(r) for r in S.rows])

    def theta_space(self, S: Subspace) -> Subspace:
        return self.image(S, self.apply_theta)

    def proj_p_space(self, S: Subspace) -> Subspace:
        return self.image(S, self.proj_p)

    def proj_k_space(self, S: Subspace) -> Subspace:
        return self.image(S, self.proj_k)

    def j_space(self, S: Subspace) -> Subspace:
        return self.image(S, self.apply_j)

    def eigenspace(self, ops: Sequence[Sequence[Sequence]], values: Sequence) -> Subspace:
        """Joint kernel of ``op_i - value_i`` for square matrices ``op_i``."""
        n = self.dim
        rows = []
        for op, lam in zip(ops, values):
            for r in range(n):
                row = list(op[r])
                row[r] = row[r] - lam
                if any(row):
                    rows.append(row)
        return self.span(nullspace(rows, n) if rows else self.full_space().rows)

    @cached_property
    def k_space(self) -> Subspace:
        T = self.theta
        return self.span([[int(x) for x in (np.eye(self.dim, dtype=np.int64) + T)[:, a]]
                          for a in range(self.dim)])

    @cached_property
    def p_space(self) -> Subspace:
        T = self.theta
        return self.span([[int(x) for x in (np.eye(self.dim, dtype=np.int64) - T)[:, a]]
                          for a in range(self.dim)])

    @cached_property
    def a_space(self) -> Subspace:
        return self.span(self.a_basis)

    # -- structural checks --------------------------------------------------

    def check_structure(self) -> Dict[str, int]:
        """Run every exhaustive identity check; raise on the first failure."""
        C, T = self.structure, self.theta
        bad = kernels.antisymmetry_violations(C)
        if len(bad):
            raise InvariantError(f"{self.key}: bracket not antisymmetric at {bad[0]}")
        bad = kernels.jacobi_violations(C)
        if len(bad):
            raise InvariantError(f"{self.key}: Jacobi fails at {tuple(bad[0])}")
        I = np.eye(self.dim, dtype=np.int64)
        if not np.array_equal(T @ T, I):
            raise InvariantError(f"{self.key}: theta is not an involution")
        bad = kernels.theta_violations(C, T)
        if len(bad):
            raise InvariantError(f"{self.key}: theta not an automorphism at {tuple(bad[0])}")
        B = self.killing
        if not np.array_equal(B, B.T):
            raise InvariantError(f"{self.key}: Killing form not symmetric")
        P = self.inner
        if not np.array_equal(P, P.T):
            raise InvariantError(f"{self.key}: inner product not symmetric")
        if not _positive_definite(P.tolist()):
            raise InvariantError(f"{self.key}: inner product not positive definite")
        bad = kernels.invariance_violations(C, P, T)
        if len(bad):
            raise InvariantError(f"{self.key}: ad-invariance fails at {tuple(bad[0])}")
        k, p = self.k_space, self.p_space
        for name, (x_sp, y_sp, target) in {
            "[k,k]": (k, k, k), "[k,p]": (k, p, p), "[p,p]": (p, p, k)
        }.items():
            if not self.bracket_space(x_sp, y_sp).issubset(target):
                raise InvariantError(f"{self.key}: {name} not in the expected summand")
        Bk = [[self.killing_value(x, y) for y in k.rows] for x in k.rows]
        if not _positive_definite([[-v for v in row] for row in Bk]):
            raise InvariantError(f"{self.key}: Killing form not negative definite on k")
        Bp = [[self.killing_value(x, y) for y in p.rows] for x in p.rows]
        if not _positive_definite(Bp):
            raise InvariantError(f"{self.key}: Killing form not positive definite on p")
        a = self.a_space
        if a.dim != 2 or not a.issubset(p):
            raise InvariantError(f"{self.key}: a must be a 2-dim subspace of p")
        if self.bracket_space(a, a).dim:
            raise InvariantError(f"{self.key}: a is not abelian")
        if self.complex_j is not None:
            self._check_complex_structure()
        return {"dim": self.dim, "dim_k": k.dim, "dim_p": p.dim}

    def _check_complex_structure(self):
        J = self.complex_j
        I = np.eye(self.dim, dtype=np.int64)
        if not np.array_equal(J @ J, -I):
            raise InvariantError("J^2 != -1")
        # J ad(X) = ad(X) J for every basis X, i.e. [X, JY] = J[X, Y]
        C = self.structure
        lhs = np.einsum("abk,by->ayk", C, J)       # [x_a, J x_y]
        rhs = np.einsum("aym,km->ayk", C, J)       # J [x_a, x_y]
        if not np.array_equal(lhs, rhs):
            raise InvariantError("J does not commute with ad")

    # -- serialization ------------------------------------------------------

    def to_json(self) -> dict:
        C = self.structure
        triples = [[int(a), int(b), int(k), format_number(int(C[a, b, k]))]
                   for a, b, k in np.argwhere(C != 0)]
        doc = {
            "schemaVersion": SCHEMA_VERSION,
            "preset": self.preset,
            "n": self.n,
            "rootKind": self.root_kind,
            "labels": list(self.labels),
            "bracket": triples,
            "theta": [[int(x) for x in row] for row in self.theta],
            "aBasis": [[int(x) for x in r] for r in self.a_basis],
            "positiveElement": [format_number(x) for x in self.positive_element],
        }
        if self.complex_j is not None:
            doc["complexJ"] = [[int(x) for x in row] for row in self.complex_j]
        return doc

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


def model_from_json(doc) -> LieAlgebraModel:
    if isinstance(doc, str):
        doc = json.loads(doc)
    if doc.get("schemaVersion") != SCHEMA_VERSION:
        raise ValueError(f"unsupported schemaVersion {doc.get('schemaVersion')!r}")
    n = len(doc["labels"])
    C = np.zeros((n, n, n), dtype=np.int64)
    for a, b, k, v in doc["bracket"]:
        q = parse_rational(v)
        if q.denominator != 1:
            raise ValueError("only integral structure constants are supported")
        C[a, b, k] = int(q)
    J = doc.get("complexJ")
    return LieAlgebraModel(
        preset=doc["preset"], n=doc.get("n"), labels=list(doc["labels"]),
        structure=C, theta=np.asarray(doc["theta"], dtype=np.int64),
        a_basis=[list(map(int, r)) for r in doc["aBasis"]],
        positive_element=[parse_rational(x) for x in doc["positiveElement"]],
        root_kind=doc["rootKind"],
        complex_j=None if J is None else np.asarray(J, dtype=np.int64))


# ---------------------------------------------------------------------------
# presets


def _complex_chevalley(kind: str):
    """Integral Chevalley basis of the complex simple algebra of type ``kind``.

    Basis order: h_1..h_r, e_alpha (alpha > 0, height order), e_{-alpha}.
    """
    rs = build_root_system(kind)
    cc = chevalley_constants(rs)
    r = rs.rank
    pos = list(rs.positive_roots)
    basis: List[Tuple[str, object]] = [("h", i) for i in range(r)]
    basis += [("e", a) for a in pos] + [("e", neg(a)) for a in pos]
    idx = {b: i for i, b in enumerate(basis)}
    m = len(basis)
    C = np.zeros((m, m, m), dtype=np.int64)
    A = rs.cartan

    def alpha_on_h(alpha, i):
        return sum(alpha[j] * A[j][i] for j in range(r))

    for i in range(r):
        for a in rs.roots:
            v = alpha_on_h(a, i)
            C[idx[("h", i)], idx[("e", a)], idx[("e", a)]] = v
            C[idx[("e", a)], idx[("h", i)], idx[("e", a)]] = -v
    for a in rs.roots:
        co = rs.coroot_coefficients(a)
        for i in range(r):
            if co[i]:
                C[idx[("e", a)], idx[("e", neg(a))], idx[("h", i)]] = co[i]
        for b in rs.roots:
            nab = cc.n(a, b)
            if nab:
                C[idx[("e", a)], idx[("e", b)], idx[("e", add(a, b))]] = nab
    labels = []
    for kind_, x in basis:
        labels.append(f"h{x + 1}" if kind_ == "h" else f"e[{root_label(x)}]")
    omega = np.zeros((m, m), dtype=np.int64)
    for (kind_, x), i in idx.items():
        if kind_ == "h":
            omega[i, i] = -1
        else:
            omega[idx[("e", neg(x))], i] = -1
    return rs, cc, basis, labels, C, omega


def _realify(Cc: np.ndarray, omega: np.ndarray, labels: List[str]):
    m = Cc.shape[0]
    n = 2 * m
    C = np.zeros((n, n, n), dtype=np.int64)
    C[:m, :m, :m] = Cc          # [x, x] -> x
    C[:m, m:, m:] = Cc          # [x, iy] -> i[x, y]
    C[m:, :m, m:] = Cc          # [ix, y] -> i[x, y]
    C[m:, m:, :m] = -Cc         # [ix, iy] -> -[x, y]
    T = np.zeros((n, n), dtype=np.int64)
    T[:m, :m] = omega           # theta is omega composed with conjugation
    T[m:, m:] = -omega
    J = np.zeros((n, n), dtype=np.int64)
    J[m:, :m] = np.eye(m, dtype=np.int64)
    J[:m, m:] = -np.eye(m, dtype=np.int64)
    rl = list(labels) + [f"i*{s}" for s in labels]
    return C, T, J, rl


def _build_complex(preset: str, kind: str) -> LieAlgebraModel:
    rs, cc, basis, labels, Cc, omega = _complex_chevalley(kind)
    C, T, J, rl = _realify(Cc, omega, labels)
    n = len(rl)
    r = rs.rank
    a_basis = [[int(i == j) for j in range(n)] for i in range(r)]
    # positivity: alpha_i(H) = 1 for every simple root
    A = [[Fraction(rs.cartan[i][k]) for k in range(r)] for i in range(r)]
    aug = [row + [Fraction(1)] for row in A]
    R, piv = rref(aug, r + 1)
    y = [R[i][r] for i in range(r)]
    den = 1
    for v in y:
        den = den * v.denominator // np.gcd(den, v.denominator)
    pos = [v * den for v in y]
    return LieAlgebraModel(preset=preset, n=None, labels=rl, structure=C, theta=T,
                           a_basis=a_basis, positive_element=pos, root_kind=kind,
                           complex_j=J,
                           extra={"complex_basis": basis, "complex_dim": len(basis)})


def so_pairs(p: int) -> List[Tuple[int, int]]:
    return [(a, b) for a in range(p) for b in range(a + 1, p)]


def so_signature(n: int) -> List[int]:
    return [-1, -1] + [1] * (n + 2)


def so_basis_matrix(p: int, eta: Sequence[int], a: int, b: int) -> np.ndarray:
    """``E_ab - E_ba`` for a compact pair, ``E_ab + E_ba`` for a mixed one."""
    M = np.zeros((p, p), dtype=np.int64)
    M[a, b] = 1
    M[b, a] = -1 if eta[a] == eta[b] else 1
    return M


def _so_structure(n: int) -> Tuple[np.ndarray, List[Tuple[int, int]]]:
    """Structure tensor of so(2, n+2) from the index formula for
    ``K_ab = eta_b E_ab - eta_a E_ba`` (no matrix products involved)."""
    p = n + 4
    eta = so_signature(n)
    pairs = so_pairs(p)
    idx = {pr: i for i, pr in enumerate(pairs)}
    d = len(pairs)
    C = np.zeros((d, d, d), dtype=np.int64)

    def K_to_M(x, y, coeff, acc):
        # K_xy in terms of the basis M_ab = eta_b K_ab (a < b)
        if x == y or coeff == 0:
            return
        if x < y:
            acc[idx[(x, y)]] += coeff * eta[y]
        else:
            acc[idx[(y, x)]] -= coeff * eta[x]

    def g(x, y):
        return eta[x] if x == y else 0

    for (a, b), i in idx.items():
        for (c, e), j in idx.items():
            acc = np.zeros(d, dtype=np.int64)
            s = eta[b] * eta[e]     # M_ab = eta_b K_ab, M_ce = eta_e K_ce
            K_to_M(a, e, s * g(b, c), acc)
            K_to_M(b, e, -s * g(a, c), acc)
            K_to_M(a, c, -s * g(b, e), acc)
            K_to_M(b, c, s * g(a, e), acc)
            C[i, j] = acc
    return C, pairs


def _build_so(n: int) -> LieAlgebraModel:
    if n < 1:
        raise ValueError("SO_2_NP2 needs n >= 1")
    p = n + 4
    eta = so_signature(n)
    C, pairs = _so_structure(n)
    d = len(pairs)
    T = np.zeros((d, d), dtype=np.int64)
    for i, (a, b) in enumerate(pairs):
        T[i, i] = 1 if eta[a] == eta[b] else -1
    idx = {pr: i for i, pr in enumerate(pairs)}
    H1 = [0] * d
    H1[idx[(0, 2)]] = 1
    H2 = [0] * d
    H2[idx[(1, 3)]] = 1
    labels = [f"M[{a},{b}]" for a, b in pairs]
    return LieAlgebraModel(preset="SO_2_NP2", n=n, labels=labels, structure=C, theta=T,
                           a_basis=[H1, H2],
                           positive_element=[Fraction(2), Fraction(1)],
                           root_kind="B2", extra={"pairs": pairs, "eta": eta, "p": p})


_MODEL_CACHE: Dict[Tuple[str, Optional[int]], LieAlgebraModel] = {}


def build_model(preset: str, n: Optional[int] = None, check: bool = False) -> LieAlgebraModel:
    """Build (and cache) a preset model; ``check=True`` runs :meth:`check_structure`."""
    preset = normalize_preset(preset)
    if preset == "SO_2_NP2":
        if n is None or int(n) < 1:
            raise ValueError("SO_2_NP2 needs n >= 1")
        n = int(n)
    else:
        n = None
    key = (preset, n)
    model = _MODEL_CACHE.get(key)
    if model is None:
        if preset == "G2C_G2":
            model = _build_complex(preset, "G2")
        elif preset == "SL3C_SU3":
            model = _build_complex(preset, "A2")
        else:
            model = _build_so(n)
        _MODEL_CACHE[key] = model
    if check:
        model.check_structure()
    return model


def bracket(model: LieAlgebraModel, X, Y):
    return model.bracket(X, Y)


# ---------------------------------------------------------------------------
# matrix realizations (independent oracles)


def so_realization(model: LieAlgebraModel) -> List[np.ndarray]:
    p, eta = model.extra["p"], model.extra["eta"]
    return [so_basis_matrix(p, eta, a, b) for a, b in model.extra["pairs"]]


def sl3_realization(model: LieAlgebraModel) -> List[Tuple[np.ndarray, np.ndarray]]:
    """Complex 3x3 matrices ``(re, im)`` for every real basis vector of SL3C_SU3.

    Simple root vectors are the matrix units ``E_{i,i+1}``/``E_{i+1,i}``; the
    remaining root vectors are defined by matrix commutators divided by the
    tabulated structure constants, so the comparison with the abstract tensor
    is a genuine check of those constants.
    """
    rs = build_root_system("A2")
    cc = chevalley_constants(rs)
    basis = model.extra["complex_basis"]
    mats: Dict[Tuple[str, object], np.ndarray] = {}

    def unit(i, j):
        M = np.zeros((3, 3), dtype=np.int64)
        M[i, j] = 1
        return M

    for i in range(2):
        mats[("h", i)] = unit(i, i) - unit(i + 1, i + 1)
        mats[("e", rs.simple_roots[i])] = unit(i, i + 1)
        mats[("e", neg(rs.simple_roots[i]))] = unit(i + 1, i)
    for sign in (1, -1):
        for g in rs.positive_roots:
            key = ("e", tuple(sign * x for x in g))
            if key in mats:
                continue
            for a in rs.simple_roots:
                a = tuple(sign * x for x in a)
                b = tuple(sign * x - y for x, y in zip(g, a))
                if ("e", b) in mats and cc.n(a, b):
                    X, Y = mats[("e", a)], mats[("e", b)]
                    comm = X @ Y - Y @ X
                    q, r = np.divmod(comm, cc.n(a, b))
                    if np.any(r):
                        raise InvariantError("non-integral root vector")
                    mats[key] = q
                    break
    m = len(basis)
    out = []
    zero = np.zeros((3, 3), dtype=np.int64)
    for b in basis:
        out.append((mats[b], zero))
    for b in basis:
        out.append((zero, mats[b]))
    assert len(out) == 2 * m
    return out


def _cmul(A, B):
    return (A[0] @ B[0] - A[1] @ B[1], A[0] @ B[1] + A[1] @ B[0])


def _complex_coords(M, realization) -> List[Fraction]:
    flat = [np.concatenate([re.ravel(), im.ravel()]) for re, im in realization]
    target = np.concatenate([M[0].ravel(), M[1].ravel()])
    cols = len(flat)
    mat = [[int(flat[c][r]) for c in range(cols)] + [-int(target[r])]
           for r in range(len(target))]
    ns = nullspace(mat, cols + 1)
    sol = [v for v in ns if v[cols] != 0]
    if len(ns) != 1 or not sol:
        raise InvariantError("matrix not uniquely expressible in the basis")
    v = sol[0]
    return [x / v[cols] for x in v[:cols]]


def commutator_oracle_mismatches(model: LieAlgebraModel) -> List[Tuple[int, int]]:
    """Basis pairs whose tensor bracket disagrees with the matrix commutator."""
    bad = []
    if model.preset == "SO_2_NP2":
        mats = so_realization(model)
        pairs = model.extra["pairs"]
        for i, j in product(range(model.dim), repeat=2):
            X, Y = mats[i], mats[j]
            comm = X @ Y - Y @ X
            coords = [int(comm[a, b]) for a, b in pairs]
            # the basis matrices must reproduce the commutator exactly
            recon = sum((c * mats[k] for k, c in enumerate(coords) if c),
                        np.zeros_like(comm))
            if not np.array_equal(recon, comm):
                bad.append((i, j))
                continue
            if coords != [int(x) for x in model.structure[i, j]]:
                bad.append((i, j))
        return bad
    if model.preset == "SL3C_SU3":
        real = sl3_realization(model)
        for i, j in product(range(model.dim), repeat=2):
            X, Y = real[i], real[j]
            xy, yx = _cmul(X, Y), _cmul(Y, X)
            comm = (xy[0] - yx[0], xy[1] - yx[1])
            want = sum((int(c) * np.stack(real[k]) for k, c in enumerate(model.structure[i, j]) if c),
                       np.zeros((2, 3, 3), dtype=np.int64))
            if not np.array_equal(np.stack(comm), want):
                bad.append((i, j))
        return bad
    raise ValueError(f"no matrix oracle for {model.key}")


# ---------------------------------------------------------------------------
# restricted roots


@dataclass(eq=False)
class RestrictedRootDatum:
    model: LieAlgebraModel
    root_system: RootSystem
    covectors: Dict[Root, Tuple[Fraction, ...]]
    root_spaces: Dict[Root, Subspace]
    multiplicities: Dict[Root, int]
    g0: Subspace
    k0: Subspace
    root_vectors: Dict[Root, List[Fraction]]
    dual_vectors: List[List[Fraction]]
    a_gram: List[List[Fraction]]

    @property
    def roots(self) -> Tuple[Root, ...]:
        return self.root_system.roots

    @property
    def positive_roots(self) -> Tuple[Root, ...]:
        return self.root_system.positive_roots

    @property
    def simple_roots(self) -> Tuple[Root, ...]:
        return self.root_system.simple_roots

    def a_coords(self, H: Sequence) -> List:
        """Coordinates of ``H`` in ``model.a_basis``."""
        m = self.model
        rows = m.a_basis
        cols = len(rows)
        mat = [[rows[c][r] for c in range(cols)] + [-H[r]] for r in range(m.dim)]
        mat = [row for row in mat if any(row)]
        ns = nullspace(mat, cols + 1) if mat else []
        sol = [v for v in ns if v[cols]]
        if not sol:
            raise ValueError("element is not in a")
        v = sol[0]
        return [x / v[cols] for x in v[:cols]]

    def evaluate(self, alpha: Root, H: Sequence):
        """``alpha(H)`` for ``H`` in ``a`` (model coordinates)."""
        c = self.a_coords(H)
        cov = self.covectors[tuple(alpha)]
        return sum((x * y for x, y in zip(c, cov)), Fraction(0))

    def root_inner(self, a: Root, b: Root):
        return self.model.ip(self.root_vectors[tuple(a)], self.root_vectors[tuple(b)])

    def root_space(self, alpha: Root) -> Subspace:
        return self.root_spaces[tuple(alpha)]

    def sum_root_spaces(self, roots) -> Subspace:
        return sum_spaces([self.root_spaces[tuple(r)] for r in roots],
                          self.model.dim, self.model.key)

    def n_space(self) -> Subspace:
        return self.sum_root_spaces(self.positive_roots)

    def k_alpha(self, alpha: Root) -> Subspace:
        m = self.model
        s = self.root_space(alpha) + self.root_space(neg(alpha))
        return s & m.k_space

    def label(self, alpha: Root) -> str:
        return root_label(alpha)


def _guess_eigenvalues(M: np.ndarray) -> List[Fraction]:
    ev = np.linalg.eigvals(M.astype(float))
    out = set()
    for z in ev:
        out.add(Fraction(float(z.real)).limit_denominator(1000))
    return sorted(out)


def restricted_root_decomposition(model: LieAlgebraModel) -> RestrictedRootDatum:
    cached = model.extra.get("_datum")
    if cached is not None:
        return cached
    rs = build_root_system(model.root_kind)
    dim = model.dim
    ads_int = [model.ad_int(h) for h in model.a_basis]
    ads = [M.tolist() for M in ads_int]
    cands = [_guess_eigenvalues(M) for M in ads_int]
    # verify the float guesses exactly: joint eigenspaces must fill g
    spaces: Dict[Tuple[Fraction, ...], Subspace] = {}
    total = 0
    for lam in product(*cands):
        S = model.eigenspace(ads, lam)
        if S.dim:
            spaces[tuple(lam)] = S
            total += S.dim
    if total != dim:
        raise DecompositionMismatch(
            f"{model.key}: joint eigenspaces span {total} of {dim} dimensions")
    zero = tuple(Fraction(0) for _ in model.a_basis)
    g0 = spaces.pop(zero, model.zero_space())
    covs = list(spaces)
    # Gram matrix of the a-basis and root vectors H_alpha
    G = [[Fraction(model.ip(x, y)) for y in model.a_basis] for x in model.a_basis]
    r = len(G)

    def solve_gram(vals):
        aug = [G[i] + [Fraction(vals[i])] for i in range(r)]
        R, piv = rref(aug, r + 1)
        if piv != list(range(r)):
            raise DecompositionMismatch("degenerate inner product on a")
        return [R[i][r] for i in range(r)]

    def to_model(coeffs):
        out = [Fraction(0)] * dim
        for c, h in zip(coeffs, model.a_basis):
            for k, x in enumerate(h):
                if x:
                    out[k] += c * x
        return out

    hcoef = {cv: solve_gram(cv) for cv in covs}

    def inner_cov(u, v):
        return sum((a * b for a, b in zip(hcoef[u], v)), Fraction(0))

    hpos = model.positive_element
    value = {cv: sum((x * y for x, y in zip(cv, hpos)), Fraction(0)) for cv in covs}
    if any(v == 0 for v in value.values()):
        raise DecompositionMismatch("positivity element is singular")
    positive = [cv for cv in covs if value[cv] > 0]
    pos_set = set(positive)
    simple = [cv for cv in positive
              if not any(tuple(a - b for a, b in zip(cv, other)) in pos_set
                         for other in positive if other != cv)]
    if len(simple) != rs.rank:
        raise DecompositionMismatch(f"{model.key}: found {len(simple)} simple roots")
    lengths = {cv: inner_cov(cv, cv) for cv in simple}
    if model.root_kind == "G2":
        simple.sort(key=lambda cv: (lengths[cv], -cv[0]))          # short first
    elif model.root_kind == "B2":
        simple.sort(key=lambda cv: (-lengths[cv], -cv[0]))         # long first
    else:
        simple.sort(key=lambda cv: (-cv[0], -cv[-1]))
    # express every eigen-covector in the simple roots
    aug_rows = [[simple[j][i] for j in range(r)] for i in range(r)]
    coeff_of = {}
    for cv in covs:
        aug = [aug_rows[i] + [cv[i]] for i in range(r)]
        R, piv = rref(aug, r + 1)
        if piv != list(range(r)):
            raise DecompositionMismatch("simple roots not independent")
        cf = [R[i][r] for i in range(r)]
        if any(x.denominator != 1 for x in cf):
            raise DecompositionMismatch(f"non-integral root coefficients {cf}")
        coeff_of[cv] = tuple(int(x) for x in cf)
    found = set(coeff_of.values())
    if found != set(rs.roots):
        raise DecompositionMismatch(
            f"{model.key}: eigenvalue data {sorted(found)} is not {rs.kind}")
    for i in range(r):
        for j in range(r):
            c = 2 * inner_cov(simple[i], simple[j]) / inner_cov(simple[j], simple[j])
            if c != rs.cartan[i][j]:
                raise DecompositionMismatch(f"{model.key}: Cartan matrix mismatch")
    cov_of = {coeff_of[cv]: cv for cv in covs}
    root_spaces = {root: spaces[cov_of[root]] for root in rs.roots}
    mult = {root: root_spaces[root].dim for root in rs.roots}
    rv = {root: to_model(hcoef[cov_of[root]]) for root in rs.roots}
    # dual vectors: alpha_k(H^j) = delta_jk
    duals = []
    for j in range(r):
        aug = [list(simple[k]) + [Fraction(int(j == k))] for k in range(r)]
        R, piv = rref(aug, r + 1)
        duals.append(to_model([R[i][r] for i in range(r)]))
    k0 = g0 & model.k_space
    datum = RestrictedRootDatum(model=model, root_system=rs,
                                covectors=dict(cov_of), root_spaces=root_spaces,
                                multiplicities=mult, g0=g0, k0=k0, root_vectors=rv,
                                dual_vectors=duals, a_gram=G)
    _check_datum(datum)
    model.extra["_datum"] = datum
    return datum


def _check_datum(d: RestrictedRootDatum):
    m = d.model
    spaces = [d.g0] + [d.root_spaces[a] for a in d.roots]
    if not is_direct_sum(spaces) or sum(s.dim for s in spaces) != m.dim:
        raise DecompositionMismatch("root space decomposition is not direct")
    if not is_direct_sum([d.k0, m.a_space]) or (d.k0 + m.a_space) != d.g0:
        raise DecompositionMismatch("g0 != k0 + a")
    for a in d.roots:
        if d.multiplicities[a] != d.multiplicities[neg(a)]:
            raise DecompositionMismatch(f"mult({a}) != mult(-{a})")
        if m.theta_space(d.root_spaces[a]) != d.root_spaces[neg(a)]:
            raise DecompositionMismatch(f"theta g_{a} != g_-{a}")
    for j, H in enumerate(d.dual_vectors):
        for k, s in enumerate(d.simple_roots):
            if d.evaluate(s, H) != int(j == k):
                raise DecompositionMismatch("dual vectors wrong")
    for a in d.roots:
        for H in m.a_basis:
            if Fraction(m.ip(d.root_vectors[a], H)) != d.evaluate(a, H):
                raise DecompositionMismatch("root vector does not represent the root")


def coroot(model: LieAlgebraModel, datum: RestrictedRootDatum, alpha: Root) -> List:
    """``H'_alpha = 2/<alpha, alpha> H_alpha``."""
    alpha = tuple(alpha)
    if alpha not in datum.root_vectors:
        raise ValueError(f"{alpha} is not a restricted root")
    H = datum.root_vectors[alpha]
    n2 = Fraction(model.ip(H, H))
    return [2 * x / n2 for x in H]


def restricted_eigenvalues(model: LieAlgebraModel, H: Sequence, S: Subspace) -> Dict[Fraction, int]:
    """Eigenvalues (with multiplicity) of ``ad H`` on an ``ad H``-stable subspace
    ``S``, found by exact kernel dimensions over the candidate spectrum."""
    M = model.ad_matrix(H)
    fl = np.array([[float(x) for x in row] for row in M])
    out = {}
    for lam in _guess_eigenvalues(fl):
        E = model.eigenspace([M], [lam]) & S
        if E.dim:
            out[lam] = E.dim
    if sum(out.values()) != S.dim:
        raise InvariantError("ad H is not diagonalizable on the subspace")
    return out


# ---------------------------------------------------------------------------
# linear solves shared by the parabolic and normalizer code


def normalizer_space(model: LieAlgebraModel, s: Subspace, v: Subspace) -> Subspace:
    """``{X in s : [X, v] in v}`` as the kernel of ``X -> residual_v([X, v])``."""
    if not s.rows:
        return s
    if not v.rows:
        return s
    cols = []
    for x in s.rows:
        col = []
        for w in v.rows:
            col.extend(v.residual(model.bracket(x, w)))
        cols.append(col)
    return _kernel_combination(model, s, cols)


def centralizer_space(model: LieAlgebraModel, s: Subspace, v: Subspace) -> Subspace:
    """``{X in s : [X, v] = 0}``."""
    if not s.rows or not v.rows:
        return s
    cols = []
    for x in s.rows:
        col = []
        for w in v.rows:
            col.extend(model.bracket(x, w))
        cols.append(col)
    return _kernel_combination(model, s, cols)


def _kernel_combination(model, s, cols):
    nrows = len(cols[0])
    mat = []
    seen = set()
    for r in range(nrows):
        row = tuple(c[r] for c in cols)
        if any(row) and row not in seen:
            seen.add(row)
            mat.append(list(row))
    if not mat:
        return s
    ys = nullspace(mat, len(cols))
    return model.span([combine(y, s.rows) for y in ys])


def orthogonal_projection(model: LieAlgebraModel, x: Sequence, S: Subspace) -> List:
    """Orthogonal projection of ``x`` onto ``S`` for ``<,>``."""
    if not S.rows:
        return [0] * model.dim
    G = [[model.ip(a, b) for b in S.rows] for a in S.rows]
    rhs = [model.ip(a, x) for a in S.rows]
    k = len(G)
    aug = [list(G[i]) + [rhs[i]] for i in range(k)]
    R, piv = rref(aug, k + 1)
    if piv != list(range(k)):
        raise InvariantError("degenerate Gram matrix")
    return combine([R[i][k] for i in range(k)], S.rows)


def derived_series_limit(model: LieAlgebraModel, S: Subspace) -> Subspace:
    """Iterate ``S -> [S, S]`` to a fixed point."""
    cur = S
    while True:
        nxt = model.bracket_space(cur, cur)
        if nxt == cur:
            return cur
        cur = nxt


def is_nilpotent_subalgebra(model: LieAlgebraModel, S: Subspace, max_depth: int = 64) -> bool:
    cur = S
    for _ in range(max_depth):
        if not cur.rows:
            return True
        cur = model.bracket_space(S, cur)
    return False


def check_root_space_closure(datum: RestrictedRootDatum) -> None:
    """``[g_alpha, g_beta]`` lies in ``g_{alpha+beta}`` (or ``g_0``, or vanishes)."""
    m = datum.model
    spaces = dict(datum.root_spaces)
    zero = (0,) * datum.root_system.rank
    spaces[zero] = datum.g0
    keys = list(spaces)
    for i, a in enumerate(keys):
        for b in keys[i:]:
            br = m.bracket_space(spaces[a], spaces[b])
            s = tuple(x + y for x, y in zip(a, b))
            if s in spaces:
                ok = br.issubset(spaces[s])
            else:
                ok = br.dim == 0
            if not ok:
                raise InvariantError(
                    f"{m.key}: [g_{root_label(a)}, g_{root_label(b)}] escapes its root space")
    if m.complex_j is not None:
        for a, S in spaces.items():
            if m.j_space(S) != S:
                raise InvariantError(f"{m.key}: J does not preserve g_{root_label(a)}")


def clear_caches() -> None:
    """Forget every cached model (and with it every cached decomposition)."""
    _MODEL_CACHE.clear()
