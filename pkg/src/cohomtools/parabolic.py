"""Maximal parabolic subalgebras and their attached pieces.

For ``Phi_j = Lambda \\ {alpha_j}`` we build

    q_j = l_j + n_j = m_j + a_j + n_j,   m_j = g_j + z_j,

the gradation ``n_j = sum_nu n_j^nu`` by the ``alpha_j``-coefficient, the
compact pieces ``k_j = m_j cap k`` and ``k_alpha``, and the boundary tangent
space ``b_j = m_j cap p``.  Indices ``j`` are 1-based to match the usual
labeling of simple roots.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .liealg import (InvariantError, LieAlgebraModel, RestrictedRootDatum, Subspace,
                     centralizer_space, derived_series_limit, is_direct_sum,
                     is_nilpotent_subalgebra, restricted_root_decomposition, sum_spaces)
from .rootsys import Root, neg, root_label


@dataclass(eq=False)
class ParabolicDecomposition:
    model: LieAlgebraModel
    datum: RestrictedRootDatum
    j: int
    phi: Tuple[Root, ...]
    sigma_j: Tuple[Root, ...]
    sigma_j_pos: Tuple[Root, ...]
    levels: Dict[int, Tuple[Root, ...]]
    lj: Subspace
    nj: Subspace
    aj: Subspace
    a_upper: Subspace
    mj: Subspace
    gj: Subspace
    zj: Subspace
    kj: Subspace
    bj: Subspace
    qj: Subspace
    gradation: Dict[int, Subspace]
    Hj: List[Fraction]
    k_alpha: Dict[Root, Subspace]
    _cache: Dict = field(default_factory=dict, repr=False)

    @property
    def rank(self) -> int:
        return self.datum.root_system.rank

    @property
    def alpha_j(self) -> Root:
        return self.datum.simple_roots[self.j - 1]

    @property
    def top_level(self) -> int:
        return max(self.levels)

    def n1(self) -> Subspace:
        return self.gradation[1]

    def gj_k(self) -> Subspace:
        return self.gj & self.kj

    def other_indices(self) -> List[int]:
        return [l for l in range(1, self.rank + 1) if l != self.j]

    def q_jl(self, l: int) -> Subspace:
        """``g_j`` intersected with the parabolic of ``g`` for ``Lambda \\ {alpha_j, alpha_l}``."""
        if l == self.j or not 1 <= l <= self.rank:
            raise ValueError(f"l must be a simple-root index different from j={self.j}")
        key = ("q", l)
        if key not in self._cache:
            P = parabolic_subalgebra(self.datum, [k for k in range(1, self.rank + 1)
                                                  if k not in (self.j, l)])
            self._cache[key] = self.gj & P
        return self._cache[key]

    def summary(self) -> dict:
        return {
            "j": self.j,
            "phi": [root_label(a) for a in self.phi],
            "dims": {
                "q": self.qj.dim, "l": self.lj.dim, "n": self.nj.dim,
                "a_j": self.aj.dim, "a^j": self.a_upper.dim, "m": self.mj.dim,
                "g_j": self.gj.dim, "z": self.zj.dim, "k_j": self.kj.dim,
                "b_j": self.bj.dim,
            },
            "gradation": {str(nu): self.gradation[nu].dim for nu in sorted(self.gradation)},
            "levelRoots": {str(nu): [root_label(a) for a in self.levels[nu]]
                           for nu in sorted(self.levels)},
        }


def parabolic_subalgebra(datum: RestrictedRootDatum, subset: Sequence[int]) -> Subspace:
    """Standard parabolic of ``g`` for the simple roots with (1-based) indices in ``subset``."""
    keep = {i - 1 for i in subset}
    spaces = [datum.g0]
    for a in datum.roots:
        if a in datum.positive_roots:
            spaces.append(datum.root_spaces[a])
        elif all(c == 0 for i, c in enumerate(a) if i not in keep):
            spaces.append(datum.root_spaces[a])
    m = datum.model
    return sum_spaces(spaces, m.dim, m.key)


def parabolic_decomposition(model: LieAlgebraModel, j: int, check: bool = True) -> ParabolicDecomposition:
    datum = restricted_root_decomposition(model)
    rs = datum.root_system
    if not isinstance(j, int) or not 1 <= j <= rs.rank:
        raise ValueError(f"j must lie in 1..{rs.rank}, got {j!r}")
    cache = model.extra.setdefault("_parabolic", {})
    if j in cache:
        return cache[j]
    jj = j - 1
    phi = tuple(s for i, s in enumerate(rs.simple_roots) if i != jj)
    sigma_j = tuple(a for a in rs.roots if a[jj] == 0)
    sigma_j_pos = tuple(a for a in rs.positive_roots if a[jj] == 0)
    levels: Dict[int, List[Root]] = {}
    for a in rs.positive_roots:
        if a[jj] > 0:
            levels.setdefault(a[jj], []).append(a)
    dim, key = model.dim, model.key
    lj = sum_spaces([datum.g0] + [datum.root_spaces[a] for a in sigma_j], dim, key)
    gradation = {nu: datum.sum_root_spaces(rts) for nu, rts in levels.items()}
    nj = sum_spaces(list(gradation.values()), dim, key)
    # a_j = intersection of ker alpha over Phi_j; a^j is spanned by their root vectors
    a_upper = model.span([datum.root_vectors[a] for a in phi])
    aj = model.ominus(model.a_space, a_upper)
    mj = model.ominus(lj, aj)
    gj = derived_series_limit(model, mj)
    zj = model.ominus(mj, gj)
    kj = mj & model.k_space
    bj = mj & model.p_space
    qj = lj + nj
    k_alpha = {a: datum.k_alpha(a) for a in sigma_j_pos}
    pd = ParabolicDecomposition(
        model=model, datum=datum, j=j, phi=phi, sigma_j=sigma_j, sigma_j_pos=sigma_j_pos,
        levels={nu: tuple(v) for nu, v in sorted(levels.items())},
        lj=lj, nj=nj, aj=aj, a_upper=a_upper, mj=mj, gj=gj, zj=zj, kj=kj, bj=bj, qj=qj,
        gradation=dict(sorted(gradation.items())), Hj=list(datum.dual_vectors[jj]),
        k_alpha=k_alpha)
    if check:
        verify_decomposition(pd)
    cache[j] = pd
    return pd


def verify_decomposition(pd: ParabolicDecomposition) -> None:
    """Check every structural identity of the decomposition; raise on failure."""
    m, d = pd.model, pd.datum

    def need(cond, what):
        if not cond:
            raise InvariantError(f"{m.key}, j={pd.j}: {what}")

    need(is_direct_sum([pd.lj, pd.nj]) and pd.lj + pd.nj == pd.qj, "q_j != l_j + n_j")
    need(is_direct_sum([pd.mj, pd.aj, pd.nj])
         and pd.mj.dim + pd.aj.dim + pd.nj.dim == pd.qj.dim, "q_j != m_j + a_j + n_j")
    need(m.bracket_space(pd.lj, pd.nj).issubset(pd.nj), "[l_j, n_j] not in n_j")
    need(m.bracket_space(pd.kj, pd.nj).issubset(pd.nj), "[k_j, n_j] not in n_j")
    need(pd.aj.dim == 1, "dim a_j != 1")
    need(is_direct_sum([pd.aj, pd.a_upper]) and pd.aj + pd.a_upper == m.a_space,
         "a != a_j + a^j")
    for H in pd.aj.rows:
        for a in pd.phi:
            need(d.evaluate(a, H) == 0, "a_j not in ker Phi_j")
    need(m.bracket_space(pd.mj, pd.mj) == pd.gj, "g_j != [m_j, m_j]")
    need(pd.zj.issubset(d.k0), "z_j not in k_0")
    need(m.bracket_space(pd.zj, pd.gj).dim == 0, "[z_j, g_j] != 0")
    need(pd.bj == (pd.mj & m.p_space), "b_j != m_j cap p")
    need(pd.bj.issubset(pd.gj), "b_j not in g_j")
    gk = pd.gj & pd.kj
    need(is_direct_sum([gk, pd.bj]) and gk + pd.bj == pd.gj, "g_j != (g_j cap k_j) + b_j")
    top = pd.top_level
    for mu, A in pd.gradation.items():
        for nu, B in pd.gradation.items():
            br = m.bracket_space(A, B)
            if mu + nu > top:
                need(br.dim == 0, f"[n^{mu}, n^{nu}] != 0")
            else:
                need(br.issubset(pd.gradation[mu + nu]), f"[n^{mu}, n^{nu}] not in n^{mu + nu}")
    need(m.theta_space(pd.kj) == pd.kj, "theta k_j != k_j")
    pieces = [d.k0] + list(pd.k_alpha.values())
    need(is_direct_sum(pieces) and sum_spaces(pieces, m.dim) == pd.kj,
         "k_j != k_0 + sum k_alpha")
    for a, K in pd.k_alpha.items():
        need(K.dim == d.multiplicities[a], f"dim k_alpha != mult({root_label(a)})")
    need(is_nilpotent_subalgebra(m, pd.nj, top + 2), "n_j not nilpotent")
    need(pd.a_upper.issubset(pd.bj), "a^j not in b_j")
    need(centralizer_space(m, pd.bj, pd.a_upper) == pd.a_upper, "a^j not maximal abelian in b_j")


@dataclass
class GradationReport:
    ok: bool
    verified: List[Tuple[int, int]]
    offending: Optional[Tuple[int, List, List]] = None


def gradation_check(pd: ParabolicDecomposition) -> GradationReport:
    """``[H, X] = nu alpha_j(H) X`` for H in a_j and X in each level ``n_j^nu``."""
    m, d = pd.model, pd.datum
    verified = []
    for nu, S in pd.gradation.items():
        for H in pd.aj.rows:
            c = nu * d.evaluate(pd.alpha_j, H)
            for X in S.rows:
                lhs = m.bracket(H, X)
                if any(a - c * b for a, b in zip(lhs, X)):
                    return GradationReport(False, verified, (nu, list(H), list(X)))
        verified.append((nu, S.dim))
    return GradationReport(True, verified)


def boundary_component_data(pd: ParabolicDecomposition) -> Tuple[Tuple[Subspace, Subspace], int]:
    """``(g_j cap k_j, b_j)`` and the dimension of the boundary component."""
    return (pd.gj_k(), pd.bj), pd.bj.dim


# ---------------------------------------------------------------------------
# distinguished bases for the B2 presets


def so_tensor_basis(pd: ParabolicDecomposition) -> Dict[Tuple[int, int], List]:
    """Basis ``e_a (x) f_s`` of ``n_2^1`` for ``SO_2_NP2`` (a in {1,2}, s in 1..n).

    ``e_1 (x) f_s`` spans the part of ``g_{alpha_2}`` supported on the extra
    spacelike direction ``s``; ``e_2 (x) f_s = [T, e_1 (x) f_s]`` for the
    generator ``T`` of ``k_{alpha_1}``.
    """
    m, d = pd.model, pd.datum
    if m.preset != "SO_2_NP2" or pd.j != 2:
        raise ValueError("tensor basis is defined for SO_2_NP2 with j=2")
    a1, a2 = d.simple_roots
    g_a2 = d.root_spaces[a2]
    (T,) = d.k_alpha(a1).rows
    pairs = m.extra["pairs"]
    out = {}
    for s in range(1, m.n + 1):
        col = 3 + s
        support = m.span([[int(p == (x, col)) for p in pairs] for x in range(4)])
        (e1f,) = (g_a2 & support).rows
        e1f = list(e1f)
        out[(1, s)] = e1f
        out[(2, s)] = m.bracket(T, e1f)
    return out


def so_xi_vector(pd: ParabolicDecomposition) -> List:
    """Generator of the trivial ``k_1``-submodule of ``n_1`` for ``SO_2_NP2``."""
    m = pd.model
    if m.preset != "SO_2_NP2" or pd.j != 1:
        raise ValueError("xi is defined for SO_2_NP2 with j=1")
    Z = centralizer_space(m, pd.nj, pd.kj)
    if Z.dim != 1:
        raise InvariantError(f"expected a 1-dim trivial k_1-module, got {Z.dim}")
    return list(Z.rows[0])
