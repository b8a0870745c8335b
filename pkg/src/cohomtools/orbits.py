"""Subalgebras of the listed cohomogeneity one actions and their orbit dimensions.

The tangent space at ``g.o`` of the orbit ``H.o`` is carried by
``pi_p(Ad(g^-1) h)``.  We only evaluate this at ``g = exp X`` with ``X``
nilpotent, where ``Ad(exp(-X)) = exp(-ad X)`` is a finite polynomial and the
computation stays exact.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial, gcd, lcm
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .exact import format_number, rank
from .liealg import (SCHEMA_VERSION, InvariantError, LieAlgebraModel, Subspace,
                     normalizer_space, restricted_root_decomposition)
from .parabolic import ParabolicDecomposition, parabolic_decomposition, so_tensor_basis
from .nilcons import nilpotent_action_algebra


class NotNilpotentError(ValueError):
    pass


@dataclass
class ActionSpec:
    name: str
    h: Subspace
    tag: Dict
    base_orbit_dim: int
    sampled_orbit_dims: List[Tuple[str, int]] = field(default_factory=list)

    def to_json(self) -> dict:
        return {"name": self.name, "tag": self.tag, "dimH": self.h.dim,
                "baseOrbitDim": self.base_orbit_dim,
                "sampledOrbitDims": [[d, k] for d, k in self.sampled_orbit_dims]}


def _make_spec(model: LieAlgebraModel, name: str, h: Subspace, tag: Dict) -> ActionSpec:
    if not model.is_subalgebra(h):
        raise InvariantError(f"{name}: not closed under the bracket")
    return ActionSpec(name, h, tag, model.proj_p_space(h).dim)


# ---------------------------------------------------------------------------
# exact exponentials


def _integral(vec: Sequence) -> Tuple[List[int], int]:
    """``(ints, den)`` with ``vec == ints / den``."""
    fr = [Fraction(x) for x in vec]
    den = 1
    for f in fr:
        den = lcm(den, f.denominator)
    return [int(f * den) for f in fr], den


def exp_ad(model: LieAlgebraModel, X: Sequence, sign: int = 1) -> Tuple[np.ndarray, int]:
    """``exp(sign * ad X)`` as ``(E, D)`` with integer object array ``E`` and
    ``exp(sign * ad X) = E / D``.  Raises if ``ad X`` is not nilpotent."""
    xi, den = _integral(X)
    M = model.ad_int(xi).astype(object)
    if sign < 0:
        M = -M
    n = model.dim
    powers = [np.identity(n, dtype=object)]
    P = powers[0]
    for _ in range(n + 1):
        P = M.dot(P)
        if not P.any():
            break
        powers.append(P)
    else:
        raise NotNilpotentError("ad X is not nilpotent")
    K = len(powers) - 1
    # exp(ad(xi)/den) = sum_k (ad xi)^k / (den^k k!)
    D = factorial(K) * den ** K
    E = np.zeros((n, n), dtype=object)
    for k, Pk in enumerate(powers):
        E = E + Pk * (D // (factorial(k) * den ** k))
    return E, D


def transform_space(model: LieAlgebraModel, S: Subspace, X: Sequence, sign: int = 1) -> List[List[int]]:
    """Integer rows spanning ``exp(sign ad X) S``."""
    E, _ = exp_ad(model, X, sign)
    out = []
    for r in S.rows:
        ri, _ = _integral(r)
        out.append([int(x) for x in E.dot(np.array(ri, dtype=object))])
    return out


def orbit_dimension_at(model: LieAlgebraModel, h: Subspace, X: Optional[Sequence] = None) -> int:
    """``dim pi_p(exp(-ad X) h)``: dimension of the ``H``-orbit through ``exp(X).o``."""
    if X is None or not any(X):
        return model.proj_p_space(h).dim
    rows = transform_space(model, h, X, sign=-1)
    T = model.theta.astype(object)
    proj = [list(np.array(r, dtype=object) - T.dot(np.array(r, dtype=object))) for r in rows]
    return rank(proj, model.dim)


def default_probes(model: LieAlgebraModel, count: int = 16, seed: int = 0) -> List[List[int]]:
    """Seeded integer elements of ``n`` used as probe points ``exp(X).o``."""
    d = restricted_root_decomposition(model)
    basis = [_integral(r)[0] for r in d.n_space().rows]
    rng = np.random.default_rng(seed)
    probes = []
    while len(probes) < count:
        c = [int(x) for x in rng.integers(-2, 3, size=len(basis))]
        if not any(c):
            continue
        X = [0] * model.dim
        for ci, b in zip(c, basis):
            if ci:
                X = [x + ci * y for x, y in zip(X, b)]
        probes.append(X)
    return probes


@dataclass
class CohomogeneityEstimate:
    value: int
    witness: Optional[int]
    base_dim: int
    probe_dims: List[int]


def cohomogeneity_estimate(model: LieAlgebraModel, h: Subspace,
                           probes: Optional[Sequence[Sequence]] = None) -> CohomogeneityEstimate:
    """``dim p - max orbit dimension`` over the base point and ``exp(X).o`` for
    every probe ``X``; an upper bound for the cohomogeneity."""
    if probes is None:
        probes = default_probes(model)
    top = model.p_space.dim
    base = orbit_dimension_at(model, h)
    best, witness = base, None
    dims = []
    for i, X in enumerate(probes):
        if best == top:
            break
        k = orbit_dimension_at(model, h, X)
        dims.append(k)
        if k > best:
            best, witness = k, i
    return CohomogeneityEstimate(top - best, witness, base, dims)


def sample_orbits(model: LieAlgebraModel, spec: ActionSpec,
                  probes: Optional[Sequence[Sequence]] = None) -> ActionSpec:
    if probes is None:
        probes = default_probes(model)
    spec.sampled_orbit_dims = [(f"probe{i}", orbit_dimension_at(model, spec.h, X))
                               for i, X in enumerate(probes)]
    return spec


# ---------------------------------------------------------------------------
# action builders


def foliation_algebra_a(model: LieAlgebraModel, ell: Sequence) -> ActionSpec:
    """``h_l = (a (-) l) + n`` for a line ``l`` in ``a``."""
    if not any(ell) or ell not in model.a_space:
        raise ValueError("l must be a nonzero element of a")
    d = restricted_root_decomposition(model)
    line = model.span([ell])
    h = model.ominus(model.a_space, line) + d.n_space()
    return _make_spec(model, "h_l", h, {"kind": "FoliationA"})


def foliation_algebra_n(model: LieAlgebraModel, j: int, ell: Sequence) -> ActionSpec:
    """``h_j = a + (n (-) l_j)`` for a line ``l_j`` in ``g_{alpha_j}``."""
    d = restricted_root_decomposition(model)
    if not 1 <= j <= d.root_system.rank:
        raise ValueError(f"j out of range: {j}")
    g = d.root_spaces[d.simple_roots[j - 1]]
    if not any(ell) or ell not in g:
        raise ValueError("l_j must be a nonzero vector of the simple root space")
    h = model.a_space + model.ominus(d.n_space(), model.span([ell]))
    return _make_spec(model, f"h_{j}", h, {"kind": "FoliationN", "j": j})


def canonical_extension(pd: ParabolicDecomposition, h_phi: Subspace, label: str = "") -> ActionSpec:
    """``h_phi + a_j + n_j`` for a subalgebra ``h_phi`` of ``m_j``."""
    m = pd.model
    if not h_phi.issubset(pd.mj) or not m.is_subalgebra(h_phi):
        raise ValueError("h_phi must be a subalgebra of m_j")
    h = h_phi + pd.aj + pd.nj
    return _make_spec(m, label or f"h^L_{pd.j}", h,
                      {"kind": "CanonicalExtension", "j": pd.j, "label": label})


def boundary_isotropy(pd: ParabolicDecomposition) -> Subspace:
    """``g_j cap k_j``: isotropy of the boundary component."""
    return pd.gj_k()


def boundary_geodesic_algebra(pd: ParabolicDecomposition) -> Subspace:
    """``R iH_alpha + R H_alpha`` for the simple root ``alpha`` of ``Phi_j`` (complex presets)."""
    m, d = pd.model, pd.datum
    (alpha,) = pd.phi
    H = d.root_vectors[alpha]
    return m.span([H, m.apply_j(H)])


def grassmannian_w(pd: ParabolicDecomposition, k: int) -> Subspace:
    """Default ``w``: ``R H_{alpha_2}`` plus the first ``k - 1`` basis vectors of ``g_{alpha_2}``."""
    m, d = pd.model, pd.datum
    if k == 0:
        return m.zero_space()
    a2 = d.simple_roots[1]
    rows = [d.root_vectors[a2]] + [list(r) for r in d.root_spaces[a2].rows[:k - 1]]
    return m.span(rows)


def grassmannian_extension_family(pd: ParabolicDecomposition, k: int,
                                  w: Optional[Subspace] = None) -> ActionSpec:
    """``N_{k_1}(w) + (a (-) R H_{alpha_2}) + (n (-) g_{alpha_2}) + w``."""
    m, d = pd.model, pd.datum
    if m.preset != "SO_2_NP2" or pd.j != 1:
        raise ValueError("the Grassmannian family lives on SO_2_NP2 with j=1")
    n = m.n
    if not 0 <= k <= n - 1:
        raise ValueError(f"k must lie in 0..{n - 1}")
    if w is None:
        w = grassmannian_w(pd, k)
    a2 = d.simple_roots[1]
    H2 = d.root_vectors[a2]
    host = m.span([H2]) + d.root_spaces[a2]
    if w.dim != k or not w.issubset(host) or (k >= 1 and H2 not in w):
        raise ValueError("w must be k-dimensional in R H_alpha2 + g_alpha2 and contain H_alpha2")
    h_phi = normalizer_space(m, pd.kj, w) + w
    spec = canonical_extension(pd, h_phi, f"h^L_(1,{k})")
    spec.tag = {"kind": "CanonicalExtension", "j": 1, "label": f"h^L_(1,{k})", "k": k}
    return spec


def nilpotent_construction_action(pd: ParabolicDecomposition, v: Subspace, label: str = "") -> ActionSpec:
    h = nilpotent_action_algebra(pd, v)
    return _make_spec(pd.model, label or f"h_({pd.j},v)", h,
                      {"kind": "NilpotentConstruction", "j": pd.j, "dimV": v.dim})


def classified_actions(model: LieAlgebraModel) -> List[ActionSpec]:
    """Every constructible action listed in the classification for ``model``
    (the totally geodesic ones are out of scope)."""
    d = restricted_root_decomposition(model)
    a1, a2 = d.simple_roots
    out = [foliation_algebra_a(model, d.root_vectors[a1])]
    js = (1,) if model.preset == "SL3C_SU3" else (1, 2)
    for j in js:
        out.append(foliation_algebra_n(model, j, list(d.root_spaces[d.simple_roots[j - 1]].rows[0])))
    if model.preset in ("G2C_G2", "SL3C_SU3"):
        for j in js:
            pd = parabolic_decomposition(model, j)
            out.append(canonical_extension(pd, boundary_isotropy(pd), f"h^L_({j},0)"))
            out.append(canonical_extension(pd, boundary_geodesic_algebra(pd), f"h^L_({j},1)"))
        if model.preset == "G2C_G2":
            pd = parabolic_decomposition(model, 1)
            out.append(nilpotent_construction_action(pd, pd.n1(), "h_(1,v)"))
    else:
        pd1 = parabolic_decomposition(model, 1)
        for k in range(model.n):
            out.append(grassmannian_extension_family(pd1, k))
        pd2 = parabolic_decomposition(model, 2)
        (alpha,) = pd2.phi
        out.append(canonical_extension(pd2, d.k_alpha(alpha), "h^L_2"))
        tb = so_tensor_basis(pd2)
        v = model.span([tb[(1, 1)], tb[(2, 1)]])
        out.append(nilpotent_construction_action(pd2, v, "h_(2,v)"))
    return out


def dumps_actions(specs: Sequence[ActionSpec]) -> str:
    return json.dumps({"schemaVersion": SCHEMA_VERSION,
                       "actions": [s.to_json() for s in specs]}, sort_keys=True)
