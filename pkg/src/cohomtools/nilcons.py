"""The nilpotent construction: normalizers, transitivity proxies and reports.

Given ``v`` inside the first gradation level ``n_j^1`` we set
``n_{j,v} = n_j (-) v`` and test two conditions:

(i)  the normalizer ``s = N_{m_j}(n_{j,v})`` acts transitively on the
     boundary component ``B_j``;
(ii) ``N_{k_j}(v)`` acts transitively on the unit sphere of ``v``.

Both are group-level statements.  At the algebra level we can only refute
(dimension deficits, reductive obstructions, rank-deficient sphere probes)
or confirm (an Iwasawa solvable subalgebra of ``g_j`` inside ``s``), so the
verdicts are three-valued.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence

import numpy as np

from .exact import format_number, rank
from .liealg import (SCHEMA_VERSION, InvariantError, LieAlgebraModel, Subspace,
                     centralizer_space, normalizer_space, orthogonal_projection)
from .parabolic import ParabolicDecomposition
from .rootsys import apply_weyl_word, root_label, weyl_group_elements


class Verdict(str, enum.Enum):
    TRANSITIVE = "Transitive"
    NOT_TRANSITIVE = "NotTransitive"
    UNKNOWN = "Unknown"


@dataclass
class TransitivityVerdict:
    value: Verdict
    evidence: str
    details: Dict = field(default_factory=dict)

    _ALLOWED = {
        Verdict.TRANSITIVE: {"iwasawa-containment", "sampling"},
        Verdict.NOT_TRANSITIVE: {"dimension-deficit", "reductive-obstruction",
                                 "rank-deficient-probe"},
        Verdict.UNKNOWN: {"inconclusive", "solver-failure"},
    }

    def __post_init__(self):
        if self.evidence not in self._ALLOWED[self.value]:
            raise ValueError(f"evidence {self.evidence!r} inconsistent with {self.value.value}")

    def to_json(self):
        return {"value": self.value.value, "evidence": self.evidence,
                "details": self.details}


class SubalgebraError(ValueError):
    pass


# ---------------------------------------------------------------------------
# normalizers


def normalizer(model: LieAlgebraModel, s: Subspace, v: Subspace, check: bool = True) -> Subspace:
    """``{X in s : [X, v] in v}``; ``s`` must be closed under the bracket."""
    if check and not model.is_subalgebra(s):
        raise SubalgebraError("normalizer domain is not a subalgebra")
    return normalizer_space(model, s, v)


def centralizer(model: LieAlgebraModel, s: Subspace, v: Subspace) -> Subspace:
    """``{X in s : [X, v] = 0}``."""
    return centralizer_space(model, s, v)


def _check_v(pd: ParabolicDecomposition, v: Subspace):
    if not v.issubset(pd.n1()):
        raise ValueError("v must lie in the first gradation level n_j^1")


def complement_in_n(pd: ParabolicDecomposition, v: Subspace) -> Subspace:
    """``n_{j,v} = n_j (-) v``."""
    key = ("njv", v)
    if key not in pd._cache:
        pd._cache[key] = pd.model.ominus(pd.nj, v)
    return pd._cache[key]


def _norm_mj(pd, v):
    key = ("Nm", v)
    if key not in pd._cache:
        pd._cache[key] = normalizer_space(pd.model, pd.mj, complement_in_n(pd, v))
    return pd._cache[key]


def theta_duality_check(pd: ParabolicDecomposition, v: Subspace) -> bool:
    """``N_{l_j}(n_{j,v}) == theta N_{l_j}(v)``."""
    _check_v(pd, v)
    m = pd.model
    lhs = normalizer_space(m, pd.lj, complement_in_n(pd, v))
    rhs = m.theta_space(normalizer_space(m, pd.lj, v))
    return lhs == rhs


# ---------------------------------------------------------------------------
# condition (ii)


def _probe_vectors(v: Subspace, samples: int, seed: int) -> List[List]:
    rng = np.random.default_rng(seed)
    probes = [list(r) for r in v.rows]
    k = v.dim
    while len(probes) < k + samples:
        c = [int(x) for x in rng.integers(-6, 7, size=k)]
        if not any(c):
            continue
        vec = [0] * v.ambient
        for ci, row in zip(c, v.rows):
            if ci:
                vec = [a + ci * b if b else a for a, b in zip(vec, row)]
        probes.append(vec)
    return probes


def sphere_transitivity(pd: ParabolicDecomposition, v: Subspace, samples: int = 32,
                        seed: int = 0) -> TransitivityVerdict:
    """Infinitesimal test that ``N_{k_j}(v)`` is transitive on the unit sphere of ``v``."""
    if v.dim < 2:
        raise ValueError("v must have dimension at least 2")
    m = pd.model
    n = normalizer_space(m, pd.kj, v)
    target = v.dim - 1
    probes = _probe_vectors(v, samples, seed)
    for idx, w in enumerate(probes):
        imgs = [m.bracket(x, w) for x in n.rows]
        if any(im not in v for im in imgs):
            return TransitivityVerdict(Verdict.UNKNOWN, "solver-failure",
                                       {"reason": "normalizer does not preserve v"})
        r = rank(imgs, m.dim) if imgs else 0
        if r < target:
            return TransitivityVerdict(
                Verdict.NOT_TRANSITIVE, "rank-deficient-probe",
                {"probe": idx, "rank": r, "needed": target, "normalizerDim": n.dim,
                 "witness": [format_number(x) for x in w]})
    return TransitivityVerdict(Verdict.TRANSITIVE, "sampling",
                               {"probes": len(probes), "samples": samples, "seed": seed,
                                "normalizerDim": n.dim})


# ---------------------------------------------------------------------------
# condition (i)


def noncompact_core(pd: ParabolicDecomposition) -> Subspace:
    """``b_j + [b_j, b_j]``: the sum of the noncompact simple ideals of ``g_j``."""
    key = "core"
    if key not in pd._cache:
        m = pd.model
        pd._cache[key] = pd.bj + m.bracket_space(pd.bj, pd.bj)
    return pd._cache[key]


def iwasawa_targets(pd: ParabolicDecomposition) -> List[tuple]:
    """``(word, a^j + sum_{beta in Sigma_j^+} g_{w beta})`` for ``w`` in the Weyl group of ``Sigma_j``."""
    key = "iwasawa"
    if key not in pd._cache:
        d = pd.datum
        rs = d.root_system
        gens = [i for i in range(rs.rank) if i != pd.j - 1]
        out = []
        for word in weyl_group_elements(rs, gens):
            roots = [apply_weyl_word(rs, word, b) for b in pd.sigma_j_pos]
            out.append((word, pd.a_upper + d.sum_root_spaces(roots)))
        pd._cache[key] = out
    return pd._cache[key]


def classify_boundary_action(pd: ParabolicDecomposition, s: Subspace) -> TransitivityVerdict:
    """Three-valued verdict on whether the subalgebra ``s`` of ``m_j`` acts
    transitively on ``B_j``."""
    m = pd.model
    proj = m.proj_p_space(s)
    if proj.dim < pd.bj.dim:
        # independent rank routine on the raw projected vectors
        r = rank([m.proj_p(x) for x in s.rows], m.dim) if s.rows else 0
        if r != proj.dim:
            raise InvariantError("projection rank disagrees between routines")
        return TransitivityVerdict(Verdict.NOT_TRANSITIVE, "dimension-deficit",
                                   {"projectionDim": proj.dim, "boundaryDim": pd.bj.dim})
    if m.theta_space(s) == s and not noncompact_core(pd).issubset(s):
        return TransitivityVerdict(Verdict.NOT_TRANSITIVE, "reductive-obstruction",
                                   {"dim": s.dim})
    for word, target in iwasawa_targets(pd):
        if target.issubset(s):
            return TransitivityVerdict(
                Verdict.TRANSITIVE, "iwasawa-containment",
                {"weylWord": [i + 1 for i in word], "solvableDim": target.dim})
    return TransitivityVerdict(Verdict.UNKNOWN, "inconclusive",
                               {"projectionDim": proj.dim, "dim": s.dim})


def boundary_transitivity(pd: ParabolicDecomposition, v: Subspace,
                          frame: Optional[int] = None) -> TransitivityVerdict:
    """Condition (i) for ``v``.

    With ``frame=l`` the normalizer is taken inside ``q_{j,l} + z_j``, i.e.
    ``s = theta N_{q_{j,l} + z_j}(v)``; this is the reduction used when
    ``v`` is assumed to lie in ``V_l``.
    """
    _check_v(pd, v)
    if frame is None:
        s = _norm_mj(pd, v)
    else:
        m = pd.model
        dom = pd.q_jl(frame) + pd.zj
        s = m.theta_space(normalizer_space(m, dom, v))
    return classify_boundary_action(pd, s)


# ---------------------------------------------------------------------------
# V_l membership and the g_j + z_j splitting


def vl_membership(pd: ParabolicDecomposition, l: int, v: Subspace) -> bool:
    """``N_{m_j}(v)`` contained in ``q_{j,l} + z_j``."""
    _check_v(pd, v)
    Nv = normalizer_space(pd.model, pd.mj, v)
    return Nv.issubset(pd.q_jl(l) + pd.zj)


@dataclass
class SplitResult:
    proj1: Subspace
    proj2: Subspace
    is_direct: bool


def splitting_check(pd: ParabolicDecomposition, tau: Subspace) -> SplitResult:
    """Project ``tau`` onto ``g_j`` and ``z_j`` and test ``tau = pi_1 + pi_2``."""
    m = pd.model
    if not tau.issubset(pd.mj):
        raise SubalgebraError("tau must lie in m_j")
    if not m.is_subalgebra(tau):
        raise SubalgebraError("tau is not a subalgebra")
    p2 = [orthogonal_projection(m, x, pd.zj) for x in tau.rows]
    p1 = [[a - b for a, b in zip(x, y)] for x, y in zip(tau.rows, p2)]
    P1, P2 = m.span(p1), m.span(p2)
    return SplitResult(P1, P2, (P1 + P2) == tau)


# ---------------------------------------------------------------------------
# Kahler angle


def kahler_angle(model: LieAlgebraModel, v: Subspace):
    """``cos^2`` of the Kahler angle of a real 2-plane in a ``J``-invariant module."""
    if model.complex_j is None:
        raise ValueError(f"{model.key} has no complex structure")
    if v.dim != 2:
        raise ValueError("Kahler angle needs a 2-dimensional subspace")
    v1, v2 = v.rows
    a = model.ip(model.apply_j(v1), v2)
    den = model.ip(v1, v1) * model.ip(v2, v2) - model.ip(v1, v2) ** 2
    return a * a / den


def kahler_plane(pd: ParabolicDecomposition, cos2) -> Subspace:
    """The plane ``span{(1, 0), (i cos phi, i sin phi)}`` in ``g_{alpha_1} + g_{alpha_1+alpha_2}``
    (orthonormal complex coordinates), for G2C_G2 with ``j = 1``."""
    from .exact import sqrt_rational
    m, d = pd.model, pd.datum
    if m.complex_j is None or pd.j != 1:
        raise ValueError("Kahler planes are defined on n_1^1 of a complex preset")
    cos2 = Fraction(cos2)
    if not 0 <= cos2 <= 1:
        raise ValueError("cos^2 must lie in [0, 1]")
    a1, a2 = d.simple_roots
    e1 = list(d.root_spaces[a1].rows[0])
    e2 = list(d.root_spaces[(a1[0] + a2[0], a1[1] + a2[1])].rows[0])
    n1, n2 = Fraction(m.ip(e1, e1)), Fraction(m.ip(e2, e2))
    Je1, Je2 = m.apply_j(e1), m.apply_j(e2)
    if cos2 == 0:
        second = Je2
    else:
        # i (e1 + tan(phi) |e1|/|e2| e2), rescaled by 1/cos(phi)
        t = sqrt_rational((1 - cos2) / cos2 * n1 / n2)
        second = [x + t * y if y else x for x, y in zip(Je1, Je2)]
    return m.span([e1, second])


# ---------------------------------------------------------------------------
# full report


@dataclass
class NilConsReport:
    preset: str
    j: int
    v: Subspace
    njv: Subspace
    normalizer_mj: Subspace
    normalizer_kj: Subspace
    condition_i: TransitivityVerdict
    condition_ii: TransitivityVerdict
    vl_membership: Dict[int, bool]
    singular_orbit_dim: int
    theta_duality: bool
    hint: Optional[str]
    samples: int
    seed: int
    frame: Optional[int] = None

    @property
    def passes(self) -> bool:
        return (self.condition_i.value == Verdict.TRANSITIVE
                and self.condition_ii.value == Verdict.TRANSITIVE)

    @property
    def exit_code(self) -> int:
        vals = (self.condition_i.value, self.condition_ii.value)
        if Verdict.NOT_TRANSITIVE in vals:
            return 3
        if Verdict.UNKNOWN in vals:
            return 4
        return 0

    def to_json(self) -> dict:
        return {
            "schemaVersion": SCHEMA_VERSION,
            "preset": self.preset,
            "j": self.j,
            "frame": self.frame,
            "samples": self.samples,
            "seed": self.seed,
            "dims": {"v": self.v.dim, "njv": self.njv.dim,
                     "normalizerMj": self.normalizer_mj.dim,
                     "normalizerKj": self.normalizer_kj.dim},
            "v": self.v.to_json(),
            "normalizerMj": self.normalizer_mj.to_json(),
            "normalizerKj": self.normalizer_kj.to_json(),
            "conditionI": self.condition_i.to_json(),
            "conditionII": self.condition_ii.to_json(),
            "vlMembership": {str(k): b for k, b in sorted(self.vl_membership.items())},
            "singularOrbitDim": self.singular_orbit_dim,
            "thetaDuality": self.theta_duality,
            "hint": self.hint,
            "passes": self.passes,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


def nilpotent_action_algebra(pd: ParabolicDecomposition, v: Subspace) -> Subspace:
    """``h_{j,v} = N_{l_j}(n_{j,v}) + n_{j,v}``."""
    njv = complement_in_n(pd, v)
    return normalizer_space(pd.model, pd.lj, njv) + njv


def _is_complex(m: LieAlgebraModel, v: Subspace) -> bool:
    return m.complex_j is not None and m.j_space(v) == v


def equivalence_hint(pd: ParabolicDecomposition, v: Subspace) -> Optional[str]:
    """Informational label for subspaces matching a known action; never used in verdicts."""
    m, d = pd.model, pd.datum
    if v == pd.n1():
        if m.preset == "G2C_G2" and pd.j == 1:
            return "new action H_{1,v} with 10-dimensional singular orbit"
        if m.preset == "SL3C_SU3":
            return "orbit-equivalent to the totally geodesic SL2(C)xR action"
    if m.preset == "G2C_G2" and pd.j == 1 and v.dim == 2 and _is_complex(m, v):
        return "orbit-equivalent to H^Lambda_{2,1}"
    if m.preset == "SL3C_SU3" and v.dim == 2 and _is_complex(m, v):
        return "orbit-equivalent to H^Lambda_{1,1} (after the Dynkin symmetry)"
    if m.preset == "G2C_G2" and pd.j == 2:
        a1, a2 = d.simple_roots
        if v in (d.root_spaces[(3, 1)], d.root_spaces[a2]):
            return "orbit-equivalent to H^Lambda_{1,1}"
    if m.preset == "SO_2_NP2" and pd.j == 2 and v.dim == 2:
        from .parabolic import so_tensor_basis
        tb = so_tensor_basis(pd)
        if v == m.span([tb[(1, 1)], tb[(2, 1)]]):
            return "orbit-equivalent to the totally geodesic SO^0_{2,n+1} action"
    return None


def nilpotent_construction_check(pd: ParabolicDecomposition, v: Subspace, samples: int = 32,
                                 seed: int = 0, frame: Optional[int] = None) -> NilConsReport:
    _check_v(pd, v)
    if v.dim < 2:
        raise ValueError("v must have dimension at least 2")
    m = pd.model
    njv = complement_in_n(pd, v)
    if not m.is_subalgebra(njv):
        raise InvariantError("n_j (-) v is not a subalgebra")
    nm = _norm_mj(pd, v)
    nk = normalizer_space(m, pd.kj, v)
    if nm & pd.kj != nk:
        raise InvariantError("N_{k_j}(v) != N_{m_j}(n_{j,v}) cap k_j")
    c1 = boundary_transitivity(pd, v, frame=frame)
    c2 = sphere_transitivity(pd, v, samples=samples, seed=seed)
    vl = {l: vl_membership(pd, l, v) for l in pd.other_indices()}
    h = nilpotent_action_algebra(pd, v)
    return NilConsReport(
        preset=m.key, j=pd.j, v=v, njv=njv, normalizer_mj=nm, normalizer_kj=nk,
        condition_i=c1, condition_ii=c2, vl_membership=vl,
        singular_orbit_dim=m.proj_p_space(h).dim,
        theta_duality=theta_duality_check(pd, v), hint=equivalence_hint(pd, v),
        samples=samples, seed=seed, frame=frame)


# ---------------------------------------------------------------------------
# subspace mini-language


class SubspaceSpecError(ValueError):
    pass


def parse_subspace(pd: ParabolicDecomposition, text: str) -> Subspace:
    """Resolve ``full``, ``root:<label>``, ``kahler:<cos^2>``, ``rows:[[...]]`` or
    ``tensor:e1f1,e2f1`` to a subspace of ``n_j^1``."""
    from .exact import parse_rational
    from .rootsys import parse_root_label
    m, d = pd.model, pd.datum
    text = text.strip()
    kind, _, arg = text.partition(":")
    kind = kind.strip().lower()
    try:
        if kind == "full" and not arg:
            v = pd.n1()
        elif kind == "root":
            root = parse_root_label(arg.strip(), d.root_system.rank)
            if root not in d.root_spaces:
                raise SubspaceSpecError(f"{arg!r} is not a root")
            v = d.root_spaces[root]
        elif kind == "kahler":
            v = kahler_plane(pd, parse_rational(arg))
        elif kind == "rows":
            rows = json.loads(arg)
            if not isinstance(rows, list) or not all(isinstance(r, list) for r in rows):
                raise SubspaceSpecError("rows: expects a JSON list of lists")
            vecs = [[parse_rational(x) for x in r] for r in rows]
            if any(len(r) != m.dim for r in vecs):
                raise SubspaceSpecError(f"rows must have length {m.dim}")
            v = m.span(vecs)
        elif kind == "tensor":
            from .parabolic import so_tensor_basis
            tb = so_tensor_basis(pd)
            vecs = []
            for tok in arg.split(","):
                tok = tok.strip().lower()
                if len(tok) < 4 or tok[0] != "e" or "f" not in tok:
                    raise SubspaceSpecError(f"bad tensor token {tok!r}")
                a, s = tok[1:].split("f")
                key = (int(a), int(s))
                if key not in tb:
                    raise SubspaceSpecError(f"no basis vector {tok!r}")
                vecs.append(tb[key])
            v = m.span(vecs)
        else:
            raise SubspaceSpecError(f"unknown subspace spec {text!r}")
    except SubspaceSpecError:
        raise
    except (ValueError, ZeroDivisionError, json.JSONDecodeError) as exc:
        raise SubspaceSpecError(str(exc)) from exc
    if not v.issubset(pd.n1()):
        raise SubspaceSpecError("subspace does not lie in n_j^1")
    return v
