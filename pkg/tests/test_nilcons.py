import json
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cohomtools.liealg import build_model, so_realization, span
from cohomtools.nilcons import (SubalgebraError, SubspaceSpecError, TransitivityVerdict, Verdict,
                                boundary_transitivity, complement_in_n, kahler_angle, kahler_plane,
                                nilpotent_construction_check, normalizer, parse_subspace,
                                sphere_transitivity, splitting_check, theta_duality_check,
                                vl_membership)
from cohomtools.orbits import exp_ad, transform_space
from cohomtools.parabolic import parabolic_decomposition, so_tensor_basis, so_xi_vector

T, N, U = Verdict.TRANSITIVE, Verdict.NOT_TRANSITIVE, Verdict.UNKNOWN


def pd(preset, j, n=None):
    return parabolic_decomposition(build_model(preset, n), j)


# -- verdicts --------------------------------------------------------------------


@pytest.mark.parametrize("spec,frame,c1,c2,orbit", [
    ("full", None, T, T, 10),
    ("root:a1", None, T, T, 12),
    ("root:a1+a2", None, T, T, 12),
    ("kahler:1", None, T, T, 12),
])
def test_g2_j1_cases(spec, frame, c1, c2, orbit):
    p = pd("G2C_G2", 1)
    r = nilpotent_construction_check(p, parse_subspace(p, spec), frame=frame)
    assert (r.condition_i.value, r.condition_ii.value, r.singular_orbit_dim) == (c1, c2, orbit)


@pytest.mark.parametrize("cos2", ["3/4", "1/2", "1/4", "0"])
def test_g2_kahler_family_fails(cos2):
    p = pd("G2C_G2", 1)
    v = parse_subspace(p, f"kahler:{cos2}")
    m = p.model
    s = normalizer(m, p.gj, complement_in_n(p, v))
    assert s.dim == 3 and m.proj_p_space(s).dim == 2
    verdict = boundary_transitivity(p, v)
    assert verdict.value == N and verdict.evidence == "dimension-deficit"
    assert nilpotent_construction_check(p, v).exit_code == 3


@settings(max_examples=30)
@given(st.fractions(min_value=0, max_value=1, max_denominator=12))
def test_kahler_angle_round_trip(c):
    p = pd("G2C_G2", 1)
    assert kahler_angle(p.model, kahler_plane(p, c)) == c


def test_kahler_errors():
    with pytest.raises(ValueError):
        kahler_plane(pd("G2C_G2", 1), Fraction(3, 2))
    with pytest.raises(ValueError):
        kahler_plane(pd("G2C_G2", 2), Fraction(1, 2))
    with pytest.raises(ValueError):
        kahler_angle(build_model("SO_2_NP2", 1), build_model("SO_2_NP2", 1).zero_space())


@pytest.mark.parametrize("label,frame,passes", [
    ("3a1+a2", None, True), ("3a1+a2", 1, True),
    ("a1+a2", None, False), ("2a1+a2", None, False),
    ("a2", None, True), ("a2", 1, False),
])
def test_g2_j2_root_spaces(label, frame, passes):
    p = pd("G2C_G2", 2)
    r = nilpotent_construction_check(p, parse_subspace(p, f"root:{label}"), frame=frame)
    assert r.passes == passes
    assert U not in (r.condition_i.value, r.condition_ii.value)


def test_g2_j2_full_fails_condition_ii():
    p = pd("G2C_G2", 2)
    r = nilpotent_construction_check(p, p.n1())
    assert r.condition_ii.value == N


@pytest.mark.parametrize("n", [1, 2, 3, 6])
def test_so_tensor_plane_passes(n):
    p = pd("SO_2_NP2", 2, n)
    r = nilpotent_construction_check(p, parse_subspace(p, "tensor:e1f1,e2f1"))
    assert r.passes
    assert p.model.p_space.dim - r.singular_orbit_dim == 2


@pytest.mark.parametrize("n", [1, 3])
def test_so_xi_perp_fails(n):
    p = pd("SO_2_NP2", 1, n)
    m = p.model
    perp = m.ominus(p.n1(), m.span([so_xi_vector(p)]))
    rng = np.random.default_rng(7)
    for _ in range(3):
        c = rng.integers(-3, 4, size=(2, perp.dim))
        v = m.span([[sum(int(ci) * r[k] for ci, r in zip(cc, perp.rows)) for k in range(m.dim)] for cc in c])
        if v.dim < 2:
            continue
        assert boundary_transitivity(p, v).value == N


def test_sphere_transitivity_is_seed_stable():
    p = pd("G2C_G2", 1)
    for seed in (0, 1, 12345):
        assert sphere_transitivity(p, p.n1(), samples=8, seed=seed).value == T


def test_verdict_evidence_validation():
    TransitivityVerdict(T, "sampling")
    with pytest.raises(ValueError):
        TransitivityVerdict(T, "dimension-deficit")
    with pytest.raises(ValueError):
        TransitivityVerdict(U, "iwasawa-containment")


def test_vl_membership():
    p2 = pd("G2C_G2", 2)
    assert vl_membership(p2, 1, parse_subspace(p2, "root:3a1+a2"))
    for preset, n in (("G2C_G2", None), ("SL3C_SU3", None), ("SO_2_NP2", 3)):
        for j in (1, 2):
            p = pd(preset, j, n)
            for l in p.other_indices():
                assert not vl_membership(p, l, p.n1())


def test_splitting():
    p = pd("G2C_G2", 1)
    assert splitting_check(p, p.mj).is_direct
    with pytest.raises(SubalgebraError):
        splitting_check(p, p.nj)


def test_report_json_is_deterministic():
    p = pd("G2C_G2", 2)
    v = parse_subspace(p, "root:3a1+a2")
    a = nilpotent_construction_check(p, v, seed=5).dumps()
    b = nilpotent_construction_check(p, v, seed=5).dumps()
    assert a == b
    doc = json.loads(a)
    assert doc["schemaVersion"] == 1 and doc["hint"] == "orbit-equivalent to H^Lambda_{1,1}"
    assert doc["vlMembership"] == {"1": True}


# -- subspace mini-language ---------------------------------------------------------


@pytest.mark.parametrize("text", ["bogus", "root:5a1", "root:a1", "kahler:x", "rows:[1,2]",
                                  "rows:[[1]]", "tensor:e1f1", "full:1"])
def test_parse_errors(text):
    with pytest.raises(SubspaceSpecError):
        parse_subspace(pd("G2C_G2", 2), text)


def test_parse_rows():
    p = pd("G2C_G2", 1)
    rows = [[str(x) for x in r] for r in p.n1().rows[:2]]
    assert parse_subspace(p, "rows:" + json.dumps(rows)).dim == 2


def test_parse_tensor_bad_token():
    with pytest.raises(SubspaceSpecError):
        parse_subspace(pd("SO_2_NP2", 2, 2), "tensor:e1f9")


# -- properties ---------------------------------------------------------------------

CASES = [("G2C_G2", 1, None), ("G2C_G2", 2, None), ("SL3C_SU3", 1, None), ("SO_2_NP2", 1, 3),
         ("SO_2_NP2", 2, 3)]


@pytest.mark.parametrize("preset,j,n", CASES)
@settings(max_examples=100)
@given(data=st.data())
def test_random_v_gives_subalgebra(preset, j, n, data):
    p = pd(preset, j, n)
    m = p.model
    basis = p.n1().rows
    k = data.draw(st.integers(1, len(basis)))
    coeffs = data.draw(st.lists(st.lists(st.integers(-3, 3), min_size=len(basis), max_size=len(basis)),
                                min_size=k, max_size=k))
    v = m.span([[sum(c * r[i] for c, r in zip(cs, basis)) for i in range(m.dim)] for cs in coeffs])
    njv = complement_in_n(p, v)
    assert m.is_subalgebra(njv)
    assert njv.dim + v.dim == p.nj.dim
    assert theta_duality_check(p, v)
    nk = normalizer(m, p.kj, v)
    assert nk == normalizer(m, p.mj, njv) & p.kj


@settings(max_examples=15)
@given(st.lists(st.integers(-2, 2), min_size=4, max_size=4), st.integers(0, 3))
def test_normalizer_is_exp_ad_equivariant(cx, which):
    # N_g(exp(ad X) v) == exp(ad X) N_g(v) for nilpotent X
    p = pd("SL3C_SU3", 1)
    m = p.model
    nb = p.n1().rows
    X = [sum(c * r[i] for c, r in zip(cx, nb)) for i in range(m.dim)]
    v = m.span([nb[which], m.apply_j(nb[which])])
    g = m.full_space()
    lhs = normalizer(m, g, m.span(transform_space(m, v, X)))
    rhs = m.span(transform_space(m, normalizer(m, g, v), X))
    assert lhs == rhs


def _so_rotation(m, s, t):
    """Ad of the rotation by pi/2 in the spacelike plane (s, t) of the extra block."""
    p = m.extra["p"]
    g = np.eye(p, dtype=np.int64)
    g[[s, t], :] = 0
    g[s, t], g[t, s] = -1, 1
    mats = so_realization(m)
    flat = span([M.ravel().tolist() for M in mats], p * p)
    cols = [flat.coordinates((g @ M @ g.T).ravel().tolist()) for M in mats]
    A = [[cols[j][i] for j in range(m.dim)] for i in range(m.dim)]
    return lambda x: [sum(a * y for a, y in zip(row, x)) for row in A]


@pytest.mark.parametrize("n", [2, 3])
@settings(max_examples=15)
@given(data=st.data())
def test_normalizer_is_rotation_equivariant(n, data):
    p = pd("SO_2_NP2", 2, n)
    m = p.model
    s, t = data.draw(st.sampled_from([(4 + a, 4 + b) for a in range(n) for b in range(n) if a < b]))
    ad_g = _so_rotation(m, s, t)
    tb = so_tensor_basis(p)
    keys = data.draw(st.lists(st.sampled_from(sorted(tb)), min_size=1, max_size=3, unique=True))
    v = m.span([tb[k] for k in keys])
    gv = m.span([ad_g(x) for x in v.rows])
    assert gv.issubset(p.n1())
    lhs = normalizer(m, p.kj, gv)
    rhs = m.span([ad_g(x) for x in normalizer(m, p.kj, v).rows])
    assert lhs == rhs


def test_exp_ad_is_automorphism():
    m = build_model("SL3C_SU3")
    p = parabolic_decomposition(m, 1)
    X = [sum(r[i] for r in p.nj.rows) for i in range(m.dim)]
    E, D = exp_ad(m, X)
    f = lambda y: [Fraction(int(z), D) for z in E.dot(np.array(y, dtype=object))]  # noqa: E731
    for a in range(0, m.dim, 3):
        for b in range(1, m.dim, 4):
            x, y = m.basis_vector(a), m.basis_vector(b)
            assert f(m.bracket(x, y)) == m.bracket(f(x), f(y))
