import json
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cohomtools.exact import rank
from cohomtools.liealg import (InvariantError, Subspace, build_model, check_root_space_closure,
                               commutator_oracle_mismatches, model_from_json, normalize_preset,
                               restricted_eigenvalues, coroot, restricted_root_decomposition,
                               sl3_realization, so_realization, span, sum_spaces)
from cohomtools.rootsys import build_root_system

SO_NS = [1, 2, 3, 4, 5, 6]


def models():
    return [build_model("G2C_G2"), build_model("SL3C_SU3")] + [build_model("SO_2_NP2", n) for n in SO_NS]


# -- Subspace ---------------------------------------------------------------

vec = st.lists(st.integers(-3, 3), min_size=6, max_size=6)
spaces = st.lists(vec, min_size=0, max_size=4).map(lambda rows: span(rows, 6))


@given(spaces, spaces)
def test_dimension_formula(A, B):
    assert (A + B).dim + (A & B).dim == A.dim + B.dim


@given(spaces, spaces)
def test_sum_and_intersection_order(A, B):
    assert A <= A + B and B <= A + B
    assert (A & B) <= A and (A & B) <= B
    assert (A & B) == (B & A)


@given(st.lists(vec, min_size=1, max_size=5))
def test_dim_matches_float_rank(rows):
    assert span(rows, 6).dim == np.linalg.matrix_rank(np.array(rows, dtype=float))


@given(spaces, vec)
def test_membership_and_coordinates(A, v):
    inside = v in A
    assert inside == all(x == 0 for x in A.residual(v))
    if inside:
        c = A.coordinates(v)
        assert [sum(ci * r[k] for ci, r in zip(c, A.rows)) for k in range(6)] == v


def test_subspace_ambient_mismatch():
    with pytest.raises(ValueError):
        span([[1, 0]], 2) + span([[1, 0, 0]], 3)


def test_zero_and_full():
    assert Subspace.zero(4).dim == 0 and Subspace.full(4).dim == 4
    assert sum_spaces([], 4).dim == 0


# -- presets ------------------------------------------------------------------


@pytest.mark.parametrize("name,canon", [("g2c-g2", "G2C_G2"), ("SL3C_SU3", "SL3C_SU3"),
                                        ("so-2-np2", "SO_2_NP2")])
def test_normalize_preset(name, canon):
    assert normalize_preset(name) == canon


def test_bad_presets():
    with pytest.raises(ValueError):
        build_model("E8")
    with pytest.raises(ValueError):
        build_model("SO_2_NP2", 0)


@pytest.mark.parametrize("model", models(), ids=lambda m: m.key)
def test_structure_checks(model):
    info = model.check_structure()
    assert info["dim_k"] + info["dim_p"] == model.dim


def test_dimensions():
    assert build_model("G2C_G2").dim == 28
    assert build_model("SL3C_SU3").dim == 16
    for n in SO_NS:
        m = build_model("SO_2_NP2", n)
        assert m.dim == (n + 4) * (n + 3) // 2
        assert m.p_space.dim == 2 * (n + 2)


@pytest.mark.parametrize("n", [1, 3, 6])
def test_so_killing_matches_trace_form(n):
    # Killing form of so(p, q) is (p + q - 2) tr(XY)
    m = build_model("SO_2_NP2", n)
    mats = so_realization(m)
    N = n + 4
    want = np.array([[(N - 2) * int(np.trace(X @ Y)) for Y in mats] for X in mats])
    assert np.array_equal(m.killing, want)


def test_sl3_killing_matches_trace_form():
    # realification: B_R = 2 Re B_C and B_C(X, Y) = 6 tr(XY) on sl_3(C)
    m = build_model("SL3C_SU3")
    mats = sl3_realization(m)
    want = np.array([[12 * int(np.trace(X[0] @ Y[0] - X[1] @ Y[1])) for Y in mats] for X in mats])
    assert np.array_equal(m.killing, want)


@pytest.mark.parametrize("preset,kind", [("G2C_G2", "G2"), ("SL3C_SU3", "A2")])
def test_killing_on_cartan_from_roots(preset, kind):
    # B(h_i, h_j) = sum over roots of gamma(h_i) gamma(h_j), doubled for the realification
    m = build_model(preset)
    rs = build_root_system(kind)
    r = rs.rank
    ev = lambda g, i: sum(g[k] * rs.cartan[k][i] for k in range(r))  # noqa: E731
    for i in range(r):
        for j in range(r):
            assert m.killing[i, j] == 2 * sum(ev(g, i) * ev(g, j) for g in rs.roots)


@pytest.mark.parametrize("model", [build_model("SL3C_SU3")] + [build_model("SO_2_NP2", n) for n in (1, 2, 3)],
                         ids=lambda m: m.key)
def test_commutator_oracle(model):
    assert commutator_oracle_mismatches(model) == []


def test_corrupted_tensor_is_caught():
    m = build_model("SO_2_NP2", 1)
    doc = m.to_json()
    a, b, k, v = doc["bracket"][3]
    doc["bracket"][3] = [a, b, k, str(int(v) * 2)]
    bad = model_from_json(doc)
    with pytest.raises(InvariantError):
        bad.check_structure()


@pytest.mark.parametrize("model", [build_model("G2C_G2"), build_model("SO_2_NP2", 2)], ids=lambda m: m.key)
def test_json_round_trip(model):
    text = model.dumps()
    back = model_from_json(text)
    assert np.array_equal(back.structure, model.structure)
    assert np.array_equal(back.theta, model.theta)
    assert back.dumps() == text
    assert json.loads(text)["schemaVersion"] == 1


def test_json_rejects_schema():
    doc = build_model("SL3C_SU3").to_json()
    doc["schemaVersion"] = 2
    with pytest.raises(ValueError):
        model_from_json(doc)


# -- restricted roots ---------------------------------------------------------


@pytest.mark.parametrize("model", models(), ids=lambda m: m.key)
def test_root_spaces_are_eigenspaces(model):
    d = restricted_root_decomposition(model)
    for alpha in d.roots:
        for X in d.root_spaces[alpha].rows:
            for H in model.a_space.rows:
                c = d.evaluate(alpha, H)
                assert model.bracket(H, X) == [c * x for x in X]
        assert model.theta_space(d.root_spaces[alpha]) == d.root_spaces[tuple(-x for x in alpha)]
    total = d.g0.dim + sum(d.multiplicities.values())
    assert total == model.dim
    check_root_space_closure(d)


@pytest.mark.parametrize("n", SO_NS)
def test_so_multiplicities(n):
    d = restricted_root_decomposition(build_model("SO_2_NP2", n))
    assert d.multiplicities[(1, 0)] == 1 and d.multiplicities[(1, 2)] == 1
    assert d.multiplicities[(0, 1)] == n and d.multiplicities[(1, 1)] == n
    assert d.k0.dim == n * (n - 1) // 2


@pytest.mark.parametrize("model", models()[:4], ids=lambda m: m.key)
def test_root_spaces_killing_orthogonal(model):
    d = restricted_root_decomposition(model)
    for a in d.positive_roots:
        for b in d.positive_roots:
            for X in d.root_spaces[a].rows:
                for Y in d.root_spaces[b].rows:
                    assert model.killing_value(X, Y) == 0


def test_g2_eigenvalues_on_level_one():
    m = build_model("G2C_G2")
    d = restricted_root_decomposition(m)
    from cohomtools.parabolic import parabolic_decomposition
    pd = parabolic_decomposition(m, 2)
    ev = restricted_eigenvalues(m, coroot(m, d, d.simple_roots[0]), pd.n1())
    assert ev == {Fraction(-3): 2, Fraction(-1): 2, Fraction(1): 2, Fraction(3): 2}


@pytest.mark.parametrize("preset", ["G2C_G2", "SL3C_SU3"])
def test_complex_structure(preset):
    m = build_model(preset)
    J = m.complex_j
    assert np.array_equal(J @ J, -np.eye(m.dim, dtype=np.int64))
    d = restricted_root_decomposition(m)
    for a in d.roots:
        assert m.j_space(d.root_spaces[a]) == d.root_spaces[a]


@settings(max_examples=40)
@given(st.lists(st.integers(-2, 2), min_size=16, max_size=16),
       st.lists(st.integers(-2, 2), min_size=16, max_size=16))
def test_bracket_is_bilinear_antisymmetric(x, y):
    m = build_model("SL3C_SU3")
    assert m.bracket(x, y) == [-v for v in m.bracket(y, x)]
    z = [a + b for a, b in zip(x, y)]
    assert m.bracket(z, y) == m.bracket(x, y)
    assert rank([m.bracket(x, x)], 16) == 0
