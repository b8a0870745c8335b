import pytest

from cohomtools.liealg import build_model, is_direct_sum, restricted_root_decomposition
from cohomtools.parabolic import (boundary_component_data, gradation_check,
                                  parabolic_decomposition, parabolic_subalgebra,
                                  so_tensor_basis, so_xi_vector, verify_decomposition)


def pd(preset, j, n=None):
    return parabolic_decomposition(build_model(preset, n), j)


@pytest.mark.parametrize("j,grad,b", [(1, {1: 4, 2: 2, 3: 4}, 3), (2, {1: 8, 2: 2}, 3)])
def test_g2_dimensions(j, grad, b):
    p = pd("G2C_G2", j)
    assert {nu: s.dim for nu, s in p.gradation.items()} == grad
    assert p.bj.dim == b
    assert p.zj.dim == 1
    assert p.gj.dim == 6  # sl_2(C) as a real algebra


@pytest.mark.parametrize("n", [1, 2, 3, 6])
def test_so_dimensions(n):
    p1, p2 = pd("SO_2_NP2", 1, n), pd("SO_2_NP2", 2, n)
    assert p1.nj.dim == n + 2 and list(p1.gradation) == [1]
    assert p1.bj.dim == n + 1
    assert {nu: s.dim for nu, s in p2.gradation.items()} == {1: 2 * n, 2: 1}
    assert p2.bj.dim == 2
    # m_2 = sl_2(R) + so(n)
    assert p2.mj.dim == 3 + n * (n - 1) // 2


def test_sl3_dimensions():
    for j in (1, 2):
        p = pd("SL3C_SU3", j)
        assert {nu: s.dim for nu, s in p.gradation.items()} == {1: 4}
        assert p.bj.dim == 3


@pytest.mark.parametrize("preset,n", [("G2C_G2", None), ("SL3C_SU3", None), ("SO_2_NP2", 1), ("SO_2_NP2", 4)])
def test_invariants_and_gradation(preset, n):
    m = build_model(preset, n)
    for j in (1, 2):
        p = parabolic_decomposition(m, j)
        verify_decomposition(p)
        rep = gradation_check(p)
        assert rep.ok and rep.offending is None
        assert [nu for nu, _ in rep.verified] == sorted(p.gradation)
        assert is_direct_sum([p.lj, p.nj])
        assert p.qj.dim == p.lj.dim + p.nj.dim


@pytest.mark.parametrize("j", [0, 3, "1"])
def test_bad_index(j):
    with pytest.raises(ValueError):
        parabolic_decomposition(build_model("G2C_G2"), j)


def test_minimal_parabolic_in_rank_two():
    m = build_model("G2C_G2")
    d = restricted_root_decomposition(m)
    P = parabolic_subalgebra(d, [])
    assert P == d.g0 + d.n_space()
    assert parabolic_subalgebra(d, [1, 2]).dim == m.dim


def test_q_jl():
    p = pd("G2C_G2", 2)
    q = p.q_jl(1)
    assert q.dim == 4 and q.issubset(p.gj)
    assert pd("G2C_G2", 2).model.is_subalgebra(q)
    with pytest.raises(ValueError):
        p.q_jl(2)


def test_boundary_component():
    p = pd("SO_2_NP2", 1, 3)
    (gk, b), dim = boundary_component_data(p)
    assert dim == 4 and gk + b == p.gj


@pytest.mark.parametrize("n", [1, 2, 5])
def test_so_tensor_basis(n):
    p = pd("SO_2_NP2", 2, n)
    tb = so_tensor_basis(p)
    m = p.model
    assert len(tb) == 2 * n
    assert m.span(list(tb.values())) == p.n1()
    with pytest.raises(ValueError):
        so_tensor_basis(pd("SO_2_NP2", 1, n))


@pytest.mark.parametrize("n", [1, 3])
def test_so_xi_is_fixed_by_k1(n):
    p = pd("SO_2_NP2", 1, n)
    xi = so_xi_vector(p)
    m = p.model
    assert xi in p.n1()
    assert all(not any(m.bracket(k, xi)) for k in p.kj.rows)


def test_summary_keys():
    s = pd("G2C_G2", 1).summary()
    assert s["gradation"] == {"1": 4, "2": 2, "3": 4}
    assert s["levelRoots"] == {"1": ["a1", "a1+a2"], "2": ["2a1+a2"], "3": ["3a1+a2", "3a1+2a2"]}
