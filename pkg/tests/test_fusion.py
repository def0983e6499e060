import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hecketrace.fusion import (
    FusionError,
    check_fusion_ring,
    expand_partitions,
    fusion_basis,
    fusion_matrix,
    jacobi_trudi_polynomial,
    n_expand,
    partition_matrix,
)
from hecketrace.graphs import ade_graph, basic_graph
from hecketrace.weights import partition_to_weight
from oracles import su2_fusion, verlinde_fusion


def test_jacobi_trudi_small_polynomials():
    # N_(2) = G_1^2 - G_2 at k = 3; exponents over (G_1, G_2)
    assert jacobi_trudi_polynomial((2,), 3) == {(2, 0): 1, (0, 1): -1}
    assert jacobi_trudi_polynomial((1, 1), 3) == {(0, 1): 1}
    assert jacobi_trudi_polynomial((), 4) == {(0, 0, 0): 1}
    # a column of height k is the identity
    assert jacobi_trudi_polynomial((1, 1, 1), 3) == {(0, 0): 1}
    assert jacobi_trudi_polynomial((1, 1, 1, 1), 3) == {}


@pytest.mark.parametrize("k,n", [(2, 5), (2, 8), (3, 6), (3, 8), (4, 7), (4, 9)])
def test_fusion_matrices_match_verlinde(k, n):
    g = basic_graph(k, n)
    ref = verlinde_fusion(k, n, list(g.vertices))
    N = fusion_basis(g).stack()
    np.testing.assert_allclose(N, ref.real, atol=1e-9)


def test_su2_rules():
    n = 7
    g = basic_graph(2, n)
    for a in range(1, n):
        for b in range(1, n):
            got = fusion_matrix(g, (a,))[b - 1]
            want = np.zeros(n - 1, dtype=int)
            for c in su2_fusion(n, a, b):
                want[c - 1] = 1
            assert got.tolist() == want.tolist()


def test_fundamental_fusion_matrices_are_fused_adjacencies():
    g = basic_graph(4, 8)
    for ell in range(1, 4):
        lam = partition_to_weight(g.rl, (1,) * ell)
        assert (fusion_matrix(g, lam) == g.G[ell]).all()


def test_out_of_alcove_partitions_vanish_or_reflect():
    g = basic_graph(2, 5)
    # level 3: (4) sits on the wall, (5) reflects to -(3)
    assert not partition_matrix(g, (4,)).any()
    assert (partition_matrix(g, (5,)) == -partition_matrix(g, (3,))).all()


@pytest.mark.parametrize("k", [2, 3, 4])
def test_fusion_ring_checks_pass(k):
    for n in (k + 2, k + 4):
        rep = check_fusion_ring(basic_graph(k, n))
        assert rep.passed, rep.failures


@pytest.mark.parametrize("name", ["A4", "D4", "D5", "E6", "E7"])
def test_ade_fusion_ring(name):
    rep = check_fusion_ring(ade_graph(name))
    assert rep.passed, rep.failures


def test_ade_v_matrices():
    g = ade_graph("D4")
    fb = fusion_basis(g)
    assert fb.labels == [1, 2, 3, 4, 5]
    assert (fb.matrix(1) == np.eye(4)).all()
    assert (fb.matrix(2) == g.G1).all()
    # V_{n-1} on D_4 is the diagram automorphism fixing the centre
    assert (fb.matrix(5) @ fb.matrix(5) == np.eye(4)).all()
    with pytest.raises(FusionError):
        fb.matrix(6)


def test_bad_label_raises():
    with pytest.raises(FusionError):
        fusion_matrix(basic_graph(3, 6), (5, 1))


@settings(max_examples=25, deadline=None)
@given(st.integers(2, 4).flatmap(lambda k: st.tuples(st.just(k), st.integers(k + 2, k + 5))), st.data())
def test_expansion_round_trip(kn, data):
    g = basic_graph(*kn)
    z = np.array(data.draw(st.lists(st.integers(-3, 3), min_size=g.nv, max_size=g.nv)), dtype=float)
    M = np.tensordot(z, fusion_basis(g).stack(), axes=1)
    exp = n_expand(g, M)
    np.testing.assert_allclose(exp.coeffs, z, atol=1e-12)
    assert exp.residual < 1e-12


def test_expand_partitions_against_matrices():
    g = basic_graph(3, 6)
    combo = {(2, 1): 1.0, (1, 1, 1): 2.5, (4,): -1.0}
    z = expand_partitions(g, combo)
    M = sum(c * partition_matrix(g, p) for p, c in combo.items())
    np.testing.assert_allclose(np.tensordot(z, fusion_basis(g).stack(), axes=1), M, atol=1e-12)


def test_ade_expansion_needs_reference():
    g = ade_graph("D4")
    with pytest.raises(ValueError):
        n_expand(g, g.G1)
    ref = basic_graph(2, 6).G1
    exp = n_expand(g, g.G1, reference=ref)
    assert exp.residual == 0 and exp.as_dict() == {2: 1}
