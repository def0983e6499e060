import itertools
import math

import numpy as np
import pytest
import scipy.sparse as sp
from hypothesis import given, settings, strategies as st

from hecketrace.graphs import ade_graph, basic_graph
from hecketrace.hecke import (
    DiamondError,
    PathSpaceTooLarge,
    build_generator,
    build_path_space,
    check_hecke_relations,
    check_quotient,
    diamond,
    diamond_table,
    generators,
    hecke_word,
    path_count,
    quotient_operator,
    quotient_terms,
    reduced_word,
)
from hecketrace.weights import shift
from oracles import dense_generator, inversions, permutation_from_word


def idx(g, w):
    return g.index[tuple(w)]


def test_diamond_diagonal_formula():
    g = basic_graph(3, 7)
    a = idx(g, (2, 2))
    b = idx(g, shift(g.rl, (2, 2), 1))  # (3, 2)
    c = idx(g, shift(g.rl, g.vertices[b], 2))  # (2, 3)
    # (e_1 - e_2, x) is the first label
    want = math.sin(3 * math.pi / 7) / math.sin(2 * math.pi / 7)
    assert diamond(g, a, b, b, c) == pytest.approx(want)
    # same direction twice gives zero
    c2 = idx(g, shift(g.rl, g.vertices[b], 1))
    assert diamond(g, a, b, b, c2) == 0.0


def test_diamond_off_diagonal_is_geometric_mean():
    g = basic_graph(3, 8)
    tab = diamond_table(g)
    for a, c in itertools.product(range(g.nv), repeat=2):
        mids = [b for b in tab.mids[a, c] if b >= 0]
        for b, b2 in itertools.permutations(mids, 2):
            d = diamond(g, a, b, b2, c)
            assert d >= 0
            assert d == pytest.approx(math.sqrt(tab.D[a, b, c] * tab.D[a, b2, c]))
            assert d == pytest.approx(diamond(g, a, b2, b, c))


def test_diamond_requires_adjacency():
    g = basic_graph(3, 6)
    with pytest.raises(DiamondError):
        diamond(g, g.one, g.one, g.one, g.one)


def test_rank_two_weights_agree_with_dynkin_a():
    # the basic rank-2 graph is A_{n-1}; both weight formulas must give the same U
    n = 7
    b, a = basic_graph(2, n), ade_graph(f"A{n - 1}")
    for L in (3, 5):
        for a0 in range(n - 1):
            pb = build_path_space(b, a0, None, L)
            pa = build_path_space(a, a0, None, L)
            assert (pb.paths == pa.paths).all()
            for i in range(1, L):
                diff = build_generator(pb, i) - build_generator(pa, i)
                assert abs(diff).max() < 1e-12 if diff.nnz else True


@pytest.mark.parametrize("spec", [(3, 6), (4, 7), "E6"])
def test_sparse_generator_matches_dense_oracle(spec):
    from hecketrace.graphs import make_graph

    g = make_graph(spec)
    L = 4
    counts = path_count(g, L)
    for a0, aL in list(zip(*np.nonzero(counts)))[:12]:
        ps = build_path_space(g, int(a0), int(aL), L)
        walks, _ = dense_generator(g, L, int(a0), int(aL), 1, lambda *f: diamond(g, *f))
        assert [tuple(p) for p in ps.paths] == walks
        for i in range(1, L):
            _, U = dense_generator(g, L, int(a0), int(aL), i, lambda *f: diamond(g, *f))
            np.testing.assert_allclose(build_generator(ps, i).toarray(), U, atol=1e-13)


def test_generators_symmetric_nonnegative():
    g = basic_graph(4, 8)
    ps = build_path_space(g, g.one, None, 5)
    for i in range(1, 5):
        U = build_generator(ps, i)
        assert abs(U - U.T).max() < 1e-14
        assert U.min() >= 0
        gi = build_generator(ps, i, "g")
        assert abs(gi - (g.q * sp.identity(ps.dim) - U)).max() < 1e-14
    with pytest.raises(ValueError):
        build_generator(ps, 5)
    with pytest.raises(ValueError):
        build_generator(ps, 1, "X")


@pytest.mark.parametrize("spec", [(2, 5), (3, 6), (4, 7)])
def test_path_space_counts_and_lookup(spec):
    g = basic_graph(*spec)
    counts = path_count(g, 5)
    for a0 in range(g.nv):
        ps = build_path_space(g, a0, None, 5)
        assert ps.dim == counts[a0].sum()
        assert (ps.paths[:, 0] == a0).all()
        assert (g.G1[ps.paths[:, :-1], ps.paths[:, 1:]] == 1).all()
        assert np.array_equal(ps.index_of(ps.paths), np.arange(ps.dim))
        rows = [tuple(r) for r in ps.paths]
        assert rows == sorted(rows)
        for aL in range(g.nv):
            assert build_path_space(g, a0, aL, 5).dim == counts[a0, aL]
    bogus = np.array([[0, 0, 0, 0, 0, 0]])
    assert build_path_space(g, 0, None, 5).index_of(bogus)[0] == -1


def test_path_space_cap():
    g = basic_graph(3, 8)
    with pytest.raises(PathSpaceTooLarge) as info:
        build_path_space(g, 5, None, 8, cap=100)
    assert info.value.dim > 100


@settings(max_examples=60)
@given(st.permutations(list(range(5))))
def test_reduced_word_is_reduced_and_correct(perm):
    word = reduced_word(tuple(perm))
    assert len(word) == inversions(perm)
    assert permutation_from_word(word, 5) == tuple(perm)


def _other_reduced_word(perm):
    # remove descents from the right instead of bubbling left to right
    arr, swaps = list(perm), []
    while True:
        desc = [j for j in range(len(arr) - 1) if arr[j] > arr[j + 1]]
        if not desc:
            return swaps[::-1]
        j = desc[-1]
        arr[j], arr[j + 1] = arr[j + 1], arr[j]
        swaps.append(j + 1)


def test_g_products_independent_of_reduced_word():
    g = basic_graph(3, 6)
    ps = build_path_space(g, g.one, None, 5)
    gens = generators(ps, "g")
    for perm in itertools.permutations(range(4)):
        w1, w2 = reduced_word(perm), _other_reduced_word(perm)
        assert permutation_from_word(w2, 4) == perm
        diff = hecke_word(ps, w1, gens) - hecke_word(ps, w2, gens)
        assert (abs(diff).max() if diff.nnz else 0) < 1e-12


def test_quotient_terms_count():
    terms = quotient_terms(3)
    assert len(terms) == 24
    assert sorted(length for length, _ in terms) == sorted(inversions(p) for p in itertools.permutations(range(4)))


@pytest.mark.parametrize("spec", [(2, 5), (3, 6), (3, 7), (4, 7), "D5", "E6"])
def test_relations_hold(spec):
    from hecketrace.graphs import make_graph

    g = make_graph(spec)
    rep = check_hecke_relations(g, 5)
    assert rep.passed and rep.max_residual < 1e-9, rep.failures


@pytest.mark.parametrize("spec", [(2, 6), (3, 6), (4, 7), "D4"])
def test_quotient_holds_at_own_rank(spec):
    from hecketrace.graphs import make_graph

    g = make_graph(spec)
    rep = check_quotient(g, g.k + 2)
    assert rep.passed, rep.failures


def test_quotient_fails_below_rank():
    # the S_3 antisymmetriser does not vanish on rank-3 paths
    g = basic_graph(3, 7)
    rep = check_quotient(g, 4, k=2)
    assert not rep.passed and rep.max_residual > 0.1


def test_quotient_needs_enough_slots():
    g = basic_graph(3, 6)
    ps = build_path_space(g, g.one, None, 3)
    with pytest.raises(ValueError):
        quotient_operator(ps, 3)
