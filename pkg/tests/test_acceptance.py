"""One test per acceptance criterion; each prints a PASS/FAIL line."""
import time

import pytest

from hecketrace.fusion import check_fusion_ring
from hecketrace.graphs import ade_graph, basic_graph
from hecketrace.hecke import check_hecke_relations, check_quotient
from hecketrace.identities import (
    verify_closed_forms,
    verify_cross_consistency,
    verify_hook_expansion,
    verify_markov,
    verify_n_tables,
    verify_oracle,
    verify_partial_trace,
    verify_polynomial_tables,
    verify_quotient_chain,
    verify_recursion_tilde,
    verify_recursion_z,
    verify_trig_identity,
    verify_universality,
)

pytestmark = pytest.mark.acceptance


def basic_grid(ks=(2, 3, 4), spread=range(2, 7)):
    return [basic_graph(k, k + d) for k in ks for d in spread]


def ade(*names):
    return [ade_graph(x) for x in names]


def summarise(reports):
    worst = max(reports, key=lambda r: r.max_residual)
    bad = [r for r in reports if not r.passed]
    return not bad, worst, bad


def test_criterion_1_relations(acceptance):
    t0 = time.perf_counter()
    graphs = basic_grid() + ade("A4", "D4", "E6")
    reps = []
    for g in graphs:
        for L in range(2, 7):
            reps.append(check_hecke_relations(g, L, tol=1e-9))
            if g.k in (2, 3) and L >= g.k + 1:
                reps.append(check_quotient(g, L, tol=1e-9))
    elapsed = time.perf_counter() - t0
    worst = max(r.max_residual for r in reps)
    ok = all(r.passed for r in reps) and worst <= 1e-9 and elapsed <= 60
    acceptance(1, ok, f"{len(reps)} relation/quotient checks, max residual {worst:.2e}, {elapsed:.1f}s")
    assert ok


def test_criterion_2_oracle(acceptance):
    t0 = time.perf_counter()
    reps = [verify_oracle(g, Lmax=6, max_dim=10_000, tol=1e-9) for g in basic_grid() + ade("A4", "D4", "E6")]
    elapsed = time.perf_counter() - t0
    ok, worst, bad = summarise(reps)
    ok = ok and elapsed <= 120
    pairs = sum(r.checked for r in reps)
    acceptance(2, ok, f"{pairs} trace comparisons, max residual {worst.max_residual:.2e}, {elapsed:.1f}s")
    assert ok, [r.to_dict() for r in bad]


def test_criterion_3_tables(acceptance):
    reps = []
    for k in (3, 4, 5):
        g = basic_graph(k, k + 3)
        reps.append(verify_polynomial_tables(g, tol=1e-8))
        reps.append(verify_n_tables(g, tol=1e-8))
    ok, worst, bad = summarise(reps)
    acceptance(3, ok, f"k=3,4,5 tables and fusion rows, max residual {worst.max_residual:.2e}")
    assert ok, [r.to_dict() for r in bad]


def test_criterion_4_recursions(acceptance):
    reps = []
    for g in basic_grid() + ade("A4", "A5", "D4", "D5", "E6"):
        reps.append(verify_recursion_tilde(g, Lmax=9, tol=1e-8))
        reps.append(verify_recursion_z(g, Lmax=9, tol=1e-8))
        reps.append(verify_cross_consistency(g, Lmax=9, tol=1e-8))
    ok, worst, bad = summarise(reps)
    acceptance(4, ok, f"{len(reps)} recursion reports, max residual {worst.max_residual:.2e}")
    assert ok, [r.to_dict() for r in bad]


def test_criterion_5_closed_forms(acceptance):
    reps = [verify_closed_forms(g, Lmax=12, tol=1e-8)
            for g in basic_grid(ks=(2,)) + ade("A4", "A5", "D4", "D5", "E6")]
    reps += [verify_closed_forms(g, Lmax=10, tol=1e-8) for g in basic_grid(ks=(3,))]
    reps += [verify_hook_expansion(g, Lmax=8, tol=1e-8) for g in basic_grid()]
    ok, worst, bad = summarise(reps)
    acceptance(5, ok, f"{len(reps)} closed-form/hook reports, max residual {worst.max_residual:.2e}")
    assert ok, [r.to_dict() for r in bad]


def test_criterion_6_markov(acceptance):
    graphs = (basic_grid() + [basic_graph(5, 8)]
              + ade("A4", "A5", "D4", "D5", "E6", "E7", "E8"))
    reps = [verify_markov(g, Lmax=9, tol=1e-9) for g in graphs]
    ok, worst, bad = summarise(reps)
    acceptance(6, ok, f"{len(graphs)} graphs, max residual {worst.max_residual:.2e}")
    assert ok, [r.to_dict() for r in bad]


def test_criterion_7_universality(acceptance):
    reps = [verify_universality(g, Lmax=8, tol=1e-8) for g in ade("A4", "A5", "D4", "D5", "E6", "E7", "E8")]
    ok, worst, bad = summarise(reps)
    acceptance(7, ok, f"7 ADE graphs, max residual {worst.max_residual:.2e}")
    assert ok, [r.to_dict() for r in bad]


def test_criterion_8_rank_three_checks(acceptance):
    reps = []
    for n in (6, 7):
        g = basic_graph(3, n)
        for L in (5, 6, 7):
            q = check_quotient(g, L, tol=1e-8)
            assert q.passed
            reps.append(verify_quotient_chain(g, L, 3, tol=1e-8))
        reps.append(verify_partial_trace(g, tol=1e-9))
    trig = [verify_trig_identity(basic_graph(3, n).rl, tol=1e-9) for n in (6, 7, 8)]
    reps += trig
    ok, worst, bad = summarise(reps)
    ok = ok and all(r.checked > 0 for r in trig)
    acceptance(8, ok, f"quotient chain, trig ({sum(r.checked for r in trig)} points), partial trace; "
                      f"max residual {worst.max_residual:.2e}")
    assert ok, [r.to_dict() for r in bad]


def test_criterion_9_fusion_ring(acceptance):
    t0 = time.perf_counter()
    reps = [check_fusion_ring(basic_graph(k, k + d)) for k in (2, 3, 4) for d in range(2, 8)]
    elapsed = time.perf_counter() - t0
    ok = all(r.passed for r in reps) and elapsed <= 30
    acceptance(9, ok, f"{len(reps)} fusion rings, {elapsed:.1f}s")
    assert ok, [r.failures for r in reps if not r.passed]
