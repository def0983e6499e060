"""Named, tolerance-checked identities over graphs and path lengths.

Every check returns an :class:`IdentityReport` holding the worst residual
and where it occurred, whether or not it passed.
"""
from __future__ import annotations

import functools
import itertools
import math
import time
from dataclasses import dataclass, field

import numpy as np

from .chebyshev import cheb_eval
from .fusion import check_fusion_ring, expand_partitions, n_expand
from .graphs import GraphRep, ade_graph, basic_graph, fundamental_qdim
from .hecke import (
    DEFAULT_CAP,
    build_path_space,
    check_hecke_relations,
    check_quotient,
    generators,
    quotient_operator,
)
from .traces import (
    block_factorization,
    edge_trace,
    markov_average,
    oracle_trace,
    trace_sequence,
)
from .weights import RankLevel, enumerate_weights, s_value

__all__ = [
    "IdentityReport",
    "SUITES",
    "MATRIX_TOL",
    "SCALAR_TOL",
    "standard_grid",
    "recursion_generate",
    "ztilde_from_z",
    "z_table",
    "ztilde_table",
    "Z_ROWS",
    "ZTILDE_ROWS",
    "hook_rows",
    "closed_form_k2",
    "closed_form_k3",
    "trig_bracket",
    "quotient_prefactor",
    "quotient_chain_trace",
    "verify_relations",
    "verify_quotient",
    "verify_oracle",
    "verify_fusion",
    "verify_recursion_tilde",
    "verify_recursion_z",
    "verify_cross_consistency",
    "verify_polynomial_tables",
    "verify_n_tables",
    "verify_hook_expansion",
    "verify_closed_forms",
    "verify_markov",
    "verify_universality",
    "verify_trig_identity",
    "verify_quotient_chain",
    "verify_partial_trace",
    "run_suite",
]

MATRIX_TOL = 1e-8
SCALAR_TOL = 1e-9


@dataclass
class IdentityReport:
    """Outcome of one identity on one parameter tuple."""

    identity: str
    params: dict
    max_residual: float = 0.0
    tol: float = MATRIX_TOL
    passed: bool = True
    location: dict | None = None
    skipped: int = 0
    checked: int = 0
    runtime: float = 0.0
    notes: list = field(default_factory=list)

    def add(self, resid, **where) -> None:
        """Fold in a residual (scalar or array); remember the worst entry."""
        arr = np.abs(np.asarray(resid))
        self.checked += 1
        if arr.size == 0:
            return
        flat = int(np.argmax(arr))
        val = float(arr.flat[flat])
        if not np.isfinite(val):
            val = math.inf
        if val > self.max_residual or self.location is None:
            self.max_residual = val
            loc = dict(where)
            if arr.ndim:
                loc["entry"] = [int(i) for i in np.unravel_index(flat, arr.shape)]
            self.location = loc
        if val > self.tol:
            self.passed = False

    def to_dict(self, timings: bool = False) -> dict:
        out = {
            "identity": self.identity,
            "params": self.params,
            "passed": self.passed,
            "max_residual": float(f"{self.max_residual:.15g}"),
            "tol": self.tol,
            "checked": self.checked,
            "skipped": self.skipped,
            "location": self.location,
        }
        if self.notes:
            out["notes"] = self.notes
        if timings:
            out["runtime"] = round(self.runtime, 6)
        return out


def _report(identity: str, graph: GraphRep, tol: float, **params) -> IdentityReport:
    return IdentityReport(identity=identity, params={"graph": graph.name, **params}, tol=tol)


def _timed(fn):
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        t0 = time.perf_counter()
        rep = fn(*args, **kwargs)
        rep.runtime = time.perf_counter() - t0
        return rep

    return wrapper


def standard_grid(ks=(2, 3, 4), spread=range(2, 7), ade=("A4", "A5", "D4", "D5", "E6")) -> list[GraphRep]:
    """Basic graphs ``n = k + d`` for ``d`` in ``spread``, then the ADE list."""
    out = [basic_graph(k, k + d) for k in ks for d in spread]
    return out + [ade_graph(name) for name in ade]


# recursions and their generated families


def recursion_generate(graph: GraphRep, Lmax: int, kind: str = "Z", seed=None) -> list[np.ndarray]:
    """``[M_1..M_Lmax]`` from the recursions; ``seed`` overrides ``M_1..M_len(seed)``."""
    k, beta, q = graph.k, graph.beta, graph.q
    G = graph.Gl
    out: list[np.ndarray] = []
    for L in range(1, Lmax + 1):
        if seed is not None and L <= len(seed):
            out.append(np.asarray(seed[L - 1]))
            continue
        top = min(k, L - 1)
        if kind == "Z":
            M = cheb_eval(L - 1, beta) * G(L).astype(float)
            for ell in range(2, top + 1):
                M = M + cheb_eval(ell - 2, beta) * out[L - ell - 1] @ G(ell)
        elif kind == "Ztilde":
            M = (-1) ** (L - 1) * cheb_eval(L - 1, beta) * G(L).astype(complex)
            for ell in range(1, top + 1):
                M = M - (-q) ** ell * out[L - ell - 1] @ G(ell)
        else:
            raise ValueError(f"unknown kind {kind!r}")
        out.append(M)
    return out


def ztilde_from_z(graph: GraphRep, L: int, Z) -> np.ndarray:
    """Expand ``prod (q - U_i)`` over subsets and trace each word by block factorisation."""
    q = graph.q
    total = np.zeros((graph.nv, graph.nv), dtype=complex)
    slots = range(1, L)
    for r in range(L):
        for S in itertools.combinations(slots, r):
            total += (-1) ** r * q ** (L - 1 - r) * block_factorization(graph, L, S, Z=Z)
    return total


def _recursion_residual(graph: GraphRep, M, L: int, kind: str) -> np.ndarray:
    k, beta, q = graph.k, graph.beta, graph.q
    G = graph.Gl
    top = min(k, L - 1)
    if kind == "Ztilde":
        lhs = sum((-q) ** ell * M[L - ell - 1] @ G(ell) for ell in range(top + 1))
        rhs = (-1) ** (L - 1) * cheb_eval(L - 1, beta) * G(L)
    else:
        lhs = sum(cheb_eval(ell - 2, beta) * M[L - ell - 1] @ G(ell) for ell in range(top + 1))
        rhs = -cheb_eval(L - 1, beta) * G(L)
    return lhs - rhs


@_timed
def verify_recursion_tilde(graph: GraphRep, Lmax: int = 9, tol: float = MATRIX_TOL) -> IdentityReport:
    """``sum_l (-q)^l Z~_{L-l} G_l = (-1)^{L-1} P_{L-1}(beta) G_L`` for ``1 <= L <= Lmax``."""
    rep = _report("recursion-tilde", graph, tol, Lmax=Lmax)
    Zt = trace_sequence(graph, Lmax, "Ztilde")
    for L in range(1, Lmax + 1):
        rep.add(_recursion_residual(graph, Zt, L, "Ztilde"), L=L)
    return rep


@_timed
def verify_recursion_z(graph: GraphRep, Lmax: int = 9, tol: float = MATRIX_TOL) -> IdentityReport:
    """``sum_l P_{l-2}(beta) Z_{L-l} G_l = -P_{L-1}(beta) G_L`` for ``1 <= L <= Lmax``."""
    rep = _report("recursion-z", graph, tol, Lmax=Lmax)
    Z = trace_sequence(graph, Lmax, "Z")
    for L in range(1, Lmax + 1):
        rep.add(_recursion_residual(graph, Z, L, "Z"), L=L)
    return rep


@_timed
def verify_cross_consistency(graph: GraphRep, Lmax: int = 9, tol: float = MATRIX_TOL) -> IdentityReport:
    """Recursion-generated families against traced ones, and ``Z~`` rebuilt from ``Z``.

    ``Z`` and ``Z~`` are generated from their recursions seeded with the
    traced ``M_1..M_k``; ``Z~_L`` is also rebuilt from the generated ``Z``
    family by expanding ``prod (q - U_i)`` into factorised word traces.
    """
    rep = _report("cross-consistency", graph, tol, Lmax=Lmax)
    k = graph.k
    Z = trace_sequence(graph, Lmax, "Z")
    Zt = trace_sequence(graph, Lmax, "Ztilde")
    genZ = recursion_generate(graph, Lmax, "Z", seed=Z[:k])
    genZt = recursion_generate(graph, Lmax, "Ztilde", seed=Zt[:k])
    for L in range(1, Lmax + 1):
        rep.add(genZ[L - 1] - Z[L - 1], L=L, compare="Z generated vs traced")
        rep.add(genZt[L - 1] - Zt[L - 1], L=L, compare="Ztilde generated vs traced")
        rep.add(ztilde_from_z(graph, L, genZ) - genZt[L - 1], L=L, compare="Ztilde from Z words")
    return rep


# polynomial tables in the G's


def z_table(graph: GraphRep) -> list[np.ndarray]:
    """``Z_1..Z_5`` as polynomials in the fused adjacencies."""
    G = [graph.Gl(i).astype(float) for i in range(6)]
    b = graph.beta
    return [
        G[1],
        b * G[2],
        G[1] @ G[2] + (b**2 - 1) * G[3],
        b * (G[2] @ G[2] + G[1] @ G[3]) + b * (b**2 - 2) * G[4],
        G[1] @ G[2] @ G[2] + (2 * b**2 - 1) * G[2] @ G[3] + (b**2 - 1) * G[1] @ G[4]
        + (b**4 - 3 * b**2 + 1) * G[5],
    ]


def ztilde_table(graph: GraphRep) -> list[np.ndarray]:
    """``Z~_1..Z~_4`` as polynomials in the fused adjacencies."""
    G = [graph.Gl(i).astype(complex) for i in range(5)]
    q = graph.q
    G11 = G[1] @ G[1]
    return [
        G[1],
        q * G11 - (q + 1 / q) * G[2],
        q**2 * G11 @ G[1] - (2 * q**2 + 1) * G[1] @ G[2] + (q**2 + 1 + q**-2) * G[3],
        q**3 * G11 @ G11 - (3 * q**3 + q) * G11 @ G[2] + (q**3 + q) * G[2] @ G[2]
        + (2 * q**3 + q + 1 / q) * G[1] @ G[3] - (q**3 + q + 1 / q + q**-3) * G[4],
    ]


@_timed
def verify_polynomial_tables(graph: GraphRep, tol: float = MATRIX_TOL) -> IdentityReport:
    rep = _report("tables", graph, tol)
    Z = trace_sequence(graph, 5, "Z")
    Zt = trace_sequence(graph, 4, "Ztilde")
    for L, M in enumerate(z_table(graph), start=1):
        rep.add(Z[L - 1] - M, L=L, kind="Z")
    for L, M in enumerate(ztilde_table(graph), start=1):
        rep.add(Zt[L - 1] - M, L=L, kind="Ztilde")
    return rep


# fusion-basis rows; partitions are row lengths


def Z_ROWS(beta: float) -> dict[int, dict[tuple, float]]:
    b = beta
    return {
        1: {(1,): 1.0},
        2: {(1, 1): b},
        3: {(1, 1, 1): b**2, (2, 1): 1.0},
        4: {(1, 1, 1, 1): b**3, (2, 1, 1): 2 * b, (2, 2): b},
        5: {(1, 1, 1, 1, 1): b**4, (2, 1, 1, 1): 3 * b**2, (2, 2, 1): 2 * b**2 + 1,
            (3, 1, 1): 1.0, (3, 2): 1.0},
    }


def ZTILDE_ROWS(q: complex) -> dict[int, dict[tuple, complex]]:
    return {
        1: {(1,): 1.0},
        2: {(2,): q, (1, 1): -1 / q},
        3: {(3,): q**2, (2, 1): -1.0, (1, 1, 1): q**-2},
        4: {(4,): q**3, (3, 1): -q, (2, 1, 1): 1 / q, (1, 1, 1, 1): -(q**-3)},
        5: {(5,): q**4, (4, 1): -(q**2), (3, 1, 1): 1.0, (2, 1, 1, 1): -(q**-2), (1, 1, 1, 1, 1): q**-4},
    }


def hook_rows(q: complex, L: int) -> dict[tuple, complex]:
    """``(-1)^s q^{L-1-2s}`` on the hook ``(t+1, 1^s)`` with ``s + t + 1 = L``."""
    return {(L - s,) + (1,) * s: (-1) ** s * q ** (L - 1 - 2 * s) for s in range(L)}


def _support(z, eps=1e-9) -> set:
    return set(np.flatnonzero(np.abs(z) > eps).tolist())


def _compare_rows(rep: IdentityReport, graph: GraphRep, M, combo, **where) -> None:
    exp = n_expand(graph, M)
    want = expand_partitions(graph, combo)
    rep.add(exp.coeffs - want, **where)
    rep.add(exp.residual, reconstruction=True, **where)
    if _support(exp.coeffs) != _support(want):
        rep.passed = False
        rep.notes.append({"support_mismatch": where})


@_timed
def verify_n_tables(graph: GraphRep, tol: float = MATRIX_TOL, hook_Lmax: int = 8) -> IdentityReport:
    """Fusion-basis rows of ``Z_1..Z_5`` and ``Z~_1..Z~_5``, plus the hook formula."""
    if not graph.is_basic:
        raise ValueError("fusion-basis rows are tabulated for basic graphs")
    rep = _report("n-tables", graph, tol, hook_Lmax=hook_Lmax)
    Z = trace_sequence(graph, 5, "Z")
    Zt = trace_sequence(graph, max(5, hook_Lmax), "Ztilde")
    for L, combo in Z_ROWS(graph.beta).items():
        _compare_rows(rep, graph, Z[L - 1], combo, L=L, kind="Z")
    for L, combo in ZTILDE_ROWS(graph.q).items():
        _compare_rows(rep, graph, Zt[L - 1], combo, L=L, kind="Ztilde")
    hook = verify_hook_expansion.__wrapped__(graph, hook_Lmax, tol)
    rep.add(hook.max_residual, hook=True)
    rep.passed &= hook.passed
    return rep


@_timed
def verify_hook_expansion(graph: GraphRep, Lmax: int = 8, tol: float = MATRIX_TOL) -> IdentityReport:
    """``Z~_L`` equals the signed hook sum, compared both as matrices and as coefficients."""
    rep = _report("hook", graph, tol, Lmax=Lmax)
    from .fusion import fusion_basis

    fb = fusion_basis(graph)
    Zt = trace_sequence(graph, Lmax, "Ztilde")
    N = fb.stack()
    for L in range(1, Lmax + 1):
        z = expand_partitions(graph, hook_rows(graph.q, L))
        rep.add(Zt[L - 1] - np.tensordot(z, N, axes=1), L=L)
        rep.add(n_expand(graph, Zt[L - 1]).coeffs - z, L=L, coefficients=True)
    return rep


# closed forms


def closed_form_k2(graph: GraphRep, L: int) -> np.ndarray:
    G1, G2 = graph.Gl(1).astype(float), graph.Gl(2).astype(float)
    ell, odd = divmod(L, 2)
    G2l = np.linalg.matrix_power(G2, ell)
    return G1 @ G2l if odd else graph.beta * G2l


def _comb(n: int, r: int) -> int:
    return math.comb(n, r) if 0 <= r <= n else 0


def closed_form_k3(graph: GraphRep, L: int) -> np.ndarray:
    """Binomial-sum closed form of ``Z_L`` for rank 3, with ``G_2``, ``G_3`` kept explicit."""
    b = graph.beta
    G1, G2, G3 = (graph.Gl(i).astype(float) for i in (1, 2, 3))
    mp = np.linalg.matrix_power
    out = np.zeros_like(G1)
    ell, odd = divmod(L, 2)
    if odd:
        for p in range(ell // 3 + 1):
            out += _comb(ell - p, 2 * p) * b ** (2 * p) * G1 @ mp(G2, ell - 3 * p) @ mp(G3, 2 * p)
        for p in range((ell - 1) // 3 + 1):
            c = _comb(ell - p, 2 * p + 1) * b ** (2 * p + 2) - _comb(ell - p - 1, 2 * p) * b ** (2 * p)
            out += c * mp(G2, ell - 3 * p - 1) @ mp(G3, 2 * p + 1)
    else:
        out += b * mp(G2, ell)
        for p in range(1, ell // 3 + 1):
            c = _comb(ell - p, 2 * p) * b ** (2 * p + 1) - _comb(ell - p - 1, 2 * p - 1) * b ** (2 * p - 1)
            out += c * mp(G2, ell - 3 * p) @ mp(G3, 2 * p)
        for p in range((ell - 2) // 3 + 1):
            out += _comb(ell - p - 1, 2 * p + 1) * b ** (2 * p + 1) * G1 @ mp(G2, ell - 3 * p - 2) @ mp(G3, 2 * p + 1)
    return out


@_timed
def verify_closed_forms(graph: GraphRep, Lmax: int | None = None, tol: float = MATRIX_TOL) -> IdentityReport:
    """Rank 2: ``Z_{2l+1} = G_1 G_2^l``, ``Z_{2l} = beta G_2^l``.  Rank 3: binomial sums."""
    if graph.k == 2:
        form, Lmax = closed_form_k2, Lmax or 12
    elif graph.k == 3:
        form, Lmax = closed_form_k3, Lmax or 10
    else:
        raise ValueError("closed forms exist for k = 2, 3 only")
    rep = _report("closed-forms", graph, tol, Lmax=Lmax)
    Z = trace_sequence(graph, Lmax, "Z")
    for L in range(1, Lmax + 1):
        rep.add(Z[L - 1] - form(graph, L), L=L)
    return rep


# Markov property


@_timed
def verify_markov(graph: GraphRep, Lmax: int = 9, tol: float = SCALAR_TOL) -> IdentityReport:
    """Edge identity ``sum_c D(a,b,c) psi_c = P_{k-2} psi_b`` and ``<Z_L>`` in closed form."""
    from .hecke import diamond_table

    rep = _report("markov", graph, tol, Lmax=Lmax)
    k, beta, psi = graph.k, graph.beta, graph.psi
    D = diamond_table(graph).D
    p_km2, p_km1 = cheb_eval(k - 2, beta), cheb_eval(k - 1, beta)
    for a, b in graph.edges:
        rep.add(D[a, b, :] @ psi - p_km2 * psi[b], edge=[int(a), int(b)])
    Z = trace_sequence(graph, Lmax, "Z")
    avgs = [markov_average(graph, M) for M in Z]
    for L in range(1, Lmax + 1):
        rep.add(avgs[L - 1] - p_km1 * p_km2 ** (L - 1), L=L)
    # the averages obey the Z recursion with G_l replaced by its eigenvalue
    gam = [fundamental_qdim(graph.rl, ell) if ell <= k else 0.0 for ell in range(Lmax + 1)]
    for L in range(1, Lmax + 1):
        top = min(k, L - 1)
        lhs = sum(cheb_eval(ell - 2, beta) * avgs[L - ell - 1] * gam[ell] for ell in range(top + 1))
        rep.add(lhs + cheb_eval(L - 1, beta) * gam[L], L=L, scalar_recursion=True)
    return rep


# universality over ADE graphs


@_timed
def verify_universality(graph: GraphRep, Lmax: int = 8, tol: float = MATRIX_TOL) -> IdentityReport:
    """``Z_L`` and ``Z~_L`` on an ADE graph expand over ``V_lam`` with basic-graph coefficients."""
    if graph.is_basic:
        raise ValueError("universality compares an ADE graph to its basic counterpart")
    rep = _report("universality", graph, tol, Lmax=Lmax)
    basic = basic_graph(2, graph.n)
    for kind in ("Z", "Ztilde"):
        M = trace_sequence(graph, Lmax, kind)
        R = trace_sequence(basic, Lmax, kind)
        for L in range(1, Lmax + 1):
            rep.add(n_expand(graph, M[L - 1], reference=R[L - 1]).residual, L=L, kind=kind)
    return rep


# rank-3 trigonometric identity


def _ratio(rl: RankLevel, x, alpha: int, beta: int) -> float:
    """Diagonal weight for the steps ``alpha`` then ``beta`` from ``x``, raw sines."""
    num = s_value(rl, alpha, beta, tuple(v + e for v, e in zip(x, _e(rl, alpha))))
    den = s_value(rl, alpha, beta, x)
    return num / den if den != 0 else math.nan


def _e(rl: RankLevel, alpha: int):
    from .weights import e_vector

    return e_vector(rl, alpha)


def _add(x, *vs):
    out = list(x)
    for v in vs:
        out = [a + b for a, b in zip(out, v)]
    return tuple(out)


def trig_bracket(rl: RankLevel, a, alpha: int) -> float:
    """Left side of the rank-3 identity at weight ``a`` and fixed direction ``alpha``.

    Returns ``nan`` when any sine in a denominator vanishes.
    """
    if rl.k != 3:
        raise ValueError("the identity is stated for k = 3")
    e = {d: _e(rl, d) for d in (1, 2, 3)}
    b = _add(a, e[alpha])
    total = 0.0
    for beta in (1, 2, 3):
        if beta == alpha:
            continue
        gamma = 6 - alpha - beta
        c = _add(b, e[beta])
        terms = [
            _ratio(rl, a, alpha, beta),
            _ratio(rl, b, beta, gamma), _ratio(rl, c, gamma, alpha),
            _ratio(rl, b, beta, alpha), _ratio(rl, c, alpha, gamma),
        ]
        if any(math.isnan(t) for t in terms):
            return math.nan
        total += terms[0] * (terms[1] * terms[2] + terms[3] * terms[4] - 1.0)
    return total


@_timed
def verify_trig_identity(rl, weights=None, tol: float = SCALAR_TOL) -> IdentityReport:
    """The bracket equals ``beta`` at every weight and direction with nonzero denominators."""
    if isinstance(rl, GraphRep):
        rl = rl.rl
    rep = IdentityReport(identity="trig", params={"k": rl.k, "n": rl.n}, tol=tol)
    weights = enumerate_weights(rl) if weights is None else [tuple(w) for w in weights]
    for a in weights:
        for alpha in (1, 2, 3):
            val = trig_bracket(rl, a, alpha)
            if math.isnan(val):
                rep.skipped += 1
                continue
            rep.add(val - rl.beta, weight=list(a), alpha=alpha)
    return rep


# antisymmetriser chain


def quotient_prefactor(k: int, q: complex) -> complex:
    """``c_k`` in ``tr(A_k g_{k+1}...g_{L-1}) = c_k B_L``.

    ``A_k`` is the ``S_{k+1}`` antisymmetriser and
    ``B_L = -sum_{l<=k} (-q)^l Z~_{L-l} G_l``.  For ``k = 3`` this is
    ``(1+q^-2)(q^-3+q^-5+q^-7)``.
    """
    val = (-1) ** (k + 1) * q ** (-k)
    for j in range(1, k + 1):
        val *= sum(q ** (-2 * i) for i in range(j))
    return val


def quotient_chain_trace(graph: GraphRep, L: int, kq: int, cap: int = DEFAULT_CAP) -> np.ndarray:
    """Per endpoint pair, ``tr(A_kq g_{kq+1} ... g_{L-1})`` by explicit products."""
    V = graph.nv
    out = np.zeros((V, V), dtype=complex)
    for a0 in range(V):
        ps = build_path_space(graph, a0, None, L, cap)
        if ps.dim == 0:
            continue
        g = generators(ps, "g")
        X = quotient_operator(ps, kq, 0, g)
        for j in range(kq + 1, L):
            X = X @ g[j]
        d = X.diagonal()
        out[a0] = np.bincount(ps.endpoints, d.real, V) + 1j * np.bincount(ps.endpoints, d.imag, V)
    return out


@_timed
def verify_quotient_chain(graph: GraphRep, L: int, kq: int | None = None, tol: float = MATRIX_TOL) -> IdentityReport:
    """Trace of the antisymmetriser times ``g_{kq+1}...g_{L-1}`` against ``c B_L``.

    The comparison is an identity on any graph; both sides vanish when the
    graph's rank is at most ``kq``.
    """
    kq = graph.k if kq is None else kq
    if L < kq + 1:
        raise ValueError(f"need L >= {kq + 1}")
    rep = _report("quotient-chain", graph, tol, L=L, kq=kq)
    q = graph.q
    T = quotient_chain_trace(graph, L, kq)
    Zt = trace_sequence(graph, L, "Ztilde")
    B = -sum((-q) ** ell * Zt[L - ell - 1] @ graph.Gl(ell) for ell in range(kq + 1))
    rep.add(T - quotient_prefactor(kq, q) * B, compare="trace vs prefactor * combination")
    if graph.k <= kq:
        rep.add(T, compare="trace vanishes")
        rep.add(B, compare="combination vanishes")
    return rep


@_timed
def verify_partial_trace(graph: GraphRep, tol: float = SCALAR_TOL) -> IdentityReport:
    """Rank 3, first edge ``(a, b)`` fixed: ``Z_4 - Z_2 G_2 - beta Z_1 G_3 = 0`` entrywise."""
    if graph.k != 3 or not graph.is_basic:
        raise ValueError("partial-trace identity is checked on rank-3 basic graphs")
    rep = _report("partial-trace", graph, tol)
    G2, G3 = graph.Gl(2).astype(float), graph.Gl(3).astype(float)
    R = edge_trace(graph, 4) - edge_trace(graph, 2) @ G2 - graph.beta * edge_trace(graph, 1) @ G3
    edges = graph.edges
    for e, (a, b) in enumerate(edges):
        rep.add(R[e], edge=[int(a), int(b)])
    return rep


# adapters for the operator-level checks


@_timed
def verify_relations(graph: GraphRep, Lmax: int = 6, starts=None, tol: float = SCALAR_TOL) -> IdentityReport:
    rep = _report("relations", graph, tol, Lmax=Lmax)
    r = check_hecke_relations(graph, Lmax, starts=starts, tol=tol)
    rep.add(r.max_residual, L=Lmax)
    rep.passed &= r.passed
    rep.checked = r.checked
    return rep


@_timed
def verify_quotient(graph: GraphRep, Lmax: int = 6, starts=None, tol: float = SCALAR_TOL) -> IdentityReport:
    rep = _report("quotient", graph, tol, Lmax=Lmax)
    r = check_quotient(graph, max(Lmax, graph.k + 1), starts=starts, tol=tol)
    rep.add(r.max_residual, L=max(Lmax, graph.k + 1))
    rep.passed &= r.passed
    rep.checked = r.checked
    return rep


@_timed
def verify_oracle(graph: GraphRep, Lmax: int = 6, max_dim: int = 10_000, tol: float = SCALAR_TOL) -> IdentityReport:
    """Contraction against explicit operator traces on every small enough endpoint pair."""
    rep = _report("oracle", graph, tol, Lmax=Lmax, max_dim=max_dim)
    for kind in ("Z", "Ztilde"):
        fast = trace_sequence(graph, Lmax, kind)
        for L in range(1, Lmax + 1):
            slow, mask = oracle_trace(graph, L, kind, max_dim=max_dim)
            rep.skipped += int((~mask).sum())
            rep.add(np.where(mask, fast[L - 1] - slow, 0), L=L, kind=kind)
    return rep


@_timed
def verify_fusion(graph: GraphRep, tol: float = MATRIX_TOL) -> IdentityReport:
    rep = _report("fusion-ring", graph, tol)
    r = check_fusion_ring(graph, tol=tol)
    rep.add(r.max_residual)
    rep.passed &= r.passed
    if r.failures:
        rep.notes.extend(r.failures[:10])
    return rep


# suite runner


def _applicable(suite: str, graph: GraphRep) -> bool:
    if suite in ("n-tables", "hook"):
        return graph.is_basic
    if suite == "closed-forms":
        return graph.k in (2, 3)
    if suite == "universality":
        return not graph.is_basic
    if suite in ("trig", "partial-trace"):
        return graph.is_basic and graph.k == 3
    if suite == "quotient-chain":
        return graph.k in (2, 3)
    if suite == "quotient":
        return graph.k <= 3
    return True


def _jobs_for(suite: str, graph: GraphRep, Lmax: int) -> list:
    """``(callable, kwargs)`` pairs for one suite on one graph."""
    Lrel = min(Lmax, 6)
    if suite == "relations":
        return [(verify_relations, dict(Lmax=Lrel))]
    if suite == "quotient":
        return [(verify_quotient, dict(Lmax=max(Lrel, graph.k + 1)))]
    if suite == "oracle":
        return [(verify_oracle, dict(Lmax=Lrel))]
    if suite == "fusion-ring":
        return [(verify_fusion, {})]
    if suite == "recursion-tilde":
        return [(verify_recursion_tilde, dict(Lmax=Lmax))]
    if suite == "recursion-z":
        return [(verify_recursion_z, dict(Lmax=Lmax))]
    if suite == "cross-consistency":
        return [(verify_cross_consistency, dict(Lmax=Lmax))]
    if suite == "tables":
        return [(verify_polynomial_tables, {})]
    if suite == "n-tables":
        return [(verify_n_tables, dict(hook_Lmax=min(Lmax, 8)))]
    if suite == "hook":
        return [(verify_hook_expansion, dict(Lmax=Lmax))]
    if suite == "closed-forms":
        return [(verify_closed_forms, dict(Lmax=Lmax))]
    if suite == "markov":
        return [(verify_markov, dict(Lmax=Lmax))]
    if suite == "universality":
        return [(verify_universality, dict(Lmax=Lmax))]
    if suite == "trig":
        return [(verify_trig_identity, {})]
    if suite == "partial-trace":
        return [(verify_partial_trace, {})]
    if suite == "quotient-chain":
        return [(verify_quotient_chain, dict(L=L)) for L in range(graph.k + 1, min(Lmax, 7) + 1)]
    raise ValueError(f"unknown suite {suite!r}")


SUITES = (
    "relations",
    "quotient",
    "oracle",
    "fusion-ring",
    "recursion-tilde",
    "recursion-z",
    "cross-consistency",
    "tables",
    "n-tables",
    "hook",
    "closed-forms",
    "markov",
    "universality",
    "trig",
    "quotient-chain",
    "partial-trace",
)


@functools.lru_cache(maxsize=None)
def _cached_graph(spec) -> GraphRep:
    from .graphs import make_graph

    return make_graph(spec)


def _run_job(job):
    fn, graph_spec, kwargs = job
    return fn(_cached_graph(graph_spec), **kwargs)


def _graph_spec(graph: GraphRep):
    return (graph.k, graph.n) if graph.is_basic else graph.kind


def run_suite(graphs, suites=("all",), Lmax: int = 9, jobs: int = 1, tol: float | None = None) -> list[IdentityReport]:
    """Run the selected suites on each graph; results come back in job order.

    ``tol`` overrides the tolerance of every check.
    """
    names = list(SUITES) if "all" in suites else list(suites)
    for s in names:
        if s not in SUITES:
            raise ValueError(f"unknown suite {s!r}; choose from {', '.join(SUITES)} or all")
    work = []
    for graph in graphs:
        for s in names:
            if _applicable(s, graph):
                for fn, kw in _jobs_for(s, graph, Lmax):
                    if tol is not None:
                        kw = {**kw, "tol": tol}
                    work.append((fn, _graph_spec(graph), kw))
    if jobs <= 1:
        return [_run_job(w) for w in work]
    from concurrent.futures import ProcessPoolExecutor

    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(_run_job, work))
