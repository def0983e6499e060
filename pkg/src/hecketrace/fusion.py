"""Fusion matrices ``N_lam`` from the fused adjacencies, and expansion in that basis.

``N_lam`` is the dual Jacobi-Trudi determinant ``det(G_{lam'_i - i + j})``
in the commuting family ``G_0 = G_k = I``, ``G_m = 0`` outside ``0..k``.
The determinant is expanded once per (partition, k) into an integer
polynomial in ``G_1..G_{k-1}`` and then evaluated with cached monomials.
For ADE graphs (k = 2) the analogue ``V_lam = P_{lam-1}(G_1)``.
"""
from __future__ import annotations

import weakref
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .chebyshev import cheb_coeffs
from .graphs import GraphRep, basic_graph
from .weights import conjugate, is_admissible, weight_to_partition

__all__ = [
    "FusionError",
    "FusionBasis",
    "FusionReport",
    "NExpansion",
    "jacobi_trudi_polynomial",
    "fusion_basis",
    "fusion_matrix",
    "partition_matrix",
    "check_fusion_ring",
    "n_expand",
    "expand_partitions",
]


class FusionError(ValueError):
    """Non-integral determinant or inadmissible label."""


Poly = dict  # exponent tuple over (G_1, ..., G_{k-1}) -> int


def _entry(m: int, k: int) -> Poly:
    zero = (0,) * (k - 1)
    if m == 0 or m == k:
        return {zero: 1}
    if m < 0 or m > k:
        return {}
    e = [0] * (k - 1)
    e[m - 1] = 1
    return {tuple(e): 1}


def _mul_monomial(p: Poly, mono: Poly) -> Poly:
    ((exp, c),) = mono.items()
    return {tuple(a + b for a, b in zip(key, exp)): v * c for key, v in p.items()}


def _add_into(acc: Poly, p: Poly, sign: int) -> None:
    for key, v in p.items():
        s = acc.get(key, 0) + sign * v
        if s:
            acc[key] = s
        else:
            acc.pop(key, None)


@lru_cache(maxsize=None)
def _jt_cached(partition: tuple, k: int) -> tuple:
    lam_c = conjugate(partition)
    r = len(lam_c)
    if r == 0:
        return (((0,) * (k - 1), 1),)
    memo: dict = {}

    def minor(i: int, used: int) -> Poly:
        if i == r:
            return {(0,) * (k - 1): 1}
        key = (i, used)
        if key in memo:
            return memo[key]
        # columns below i - lam_c[i] are unreachable for rows >= i
        low = i - lam_c[i]
        if low > 0 and (~used) & ((1 << low) - 1):
            memo[key] = {}
            return memo[key]
        acc: Poly = {}
        sign = 1
        for j in range(r):
            if used >> j & 1:
                continue
            ent = _entry(lam_c[i] - i + j, k)
            if ent:
                sub = minor(i + 1, used | (1 << j))
                if sub:
                    _add_into(acc, _mul_monomial(sub, ent), sign)
            sign = -sign
        memo[key] = acc
        return acc

    return tuple(sorted(minor(0, 0).items()))


def jacobi_trudi_polynomial(partition, k: int) -> dict:
    """``N_partition`` as an integer polynomial in ``G_1..G_{k-1}``.

    Keys are exponent tuples; ``G_k = I`` has been absorbed.
    """
    parts = tuple(p for p in partition if p > 0)
    return dict(_jt_cached(parts, k))


class FusionBasis:
    """Per-graph cache of monomials and fusion matrices."""

    def __init__(self, graph: GraphRep):
        self.graph = graph
        self._mono: dict = {}
        self._by_partition: dict = {}
        self._stack = None

    def monomial(self, exps: tuple) -> np.ndarray:
        got = self._mono.get(exps)
        if got is not None:
            return got
        if not any(exps):
            out = np.eye(self.graph.nv, dtype=np.int64)
        else:
            pos = next(i for i, e in enumerate(exps) if e)
            lower = list(exps)
            lower[pos] -= 1
            out = self.graph.G[pos + 1] @ self.monomial(tuple(lower))
        self._mono[exps] = out
        return out

    def partition_matrix(self, partition) -> np.ndarray:
        """Integer matrix of the dual Jacobi-Trudi determinant for any partition."""
        parts = tuple(p for p in partition if p > 0)
        got = self._by_partition.get(parts)
        if got is not None:
            return got
        out = np.zeros((self.graph.nv, self.graph.nv), dtype=np.int64)
        for exps, c in jacobi_trudi_polynomial(parts, self.graph.k).items():
            out += c * self.monomial(exps)
        self._by_partition[parts] = out
        return out

    @property
    def labels(self) -> list:
        """Fusion labels: weights (basic) or Dynkin labels ``1..n-1`` (ADE)."""
        if self.graph.is_basic:
            return list(self.graph.vertices)
        return list(range(1, self.graph.n))

    def matrix(self, lam) -> np.ndarray:
        g = self.graph
        if g.is_basic:
            lam = tuple(lam)
            if not is_admissible(g.rl, lam):
                raise FusionError(f"weight {lam} not admissible for k={g.k}, n={g.n}")
            return self.partition_matrix(weight_to_partition(g.rl, lam))
        lam = int(lam if np.isscalar(lam) else lam[0])
        if not 1 <= lam <= g.n - 1:
            raise FusionError(f"label {lam} outside 1..{g.n - 1}")
        key = ("V", lam)
        got = self._by_partition.get(key)
        if got is None:
            got = _poly_in_G1(cheb_coeffs(lam - 1), g.G1)
            self._by_partition[key] = got
        return got

    def stack(self) -> np.ndarray:
        """``(W, V, V)`` int64 array of all fusion matrices in label order."""
        if self._stack is None:
            self._stack = np.stack([self.matrix(lam) for lam in self.labels])
            self._stack.setflags(write=False)
        return self._stack


def _poly_in_G1(coeffs, G1) -> np.ndarray:
    out = np.zeros_like(G1)
    power = np.eye(G1.shape[0], dtype=G1.dtype)
    for c in coeffs:
        if c:
            out = out + int(c) * power
        power = G1 @ power
    return out


_BASES: "weakref.WeakKeyDictionary[GraphRep, FusionBasis]" = weakref.WeakKeyDictionary()


def fusion_basis(graph: GraphRep) -> FusionBasis:
    fb = _BASES.get(graph)
    if fb is None:
        fb = _BASES[graph] = FusionBasis(graph)
    return fb


def fusion_matrix(graph: GraphRep, lam) -> np.ndarray:
    return fusion_basis(graph).matrix(lam)


def partition_matrix(graph: GraphRep, partition) -> np.ndarray:
    return fusion_basis(graph).partition_matrix(partition)


@dataclass
class FusionReport:
    graph: str
    passed: bool = True
    max_residual: float = 0.0
    failures: list = field(default_factory=list)

    def fail(self, msg: str) -> None:
        self.passed = False
        if len(self.failures) < 50:
            self.failures.append(msg)


def _basic_counterpart(graph: GraphRep) -> GraphRep:
    return graph if graph.is_basic else _basic_for_n(graph.n)


@lru_cache(maxsize=None)
def _basic_for_n(n: int) -> GraphRep:
    return basic_graph(2, n)


def check_fusion_ring(graph: GraphRep, tol: float = 1e-8) -> FusionReport:
    """Integrality, nonnegativity, commutativity, Pieri consistency and closure.

    Closure coefficients ``N_{lam mu}^nu`` are read off the identity row of
    ``N_lam N_mu`` on the basic graph; for ADE graphs they are imported from
    the basic graph with the same ``n`` and the ``V`` matrices must satisfy
    the same products.
    """
    fb = fusion_basis(graph)
    labels = fb.labels
    rep = FusionReport(graph=graph.name)
    N = fb.stack()
    if np.any(N < 0):
        w, a, b = np.argwhere(N < 0)[0]
        rep.fail(f"negative entry in N{labels[w]} at ({a},{b})")
    W, V = N.shape[0], N.shape[1]
    Nf = N.astype(float)
    flat = Nf.reshape(W, V * V)
    basic = _basic_counterpart(graph)
    if graph.is_basic:
        one = graph.one
        eye = np.eye(V)
        if np.max(np.abs(N[labels.index(graph.vertices[one])] - eye)) != 0:
            rep.fail("N_1 is not the identity")
        # identity row of N_lam is the indicator of lam
        rows = N[:, one, :]
        if not np.array_equal(rows, np.eye(W, dtype=np.int64)):
            rep.fail("identity row of N_lam is not the indicator of lam")
        # Pieri: G_1 N_lam = sum_nu (G_1)_{lam nu} N_nu
        lhs = np.einsum("ab,wbc->wac", graph.G1.astype(float), Nf)
        rhs = (graph.G1.astype(float) @ flat).reshape(W, V, V)
        res = float(np.max(np.abs(lhs - rhs)))
        rep.max_residual = max(rep.max_residual, res)
        if res > tol:
            rep.fail(f"Pieri consistency residual {res:.3e}")
    else:
        bN = fusion_basis(basic).stack().astype(float)
    for i in range(W):
        left = Nf[i] @ Nf.transpose(1, 0, 2).reshape(V, W * V)  # N_i N_mu for all mu
        left = left.reshape(V, W, V).transpose(1, 0, 2)
        right = (Nf.reshape(W * V, V) @ Nf[i]).reshape(W, V, V)
        comm = float(np.max(np.abs(left[i:] - right[i:])))
        if comm > 0:
            rep.fail(f"N{labels[i]} does not commute with some N_mu (max {comm:.3e})")
        if graph.is_basic:
            coeffs = left[:, one, :]  # (W mu, W nu)
        else:
            # N_lam N_mu on the basic graph, read on its identity row
            bl = (bN[i] @ bN.transpose(1, 0, 2).reshape(bN.shape[1], -1)).reshape(bN.shape[1], W, -1)
            coeffs = bl[basic.one].reshape(W, W)
        if np.any(np.abs(coeffs - np.rint(coeffs)) > tol) or np.any(coeffs < -tol):
            rep.fail(f"non-integral or negative closure coefficients for N{labels[i]}")
        recon = (coeffs @ flat).reshape(W, V, V)
        res = float(np.max(np.abs(left - recon))) if W else 0.0
        rep.max_residual = max(rep.max_residual, res)
        if res > tol:
            j = int(np.argmax(np.max(np.abs(left - recon).reshape(W, -1), axis=1)))
            rep.fail(f"closure fails for N{labels[i]} N{labels[j]} (residual {res:.3e})")
    return rep


@dataclass
class NExpansion:
    labels: list
    coeffs: np.ndarray
    residual: float

    def as_dict(self, tol: float = 1e-12) -> dict:
        return {lab: c for lab, c in zip(self.labels, self.coeffs) if abs(c) > tol}


def n_expand(graph: GraphRep, M, reference=None) -> NExpansion:
    """Coefficients of ``M`` in the fusion basis and the reconstruction residual.

    Basic graphs: ``z_lam = M[1, lam]``.  ADE graphs: ``z`` is read off
    ``reference``, the matching matrix on the basic graph with the same ``n``.
    """
    M = np.asarray(M)
    if M.shape != (graph.nv, graph.nv):
        raise ValueError(f"matrix shape {M.shape} does not match graph with {graph.nv} vertices")
    fb = fusion_basis(graph)
    if graph.is_basic:
        z = M[graph.one, :].copy()
    else:
        if reference is None:
            raise ValueError("ADE expansion needs the basic-graph counterpart as reference")
        basic = _basic_for_n(graph.n)
        reference = np.asarray(reference)
        if reference.shape != (basic.nv, basic.nv):
            raise ValueError("reference matrix does not match the basic graph A^(n)")
        z = reference[basic.one, :].copy()
    N = fb.stack()
    recon = np.tensordot(z, N, axes=1)
    resid = float(np.max(np.abs(M - recon))) if M.size else 0.0
    return NExpansion(labels=fb.labels, coeffs=z, residual=resid)


def expand_partitions(graph: GraphRep, combo: dict) -> np.ndarray:
    """Fusion-basis coefficients of ``sum_p c_p N_p`` over arbitrary partitions.

    Partitions outside the alcove are handled by the determinant itself
    (they evaluate to a signed fusion matrix or zero).  Basic graphs only.
    """
    if not graph.is_basic:
        raise ValueError("partition expansion is defined on basic graphs")
    fb = fusion_basis(graph)
    dtype = np.result_type(*[type(c) for c in combo.values()], float) if combo else float
    z = np.zeros(graph.nv, dtype=dtype)
    for part, c in combo.items():
        z = z + c * fb.partition_matrix(part)[graph.one, :]
    return z
