"""Trace matrices ``Z_L`` (of ``U_1...U_{L-1}``) and ``Z~_L`` (of ``g_1...g_{L-1}``).

Each generator in these products changes a different position of the path,
so only diagonal diamond weights survive in the trace and ``(Z_L)_{a0 aL}``
is a weighted walk sum.  The sum is contracted over edge states.  The
explicit operator product on the enumerated path space is kept alongside as
an oracle.
"""
from __future__ import annotations

import re
import weakref
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from . import _kernels
from .graphs import GraphRep
from .hecke import DEFAULT_CAP, PathSpaceTooLarge, build_generator, build_path_space, diamond_table

__all__ = [
    "TraceMatrix",
    "z_trace",
    "ztilde_trace",
    "trace_sequence",
    "edge_trace",
    "partial_trace_edge",
    "oracle_trace",
    "word_trace",
    "block_factorization",
    "markov_average",
    "commutator_residual",
    "parse_word",
]

KINDS = ("Z", "Ztilde")


@dataclass(frozen=True, eq=False)
class TraceMatrix:
    """Square matrix indexed by ``(a_0, a_L)``; real for ``Z``, complex for ``Ztilde``."""

    graph: GraphRep
    L: int
    kind: str
    entries: np.ndarray

    def __array__(self, dtype=None, copy=None):
        return self.entries if dtype is None else self.entries.astype(dtype)

    @property
    def is_complex(self) -> bool:
        return np.iscomplexobj(self.entries)

    def to_dict(self) -> dict:
        M = np.asarray(self.entries, dtype=complex)
        rows = [[[_fmt(z.real), _fmt(z.imag)] for z in row] for row in M]
        return {"graph": self.graph.name, "L": self.L, "kind": self.kind, "matrix": rows}


def _fmt(x: float) -> float:
    x = float(f"{x:.15g}")
    return 0.0 if x == 0 else x


# per-graph edge indexing and transfer weights


@dataclass(frozen=True, eq=False)
class _Transfer:
    tails: np.ndarray
    heads: np.ndarray
    e_in: np.ndarray
    e_out: np.ndarray
    D: np.ndarray  # diagonal diamond weight per triple


_TRANSFERS: "weakref.WeakKeyDictionary[GraphRep, _Transfer]" = weakref.WeakKeyDictionary()
_SEQ: "weakref.WeakKeyDictionary[GraphRep, dict]" = weakref.WeakKeyDictionary()


def _transfer(graph: GraphRep) -> _Transfer:
    tr = _TRANSFERS.get(graph)
    if tr is None:
        edges = graph.edges
        eid = np.full((graph.nv, graph.nv), -1, dtype=np.int64)
        eid[edges[:, 0], edges[:, 1]] = np.arange(len(edges))
        tab = diamond_table(graph)
        a, b, c = tab.triples.T
        tr = _Transfer(tails=edges[:, 0], heads=edges[:, 1], e_in=eid[a, b], e_out=eid[b, c], D=tab.D[a, b, c])
        _TRANSFERS[graph] = tr
    return tr


def _weights(graph: GraphRep, kind: str) -> np.ndarray:
    D = _transfer(graph).D
    if kind == "Z":
        return D
    if kind == "Ztilde":
        return graph.q - D.astype(complex)
    raise ValueError(f"unknown trace kind {kind!r}; expected one of {KINDS}")


def _heads_matrix(graph: GraphRep, dtype) -> np.ndarray:
    tr = _transfer(graph)
    H = np.zeros((len(tr.heads), graph.nv), dtype=dtype)
    H[np.arange(len(tr.heads)), tr.heads] = 1
    return H


def trace_sequence(graph: GraphRep, Lmax: int, kind: str = "Z") -> list[np.ndarray]:
    """``[M_1, ..., M_Lmax]`` for ``kind`` in ``("Z", "Ztilde")``, cached per graph."""
    if Lmax < 1:
        raise ValueError("L must be >= 1")
    w = _weights(graph, kind)
    cache = _SEQ.setdefault(graph, {})
    seq, X = cache.get(kind, ([], None))
    tr = _transfer(graph)
    if not seq:
        first = graph.G1.astype(w.dtype)
        first.setflags(write=False)
        seq = [first]
        X = np.zeros((graph.nv, len(tr.tails)), dtype=w.dtype)
        X[tr.tails, np.arange(len(tr.tails))] = 1
    if len(seq) < Lmax:
        H = _heads_matrix(graph, w.dtype)
        while len(seq) < Lmax:
            X = _kernels.contract(X, tr.e_in, tr.e_out, w, 1)
            M = X @ H
            M.setflags(write=False)
            seq.append(M)
    cache[kind] = (seq, X)
    return seq[:Lmax]


def z_trace(graph: GraphRep, L: int) -> TraceMatrix:
    """``(Z_L)_{a0 aL} = sum over walks of prod_i D(a_{i-1}, a_i, a_{i+1})``; ``Z_1 = G_1``."""
    return TraceMatrix(graph, L, "Z", trace_sequence(graph, L, "Z")[L - 1])


def ztilde_trace(graph: GraphRep, L: int) -> TraceMatrix:
    """Same walk sum with ``q - D`` per factor; ``Z~_1 = G_1``."""
    return TraceMatrix(graph, L, "Ztilde", trace_sequence(graph, L, "Ztilde")[L - 1])


def edge_trace(graph: GraphRep, L: int, kind: str = "Z") -> np.ndarray:
    """``(E, V)`` array: walk sums with the first edge ``(a_0, a_1)`` fixed."""
    tr = _transfer(graph)
    w = _weights(graph, kind)
    E = len(tr.tails)
    if L == 1:
        out = np.zeros((E, graph.nv), dtype=w.dtype)
        out[np.arange(E), tr.heads] = 1
        return out
    X = _kernels.contract(np.eye(E, dtype=w.dtype), tr.e_in, tr.e_out, w, L - 1)
    return X @ _heads_matrix(graph, w.dtype)


def partial_trace_edge(graph: GraphRep, L: int, a0: int, a1: int, aL: int, kind: str = "Z"):
    """Walk sum with ``a_0``, ``a_1`` and ``a_L`` fixed; summing over ``a_1`` gives ``Z_L``."""
    if not graph.G1[a0, a1]:
        raise ValueError(f"({a0}, {a1}) is not an edge")
    tr = _transfer(graph)
    e = int(np.flatnonzero((tr.tails == a0) & (tr.heads == a1))[0])
    return edge_trace(graph, L, kind)[e, aL].item()


def commutator_residual(graph: GraphRep, M) -> float:
    """``max_l ||[M, G_l]||_max``."""
    M = np.asarray(M)
    return max(float(np.max(np.abs(M @ g - g @ M))) for g in graph.G)


def markov_average(graph: GraphRep, M):
    """``psi^T M psi`` with the unit-norm Perron vector."""
    M = np.asarray(M)
    if M.shape != (graph.nv, graph.nv):
        raise ValueError(f"matrix shape {M.shape} does not match graph with {graph.nv} vertices")
    val = graph.psi @ M @ graph.psi
    return val.item()


# explicit operator products


def _spaces(graph: GraphRep, L: int, a0: int, max_dim: int, cap: int):
    """Path spaces from ``a0``; one space for all endpoints when it is small enough."""
    counts = np.linalg.matrix_power(graph.G1, L)[a0]
    if counts.sum() <= max(max_dim, 1) * 4 and counts.sum() <= cap:
        yield build_path_space(graph, a0, None, L, cap), counts <= max_dim
        return
    for aL in np.flatnonzero((counts > 0) & (counts <= max_dim)):
        mask = np.zeros(graph.nv, dtype=bool)
        mask[aL] = True
        yield build_path_space(graph, a0, int(aL), L, cap), mask


def _block_traces(ps, op: sp.spmatrix, nv: int) -> np.ndarray:
    diag = op.diagonal()
    ends = ps.endpoints
    if np.iscomplexobj(diag):
        return np.bincount(ends, diag.real, nv) + 1j * np.bincount(ends, diag.imag, nv)
    return np.bincount(ends, diag, nv)


def _product(ps, factors) -> sp.csr_matrix:
    dtype = complex if any(kind == "g" for kind, _ in factors) else float
    out = sp.identity(ps.dim, format="csr", dtype=dtype)
    for kind, i in factors:
        out = out @ build_generator(ps, i, kind)
    return out.tocsr()


def oracle_trace(graph: GraphRep, L: int, kind: str = "Z", max_dim: int = 10_000, cap: int = DEFAULT_CAP):
    """Brute-force ``Z_L`` or ``Z~_L`` from sparse operator products.

    Returns ``(matrix, mask)``; ``mask`` marks the endpoint pairs whose path
    space has dimension at most ``max_dim`` and were therefore evaluated.
    """
    gen = {"Z": "U", "Ztilde": "g"}[kind]
    V = graph.nv
    out = np.zeros((V, V), dtype=complex if kind == "Ztilde" else float)
    mask = np.zeros((V, V), dtype=bool)
    if L == 1:
        return graph.G1.astype(out.dtype), np.ones((V, V), dtype=bool)
    factors = [(gen, i) for i in range(1, L)]
    for a0 in range(V):
        for ps, m in _spaces(graph, L, a0, max_dim, cap):
            if ps.dim == 0:
                continue
            vals = _block_traces(ps, _product(ps, factors), V)
            out[a0, m] = vals[m]
            mask[a0] |= m
    counts = np.linalg.matrix_power(graph.G1, L)
    mask |= counts == 0
    return out, mask


_WORD_ITEM = re.compile(r"([UuGg])_?(\d+)")


def parse_word(word, kind: str = "U") -> list[tuple[str, int]]:
    """Normalise a word to ``[(kind, index), ...]``.

    Items may be ints (using ``kind``), ``(kind, i)`` pairs or strings such
    as ``"U2"`` or ``"g_3"``; a single string may hold several items.
    """
    if isinstance(word, str):
        word = _WORD_ITEM.findall(word)
        word = [(k, int(i)) for k, i in word]
    out = []
    for item in word:
        if isinstance(item, (int, np.integer)):
            out.append((kind, int(item)))
        elif isinstance(item, str):
            m = _WORD_ITEM.fullmatch(item.strip())
            if not m:
                raise ValueError(f"bad word item {item!r}")
            out.append((m.group(1), int(m.group(2))))
        else:
            k, i = item
            out.append((k, int(i)))
    norm = []
    for k, i in out:
        k = {"u": "U", "U": "U", "g": "g", "G": "g"}.get(k)
        if k is None:
            raise ValueError(f"unknown generator kind in {word!r}")
        norm.append((k, i))
    return norm


def word_trace(graph: GraphRep, L: int, word, kind: str = "U", cap: int = DEFAULT_CAP) -> TraceMatrix:
    """Trace of an arbitrary generator word, per endpoint pair, by explicit products."""
    factors = parse_word(word, kind)
    for _, i in factors:
        if not 1 <= i <= L - 1:
            raise ValueError(f"generator index {i} outside 1..{L - 1}")
    V = graph.nv
    counts = np.linalg.matrix_power(graph.G1, L)
    if int(counts.max(initial=0)) > cap:
        raise PathSpaceTooLarge(int(counts.max()), cap)
    out = np.zeros((V, V), dtype=complex if any(k == "g" for k, _ in factors) else float)
    for a0 in range(V):
        if counts[a0].sum() <= cap:
            spaces = [(build_path_space(graph, a0, None, L, cap), slice(None))]
        else:
            spaces = [(build_path_space(graph, a0, int(b), L, cap), b) for b in np.flatnonzero(counts[a0])]
        for ps, sel in spaces:
            vals = _block_traces(ps, _product(ps, factors), V)
            out[a0, sel] = vals[sel]
    return TraceMatrix(graph, L, "word", out)


def block_factorization(graph: GraphRep, L: int, indices, Z=None) -> np.ndarray:
    """Trace of ``U_{i_1} U_{i_2} ...`` (strictly increasing) as a product of blocks.

    A run of ``m`` consecutive indices contributes ``Z_{m+1}``; ``g`` skipped
    indices between runs contribute ``G_1^{g-1}``, and the free steps before
    the first and after the last index contribute powers of ``G_1``.
    ``Z`` optionally supplies ``[Z_1, Z_2, ...]``; traced values are used otherwise.
    """
    idx = [int(i) for i in indices]
    if any(b <= a for a, b in zip(idx, idx[1:])):
        raise ValueError("indices must be strictly increasing")
    if idx and not (1 <= idx[0] and idx[-1] <= L - 1):
        raise ValueError(f"indices must lie in 1..{L - 1}")
    G1 = graph.G1.astype(float)
    if not idx:
        return np.linalg.matrix_power(G1, L)
    runs = [[idx[0]]]
    for i in idx[1:]:
        if i == runs[-1][-1] + 1:
            runs[-1].append(i)
        else:
            runs.append([i])
    if Z is None:
        Z = trace_sequence(graph, max(len(r) for r in runs) + 1, "Z")
    out = np.linalg.matrix_power(G1, runs[0][0] - 1)
    for j, run in enumerate(runs):
        out = out @ Z[len(run)]
        if j + 1 < len(runs):
            gap = runs[j + 1][0] - run[-1] - 1
            out = out @ np.linalg.matrix_power(G1, gap - 1)
    return out @ np.linalg.matrix_power(G1, L - idx[-1] - 1)
