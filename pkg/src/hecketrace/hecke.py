"""Face weights, path spaces and the Hecke generators acting on them.

Operators are scipy CSR matrices on an enumerated path basis; matrix element
``[p', p]`` is ``<p'| U_i |p>`` so products compose right to left.
"""
from __future__ import annotations

import itertools
import math
import weakref
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
import scipy.sparse as sp

from .graphs import GraphRep
from .weights import pair_e_diff, sine_table

__all__ = [
    "DEFAULT_CAP",
    "DiamondError",
    "PathSpaceTooLarge",
    "DiamondTable",
    "PathSpace",
    "RelationReport",
    "edge_direction",
    "diamond",
    "diamond_table",
    "path_count",
    "build_path_space",
    "build_generator",
    "generators",
    "reduced_word",
    "quotient_terms",
    "hecke_word",
    "quotient_operator",
    "check_hecke_relations",
    "check_quotient",
    "default_starts",
]

DEFAULT_CAP = 2_000_000
NEG_TOL = 1e-12


class DiamondError(ValueError):
    """Missing adjacency, or a negative product under the square root."""


class PathSpaceTooLarge(RuntimeError):
    def __init__(self, dim: int, cap: int):
        super().__init__(f"path space of dimension {dim} exceeds cap {cap}")
        self.dim = dim
        self.cap = cap


def edge_direction(graph: GraphRep, a: int, b: int) -> int:
    """The ``alpha`` with ``b = a + e_alpha`` on a basic graph."""
    if not graph.G1[a, b]:
        raise DiamondError(f"no edge {graph.vertices[a]} -> {graph.vertices[b]}")
    diff = [y - x for x, y in zip(graph.vertices[a], graph.vertices[b])]
    k = graph.k
    for alpha in range(1, k + 1):
        e = [0] * (k - 1)
        if alpha <= k - 1:
            e[alpha - 1] += 1
        if alpha >= 2:
            e[alpha - 2] -= 1
        if e == diff:
            return alpha
    raise DiamondError(f"edge {graph.vertices[a]} -> {graph.vertices[b]} is not along an e-vector")


def _basic_diag(graph: GraphRep, a: int, b: int, c: int) -> float:
    alpha = edge_direction(graph, a, b)
    beta = edge_direction(graph, b, c)
    if alpha == beta:
        return 0.0
    table = sine_table(graph.n)
    two_n = 2 * graph.n
    num = table[pair_e_diff(graph.rl, alpha, beta, graph.vertices[b]) % two_n]
    den = table[pair_e_diff(graph.rl, alpha, beta, graph.vertices[a]) % two_n]
    return float(num / den)


def diamond(graph: GraphRep, a: int, b: int, b2: int, c: int) -> float:
    """Face weight for the diamond ``a -> b -> c``, ``a -> b2 -> c`` (vertex indices).

    Basic graphs: ``(1 - delta_{alpha beta}) s_{ab}(b) / s_{ab}(a)`` on the
    diagonal, and the positive geometric mean of the two diagonal weights
    off it.  ADE graphs: ``delta_{ac} sqrt(psi_b psi_b2) / psi_a``.
    """
    G1 = graph.G1
    if not (G1[a, b] and G1[b, c] and G1[a, b2] and G1[b2, c]):
        raise DiamondError(f"vertices ({a}, {b}, {b2}, {c}) do not form a diamond")
    if not graph.is_basic:
        if a != c:
            return 0.0
        psi = graph.psi
        return float(math.sqrt(psi[b] * psi[b2]) / psi[a])
    d1 = _basic_diag(graph, a, b, c)
    if b == b2:
        return d1
    prod = d1 * _basic_diag(graph, a, b2, c)
    if prod < -NEG_TOL:
        raise DiamondError(f"negative product {prod:.3e} under the root at ({a}, {b}, {b2}, {c})")
    return math.sqrt(max(prod, 0.0))


@dataclass(frozen=True, eq=False)
class DiamondTable:
    """Diagonal weights ``D[a, b, c]`` and the middle vertices of each ``(a, c)``."""

    D: np.ndarray  # (V, V, V), zero off the allowed triples
    mids: np.ndarray  # (V, V, M) middle vertices, -1 padded
    triples: np.ndarray  # (T, 3) all walks a -> b -> c, lexicographic

    def weight(self, a, b, b2, c):
        """Vectorised off-diagonal weight ``sqrt(D[a,b,c] D[a,b2,c])``."""
        d1 = self.D[a, b, c]
        d2 = self.D[a, b2, c]
        return np.where(b == b2, d1, np.sqrt(np.clip(d1 * d2, 0.0, None)))


_TABLES: "weakref.WeakKeyDictionary[GraphRep, DiamondTable]" = weakref.WeakKeyDictionary()


def diamond_table(graph: GraphRep) -> DiamondTable:
    tab = _TABLES.get(graph)
    if tab is not None:
        return tab
    V = graph.nv
    D = np.zeros((V, V, V))
    trip = []
    for a in range(V):
        for b in graph.out_neighbors[a]:
            for c in graph.out_neighbors[b]:
                D[a, b, c] = diamond(graph, a, b, b, c)
                trip.append((a, b, c))
    trip = np.array(trip, dtype=np.int64).reshape(-1, 3)
    width = int(max(1, (graph.G1 @ graph.G1).max()))
    mids = np.full((V, V, width), -1, dtype=np.int64)
    fill = np.zeros((V, V), dtype=np.int64)
    for a, b, c in trip:
        mids[a, c, fill[a, c]] = b
        fill[a, c] += 1
    for arr in (D, mids, trip):
        arr.setflags(write=False)
    tab = _TABLES[graph] = DiamondTable(D=D, mids=mids, triples=trip)
    return tab


def path_count(graph: GraphRep, L: int) -> np.ndarray:
    """Number of length-``L`` walks between each pair of vertices, ``G_1^L``."""
    return np.linalg.matrix_power(graph.G1, L)


@dataclass(eq=False)
class PathSpace:
    """Length-``L`` walks from ``a0`` (to ``aL``, or to any endpoint if ``None``)."""

    graph: GraphRep
    L: int
    a0: int
    aL: int | None
    paths: np.ndarray = field(repr=False)

    @property
    def dim(self) -> int:
        return self.paths.shape[0]

    @cached_property
    def _keys(self) -> np.ndarray:
        return _void_rows(self.paths)

    def index_of(self, rows) -> np.ndarray:
        """Basis indices of the given walks; ``-1`` where absent."""
        rows = np.atleast_2d(rows)
        if self.dim == 0:
            return np.full(rows.shape[0], -1, dtype=np.int64)
        keys = _void_rows(rows)
        pos = np.searchsorted(self._keys, keys)
        pos = np.minimum(pos, self.dim - 1)
        found = self._keys[pos] == keys
        return np.where(found, pos, -1)

    @cached_property
    def endpoints(self) -> np.ndarray:
        return self.paths[:, -1]


def _void_rows(rows: np.ndarray) -> np.ndarray:
    # big-endian bytes make memcmp order equal lexicographic order
    arr = np.ascontiguousarray(rows, dtype=">u2")
    return arr.view(np.dtype((np.void, arr.dtype.itemsize * arr.shape[1]))).ravel()


def build_path_space(graph: GraphRep, a0: int, aL: int | None, L: int, cap: int = DEFAULT_CAP) -> PathSpace:
    """Enumerate walks in lexicographic (depth-first) order."""
    if L < 1:
        raise ValueError("path length must be >= 1")
    if graph.nv >= 1 << 16:
        raise ValueError("graph too large for the path encoding")
    powers = [np.eye(graph.nv, dtype=np.int64)]
    for _ in range(L):
        powers.append(graph.G1 @ powers[-1])
    dim = int(powers[L][a0].sum() if aL is None else powers[L][a0, aL])
    if dim > cap:
        raise PathSpaceTooLarge(dim, cap)
    csr = sp.csr_matrix(graph.G1)
    indptr, indices = csr.indptr, csr.indices
    walks = np.array([[a0]], dtype=np.int64)
    for t in range(1, L + 1):
        last = walks[:, -1]
        deg = indptr[last + 1] - indptr[last]
        total = int(deg.sum())
        rep = np.repeat(walks, deg, axis=0)
        offs = np.arange(total) - np.repeat(np.cumsum(deg) - deg, deg)
        nxt = indices[np.repeat(indptr[last], deg) + offs]
        if aL is not None:
            keep = powers[L - t][nxt, aL] > 0
            rep, nxt = rep[keep], nxt[keep]
        walks = np.column_stack([rep, nxt])
    assert walks.shape[0] == dim
    return PathSpace(graph=graph, L=L, a0=a0, aL=aL, paths=walks)


def build_generator(ps: PathSpace, i: int, which: str = "U", q: complex | None = None) -> sp.csr_matrix:
    """``U_i`` (real) or ``g_i = q - U_i`` (complex) on the path space."""
    if not 1 <= i <= ps.L - 1:
        raise ValueError(f"generator index {i} outside 1..{ps.L - 1}")
    tab = diamond_table(ps.graph)
    P = ps.paths
    a, b, c = P[:, i - 1], P[:, i], P[:, i + 1]
    rows, cols, vals = [], [], []
    col_idx = np.arange(ps.dim)
    for t in range(tab.mids.shape[2]):
        b2 = tab.mids[a, c, t]
        ok = b2 >= 0
        if not ok.any():
            continue
        moved = P[ok].copy()
        moved[:, i] = b2[ok]
        idx = ps.index_of(moved)
        if np.any(idx < 0):
            raise AssertionError("generator maps outside the path space")
        w = tab.weight(a[ok], b[ok], b2[ok], c[ok])
        rows.append(idx)
        cols.append(col_idx[ok])
        vals.append(w)
    rows = np.concatenate(rows) if rows else np.zeros(0, dtype=np.int64)
    cols = np.concatenate(cols) if cols else np.zeros(0, dtype=np.int64)
    vals = np.concatenate(vals) if vals else np.zeros(0)
    U = sp.csr_matrix((vals, (rows, cols)), shape=(ps.dim, ps.dim))
    U.eliminate_zeros()
    if which == "U":
        return U
    if which == "g":
        q = ps.graph.q if q is None else q
        return (q * sp.identity(ps.dim, format="csr", dtype=complex) - U).tocsr()
    raise ValueError(f"unknown generator kind {which!r}")


def generators(ps: PathSpace, which: str = "U") -> list:
    """``[None, X_1, ..., X_{L-1}]`` so that index ``i`` gives ``X_i``."""
    return [None] + [build_generator(ps, i, which) for i in range(1, ps.L)]


def reduced_word(perm) -> list[int]:
    """A reduced word ``[j_1, ...]`` with ``perm = s_{j_1} s_{j_2} ...`` (bubble sort).

    ``perm`` is a tuple of images of ``0..m-1``; ``s_j`` swaps positions
    ``j`` and ``j+1`` (1-based).
    """
    arr = list(perm)
    swaps = []
    m = len(arr)
    for end in range(m - 1, 0, -1):
        for j in range(end):
            if arr[j] > arr[j + 1]:
                arr[j], arr[j + 1] = arr[j + 1], arr[j]
                swaps.append(j + 1)
    return swaps[::-1]


def quotient_terms(k: int) -> list[tuple[int, list[int]]]:
    """``(length, word)`` for every permutation of ``S_{k+1}``."""
    out = []
    for perm in itertools.permutations(range(k + 1)):
        word = reduced_word(perm)
        out.append((len(word), word))
    return out


def hecke_word(ps: PathSpace, word, gens=None, which: str = "g") -> sp.csr_matrix:
    """Ordered product of generators ``X_{w_1} X_{w_2} ...``."""
    if gens is None:
        gens = generators(ps, which)
    out = sp.identity(ps.dim, format="csr", dtype=gens[1].dtype if len(gens) > 1 else float)
    for j in word:
        out = out @ gens[j]
    return out.tocsr()


def quotient_operator(ps: PathSpace, k: int, offset: int = 0, gens=None) -> sp.csr_matrix:
    """``sum_{sigma in S_{k+1}} (-q)^{-|sigma|} g_sigma`` on slots ``offset+1..offset+k``."""
    if ps.L < k + 1 + offset:
        raise ValueError(f"need L >= {k + 1 + offset} for the S_{k + 1} antisymmetrizer")
    if gens is None:
        gens = generators(ps, "g")
    q = ps.graph.q
    total = sp.csr_matrix((ps.dim, ps.dim), dtype=complex)
    for length, word in quotient_terms(k):
        total = total + (-q) ** (-length) * hecke_word(ps, [j + offset for j in word], gens)
    return total.tocsr()


@dataclass
class RelationReport:
    graph: str
    L: int
    passed: bool = True
    max_residual: float = 0.0
    checked: int = 0
    failures: list = field(default_factory=list)

    def record(self, name: str, resid: float, scale: float, tol: float, **where) -> None:
        scaled = resid / max(1.0, scale)
        self.checked += 1
        self.max_residual = max(self.max_residual, scaled)
        if scaled > tol:
            self.passed = False
            if len(self.failures) < 50:
                self.failures.append({"relation": name, "residual": scaled, **where})


def _maxabs(m) -> float:
    m = m.tocsr() if sp.issparse(m) else m
    if sp.issparse(m):
        return float(np.max(np.abs(m.data))) if m.nnz else 0.0
    return float(np.max(np.abs(m))) if m.size else 0.0


def default_starts(graph: GraphRep, limit: int = 128) -> list[int]:
    """All start vertices for small graphs, else an evenly spread deterministic sample."""
    if graph.nv <= limit:
        return list(range(graph.nv))
    picks = set(np.linspace(0, graph.nv - 1, 32).round().astype(int).tolist())
    if graph.is_basic:
        picks.add(graph.one)
    return sorted(picks)


def check_hecke_relations(graph: GraphRep, L: int, starts=None, tol: float = 1e-9,
                          cap: int = DEFAULT_CAP) -> RelationReport:
    """Hecke relations in both the ``U`` and the ``g`` presentation.

    Each start vertex contributes the path space of all walks from it, which
    is the direct sum of the fixed-endpoint spaces.
    """
    rep = RelationReport(graph=graph.name, L=L)
    beta, q = graph.beta, graph.q
    if starts is None:
        starts = default_starts(graph)
    for a0 in starts:
        ps = build_path_space(graph, a0, None, L, cap)
        if ps.dim == 0 or L < 2:
            continue
        U = generators(ps, "U")
        g = generators(ps, "g")
        eye = sp.identity(ps.dim, format="csr")
        for i in range(1, L):
            sq = U[i] @ U[i]
            rep.record("U_i^2 = beta U_i", _maxabs(sq - beta * U[i]), _maxabs(sq), tol, i=i, a0=a0)
            gsq = g[i] @ g[i]
            rep.record("g_i^2 = 1 + (q - 1/q) g_i", _maxabs(gsq - eye - (q - 1 / q) * g[i]),
                       _maxabs(gsq), tol, i=i, a0=a0)
            for j in range(i + 2, L):
                rep.record("[U_i, U_j] = 0", _maxabs(U[i] @ U[j] - U[j] @ U[i]), 1.0, tol, i=i, j=j, a0=a0)
                rep.record("[g_i, g_j] = 0", _maxabs(g[i] @ g[j] - g[j] @ g[i]), 1.0, tol, i=i, j=j, a0=a0)
            if i + 1 < L:
                lhs = U[i] @ U[i + 1] @ U[i] - U[i]
                rhs = U[i + 1] @ U[i] @ U[i + 1] - U[i + 1]
                rep.record("U_i U_i+1 U_i - U_i = U_i+1 U_i U_i+1 - U_i+1", _maxabs(lhs - rhs),
                           max(_maxabs(lhs), _maxabs(rhs)), tol, i=i, a0=a0)
                blhs = g[i] @ g[i + 1] @ g[i]
                brhs = g[i + 1] @ g[i] @ g[i + 1]
                rep.record("g_i g_i+1 g_i = g_i+1 g_i g_i+1", _maxabs(blhs - brhs),
                           max(_maxabs(blhs), _maxabs(brhs)), tol, i=i, a0=a0)
    return rep


def check_quotient(graph: GraphRep, L: int, starts=None, tol: float = 1e-9,
                   cap: int = DEFAULT_CAP, k: int | None = None) -> RelationReport:
    """The ``S_{k+1}`` q-antisymmetrizer vanishes at every slot offset."""
    k = graph.k if k is None else k
    if L < k + 1:
        raise ValueError(f"quotient relation needs L >= k+1 = {k + 1}")
    rep = RelationReport(graph=graph.name, L=L)
    if starts is None:
        starts = default_starts(graph)
    for a0 in starts:
        ps = build_path_space(graph, a0, None, L, cap)
        if ps.dim == 0:
            continue
        g = generators(ps, "g")
        for offset in range(L - k):
            X = quotient_operator(ps, k, offset, g)
            rep.record("antisymmetrizer", _maxabs(X), 1.0, tol, offset=offset, a0=a0)
    return rep
