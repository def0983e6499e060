"""Basic graphs A^(n) of sl(k), ADE Dynkin diagrams, and Perron-Frobenius data."""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from scipy.sparse.csgraph import connected_components

from .chebyshev import cheb_eval
from .weights import RankLevel, enumerate_weights, identity_weight, e_vector

__all__ = [
    "GraphRep",
    "PerronError",
    "basic_graph",
    "ade_graph",
    "make_graph",
    "perron_vector",
    "COXETER",
    "fundamental_qdim",
]


class PerronError(RuntimeError):
    """Power iteration did not reach the requested residual."""


@dataclass(frozen=True, eq=False)
class GraphRep:
    """A graph carrying a Hecke representation on its paths.

    ``G[l]`` is the fused adjacency for ``l = 0..k`` (``G[0] = G[k] = I``);
    use :meth:`Gl` to get the zero matrix for ``l > k``.
    """

    rl: RankLevel
    kind: str
    vertices: tuple
    G: tuple
    psi: np.ndarray
    eigenvalues: tuple = field(default=())

    @property
    def k(self) -> int:
        return self.rl.k

    @property
    def n(self) -> int:
        return self.rl.n

    @property
    def q(self) -> complex:
        return self.rl.q

    @property
    def beta(self) -> float:
        return self.rl.beta

    @property
    def nv(self) -> int:
        return len(self.vertices)

    @property
    def G1(self) -> np.ndarray:
        return self.G[1]

    @property
    def is_basic(self) -> bool:
        return self.kind == "basic"

    @property
    def name(self) -> str:
        if self.is_basic:
            return f"basic(k={self.k},n={self.n})"
        return self.kind

    @cached_property
    def index(self) -> dict:
        return {v: i for i, v in enumerate(self.vertices)}

    @cached_property
    def one(self) -> int:
        """Index of the identity weight (basic graphs only)."""
        if not self.is_basic:
            raise AttributeError("identity vertex is only defined for basic graphs")
        return self.index[identity_weight(self.rl)]

    def Gl(self, ell: int) -> np.ndarray:
        if 0 <= ell <= self.k:
            return self.G[ell]
        return np.zeros_like(self.G[0])

    @cached_property
    def out_neighbors(self) -> tuple:
        return tuple(tuple(np.flatnonzero(row)) for row in self.G1)

    @cached_property
    def edges(self) -> np.ndarray:
        """``(E, 2)`` array of ``(tail, head)`` pairs, lexicographic."""
        return np.argwhere(self.G1 > 0).astype(np.int64)

    def to_dict(self) -> dict:
        if self.is_basic:
            verts = [list(v) for v in self.vertices]
        else:
            verts = list(self.vertices)
        return {
            "kind": "basic" if self.is_basic else f"ade:{self.kind}",
            "k": self.k,
            "n": self.n,
            "vertices": verts,
            "G": [g.astype(int).tolist() for g in self.G],
            "psi": [float(f"{x:.15g}") for x in self.psi],
        }


def perron_vector(G1, *, tol: float = 1e-13, max_iter: int = 200_000):
    """Perron vector and eigenvalue of an irreducible nonnegative matrix.

    Power iteration runs on ``I + G1``: the shift removes the periodicity of
    bipartite and k-partite graphs.  Returns ``(psi, mu)`` with ``psi > 0``,
    unit Euclidean norm, ``G1 @ psi = mu * psi``.
    """
    A = np.asarray(G1, dtype=float)
    m = A.shape[0]
    ncomp, _ = connected_components(A > 0, directed=True, connection="strong")
    if ncomp != 1:
        raise PerronError(f"matrix is reducible ({ncomp} strong components)")
    M = A + np.eye(m)
    psi = np.full(m, 1.0 / np.sqrt(m))
    for _ in range(max_iter):
        nxt = M @ psi
        nxt /= np.linalg.norm(nxt)
        if np.max(np.abs(nxt - psi)) <= tol:
            psi = nxt
            break
        psi = nxt
    else:
        raise PerronError(f"power iteration did not converge in {max_iter} steps")
    if psi[0] < 0:
        psi = -psi
    mu = float(psi @ (A @ psi))
    if np.any(psi <= 0):
        raise PerronError("Perron vector has non-positive entries; graph reducible?")
    resid = np.max(np.abs(A @ psi - mu * psi))
    if resid > 1e-10 * max(1.0, mu):
        raise PerronError(f"Perron residual {resid:.3e} too large")
    return psi, mu


def _finish(rl, kind, vertices, G) -> GraphRep:
    psi, _ = perron_vector(G[1])
    eig = tuple(float(psi @ (g @ psi)) for g in G)
    return GraphRep(rl=rl, kind=kind, vertices=tuple(vertices), G=tuple(G), psi=psi, eigenvalues=eig)


def basic_graph(k: int | RankLevel, n: int | None = None) -> GraphRep:
    """The truncated weight lattice with fused adjacencies ``G_0..G_k``.

    ``(G_l)_{lam,mu} = 1`` iff ``mu = lam + sum_{a in S} e_a`` for an
    ``l``-subset ``S`` of directions and ``mu`` admissible.
    """
    rl = k if isinstance(k, RankLevel) else RankLevel(k, n)
    verts = enumerate_weights(rl)
    index = {v: i for i, v in enumerate(verts)}
    m = len(verts)
    evecs = [np.array(e_vector(rl, a)) for a in range(1, rl.k + 1)]
    G = []
    for ell in range(rl.k + 1):
        g = np.zeros((m, m), dtype=np.int64)
        shifts = {tuple(sum((evecs[a] for a in S), np.zeros(rl.k - 1, dtype=int)))
                  for S in itertools.combinations(range(rl.k), ell)}
        for i, v in enumerate(verts):
            for s in shifts:
                j = index.get(tuple(x + y for x, y in zip(v, s)))
                if j is not None:
                    g[i, j] = 1
        G.append(g)
    return _finish(rl, "basic", verts, G)


# Coxeter numbers fix n so that 2 cos(pi/n) is the Perron eigenvalue.
COXETER = {"E6": 12, "E7": 18, "E8": 30}


def _ade_edges(series: str, m: int) -> list[tuple[int, int]]:
    if series == "A":
        return [(i, i + 1) for i in range(1, m)]
    if series == "D":
        return [(i, i + 1) for i in range(1, m - 1)] + [(m - 2, m)]
    # E_m: chain 1..m-1 with vertex m attached to vertex 3
    return [(i, i + 1) for i in range(1, m - 1)] + [(3, m)]


def ade_graph(name: str) -> GraphRep:
    """Dynkin diagram ``A_m`` (m>=2), ``D_m`` (m>=4), ``E6``, ``E7``, ``E8`` as a k=2 graph."""
    match = re.fullmatch(r"([ADE])_?(\d+)", name.strip().upper())
    if not match:
        raise ValueError(f"unknown ADE graph {name!r}")
    series, m = match.group(1), int(match.group(2))
    if series == "A" and m >= 2:
        n = m + 1
    elif series == "D" and m >= 4:
        n = 2 * m - 2
    elif series == "E" and m in (6, 7, 8):
        n = COXETER[f"E{m}"]
    else:
        raise ValueError(f"unknown ADE graph {name!r}")
    adj = np.zeros((m, m), dtype=np.int64)
    for a, b in _ade_edges(series, m):
        adj[a - 1, b - 1] = adj[b - 1, a - 1] = 1
    eye = np.eye(m, dtype=np.int64)
    graph = _finish(RankLevel(2, n), f"{series}{m}", range(1, m + 1), [eye, adj, eye.copy()])
    expected = 2 * np.cos(np.pi / n)
    if abs(graph.eigenvalues[1] - expected) > 1e-9:
        raise AssertionError(f"{name}: Perron eigenvalue {graph.eigenvalues[1]} != {expected}")
    return graph


def make_graph(spec) -> GraphRep:
    """``(k, n)`` tuple, ``"k,n"`` string, or ADE name."""
    if isinstance(spec, GraphRep):
        return spec
    if isinstance(spec, tuple):
        return basic_graph(*spec)
    if isinstance(spec, str) and "," in spec:
        k, n = (int(x) for x in spec.split(","))
        return basic_graph(k, n)
    return ade_graph(spec)


def fundamental_qdim(rl: RankLevel, ell: int) -> float:
    """Quantum binomial ``[k choose l]_q``: eigenvalue of ``G_l`` on the Perron vector."""
    val = 1.0
    for j in range(ell):
        val *= cheb_eval(rl.k - 1 - j, rl.beta) / cheb_eval(j, rl.beta)
    return val
