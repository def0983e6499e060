"""Shifted truncated weight lattice of sl(k) and its integer pairings.

Weights are stored as tuples of shifted Dynkin labels ``(l_1, ..., l_{k-1})``
with every ``l_a >= 1`` and ``sum(l) <= n - 1``.  The identity weight is
``(1, ..., 1)``.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

__all__ = [
    "RankLevel",
    "Weight",
    "identity_weight",
    "is_admissible",
    "enumerate_weights",
    "e_vector",
    "shift",
    "pair_e_diff",
    "s_value",
    "sine_table",
    "weight_to_partition",
    "partition_to_weight",
    "reduce_partition",
    "conjugate",
]

Weight = tuple[int, ...]


@dataclass(frozen=True)
class RankLevel:
    """Rank parameter ``k`` of sl(k) and cutoff ``n`` (``q = exp(i pi / n)``)."""

    k: int
    n: int

    def __post_init__(self):
        if int(self.k) != self.k or self.k < 2:
            raise ValueError(f"k must be an integer >= 2, got {self.k!r}")
        if int(self.n) != self.n or self.n < self.k + 1:
            raise ValueError(f"n must be an integer >= k+1 = {self.k + 1}, got {self.n!r}")

    @property
    def q(self) -> complex:
        return complex(math.cos(math.pi / self.n), math.sin(math.pi / self.n))

    @property
    def beta(self) -> float:
        return 2.0 * math.cos(math.pi / self.n)

    @property
    def level(self) -> int:
        return self.n - self.k


def identity_weight(rl: RankLevel) -> Weight:
    return (1,) * (rl.k - 1)


def is_admissible(rl: RankLevel, labels) -> bool:
    labels = tuple(labels)
    return (
        len(labels) == rl.k - 1
        and all(x >= 1 for x in labels)
        and sum(labels) <= rl.n - 1
    )


def enumerate_weights(rl: RankLevel) -> list[Weight]:
    """All admissible weights, lexicographically ordered.

    There are ``binomial(n-1, k-1)`` of them.
    """
    top = rl.n - 1 - (rl.k - 2)
    out = [
        w
        for w in itertools.product(range(1, top + 1), repeat=rl.k - 1)
        if sum(w) <= rl.n - 1
    ]
    return out


@lru_cache(maxsize=None)
def _e_vectors(k: int) -> tuple[Weight, ...]:
    vecs = []
    for alpha in range(1, k + 1):
        v = [0] * (k - 1)
        if alpha <= k - 1:
            v[alpha - 1] += 1
        if alpha >= 2:
            v[alpha - 2] -= 1
        vecs.append(tuple(v))
    return tuple(vecs)


def e_vector(rl: RankLevel, alpha: int) -> Weight:
    """Dynkin-label components of ``e_alpha`` (1-based direction index)."""
    _check_direction(rl, alpha)
    return _e_vectors(rl.k)[alpha - 1]


def shift(rl: RankLevel, b, alpha: int) -> Weight:
    """``b + e_alpha`` (no admissibility check)."""
    e = e_vector(rl, alpha)
    return tuple(x + y for x, y in zip(b, e))


def _check_direction(rl: RankLevel, alpha: int) -> None:
    if not 1 <= alpha <= rl.k:
        raise IndexError(f"direction index {alpha} outside 1..{rl.k}")


def pair_e_diff(rl: RankLevel, alpha: int, beta: int, b) -> int:
    """Integer pairing ``(e_alpha - e_beta, b)``.

    With ``(e_alpha, Lambda_a) = [alpha <= a] - a/k`` the fractional parts
    cancel, leaving ``sum_a b_a ([alpha <= a] - [beta <= a])``.
    """
    _check_direction(rl, alpha)
    _check_direction(rl, beta)
    if alpha == beta:
        return 0
    lo, hi = min(alpha, beta), max(alpha, beta)
    # labels a in [lo, hi) contribute with sign +1 if alpha < beta
    total = sum(b[lo - 1 : hi - 1])
    return total if alpha < beta else -total


@lru_cache(maxsize=None)
def sine_table(n: int) -> np.ndarray:
    """``sin(pi m / n)`` for ``m = 0 .. 2n-1``; index with ``m % (2n)``."""
    m = np.arange(2 * n)
    table = np.sin(np.pi * m / n)
    # exact zeros at the walls keep sign tests clean
    table[0] = 0.0
    table[n] = 0.0
    table.setflags(write=False)
    return table


def s_value(rl: RankLevel, alpha: int, beta: int, b) -> float:
    """``sin(pi (e_alpha - e_beta, b) / n)``."""
    m = pair_e_diff(rl, alpha, beta, b)
    return float(sine_table(rl.n)[m % (2 * rl.n)])


def conjugate(partition) -> tuple[int, ...]:
    parts = [p for p in partition if p > 0]
    if not parts:
        return ()
    return tuple(sum(1 for p in parts if p > j) for j in range(parts[0]))


def reduce_partition(partition, k: int) -> tuple[int, ...] | None:
    """Delete height-``k`` columns; ``None`` if a column is taller than ``k``."""
    parts = [p for p in partition if p > 0]
    if any(parts[i] < parts[i + 1] for i in range(len(parts) - 1)):
        raise ValueError(f"not a partition: {tuple(partition)}")
    if len(parts) > k:
        return None
    if len(parts) == k:
        drop = parts[-1]
        parts = [p - drop for p in parts if p - drop > 0]
    return tuple(parts)


def weight_to_partition(rl: RankLevel, lam) -> tuple[int, ...]:
    """Row lengths ``row_i = sum_{a >= i} (lam_a - 1)``, zero rows dropped."""
    if not is_admissible(rl, lam):
        raise ValueError(f"weight {tuple(lam)} not admissible for k={rl.k}, n={rl.n}")
    m = [x - 1 for x in lam]
    rows = [sum(m[i:]) for i in range(rl.k - 1)]
    return tuple(r for r in rows if r > 0)


def partition_to_weight(rl: RankLevel, partition) -> Weight:
    """Inverse of :func:`weight_to_partition` after height-``k`` column deletion.

    The result may lie outside the alcove (level exceeded); check with
    :func:`is_admissible` if that matters.
    """
    red = reduce_partition(partition, rl.k)
    if red is None or len(red) >= rl.k:
        raise ValueError(f"partition {tuple(partition)} has more than {rl.k} rows")
    rows = list(red) + [0] * (rl.k - len(red))
    return tuple(rows[a] - rows[a + 1] + 1 for a in range(rl.k - 1))
