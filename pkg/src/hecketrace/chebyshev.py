"""Chebyshev polynomials of the second kind, ``P_l(beta)``.

``P_l(2 cos t) = sin((l+1) t) / sin(t)``, extended downwards by the
three-term recurrence to ``P_{-1} = 0`` and ``P_{-2} = -1``.  The letter U
is avoided on purpose: it names the Hecke generators elsewhere.
"""
from __future__ import annotations

from functools import lru_cache
from math import comb

import numpy as np

__all__ = ["cheb_eval", "cheb_coeffs", "cheb_matrix"]


def cheb_eval(ell: int, beta):
    """Value of ``P_ell`` at ``beta`` via ``beta P_l = P_{l+1} + P_{l-1}``.

    ``beta`` may be a float, complex, or numpy array.
    """
    if ell < -2:
        raise ValueError(f"P_l defined for l >= -2, got {ell}")
    if ell == -2:
        return -1.0 + 0 * beta
    prev, cur = -1.0 + 0 * beta, 0.0 * beta  # P_{-2}, P_{-1}
    for _ in range(ell + 1):
        prev, cur = cur, beta * cur - prev
    return cur


@lru_cache(maxsize=None)
def _coeffs(m: int) -> tuple[int, ...]:
    c = [0] * (m + 1)
    for p in range(m // 2 + 1):
        c[m - 2 * p] = (-1) ** p * comb(m - p, p)
    return tuple(c)


def cheb_coeffs(m: int) -> np.ndarray:
    """Integer coefficients of ``P_m`` in ascending powers of ``beta``.

    ``cheb_coeffs(2)`` is ``[-1, 0, 1]``, i.e. ``beta**2 - 1``.
    """
    if m < 0:
        raise ValueError(f"coefficient form needs m >= 0, got {m}")
    return np.array(_coeffs(m), dtype=np.int64)


def cheb_matrix(m: int, G1: np.ndarray) -> np.ndarray:
    """``P_m(G1)`` for a square integer matrix, computed by the recurrence."""
    G1 = np.asarray(G1)
    eye = np.eye(G1.shape[0], dtype=G1.dtype)
    if m == -2:
        return -eye
    prev, cur = -eye, np.zeros_like(G1)
    for _ in range(m + 1):
        prev, cur = cur, G1 @ cur - prev
    return cur
