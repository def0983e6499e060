"""Edge-state walk-sum contraction, numba-compiled with a numpy fallback.

A state is an edge ``(a, b)`` of ``G_1``.  One step multiplies the row vector
of edge amplitudes by the transfer ``T[(a,b), (b,c)] = w(a, b, c)``.

Set ``HECKETRACE_DISABLE_NUMBA=1`` to force the numpy path.
"""
from __future__ import annotations

import os

import numpy as np

__all__ = ["BACKEND", "contract", "contract_numpy", "contract_numba", "HAVE_NUMBA"]

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    HAVE_NUMBA = False

_DISABLED = os.environ.get("HECKETRACE_DISABLE_NUMBA", "").strip().lower() not in ("", "0", "false", "no")


def contract_numpy(X0: np.ndarray, e_in: np.ndarray, e_out: np.ndarray, w: np.ndarray, steps: int) -> np.ndarray:
    """Apply ``steps`` transfer steps to the rows of ``X0`` (shape ``(R, E)``)."""
    E = X0.shape[1]
    dtype = np.result_type(X0.dtype, w.dtype)
    T = np.zeros((E, E), dtype=dtype)
    np.add.at(T, (e_in, e_out), w)
    X = X0.astype(dtype, copy=True)
    for _ in range(steps):
        X = X @ T
    return X


if HAVE_NUMBA:

    @njit(cache=True)
    def _contract_jit(X0, e_in, e_out, w, steps):
        R, E = X0.shape
        X = X0.copy()
        Y = np.zeros_like(X)
        for _ in range(steps):
            Y[:, :] = 0
            for t in range(e_in.shape[0]):
                src = e_in[t]
                dst = e_out[t]
                wt = w[t]
                for r in range(R):
                    Y[r, dst] += X[r, src] * wt
            X, Y = Y, X
        return X

    def contract_numba(X0, e_in, e_out, w, steps):
        dtype = np.result_type(X0.dtype, w.dtype)
        return _contract_jit(np.ascontiguousarray(X0, dtype=dtype), e_in.astype(np.int64),
                             e_out.astype(np.int64), w.astype(dtype), int(steps))

else:  # pragma: no cover
    contract_numba = None

if HAVE_NUMBA and not _DISABLED:
    contract = contract_numba
    BACKEND = "numba"
else:
    contract = contract_numpy
    BACKEND = "numpy"
