"""Compare the numba and numpy edge-state contraction kernels.

Usage: python3 benchmarks/bench_kernels.py [--repeat 5]
"""
import argparse
import time

import numpy as np

from hecketrace import _kernels
from hecketrace.graphs import basic_graph
from hecketrace.traces import _transfer, _weights

CASES = [(3, 8, 9), (4, 9, 9), (4, 11, 9), (5, 10, 9)]


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    if not _kernels.HAVE_NUMBA:
        print("numba not available; nothing to compare")
        return
    print(f"{'graph':>16} {'E':>5} {'L':>3} {'kind':>7} {'numpy ms':>10} {'numba ms':>10} {'speedup':>8} {'max diff':>9}")
    for k, n, L in CASES:
        g = basic_graph(k, n)
        tr = _transfer(g)
        for kind in ("Z", "Ztilde"):
            w = _weights(g, kind)
            X0 = np.zeros((g.nv, len(tr.tails)), dtype=w.dtype)
            X0[tr.tails, np.arange(len(tr.tails))] = 1
            args_ = (X0, tr.e_in, tr.e_out, w, L - 1)
            _kernels.contract_numba(*args_)  # compile outside the timing
            t_np, a = best_of(lambda: _kernels.contract_numpy(*args_), args.repeat)
            t_nb, b = best_of(lambda: _kernels.contract_numba(*args_), args.repeat)
            print(f"{g.name:>16} {len(tr.tails):>5} {L:>3} {kind:>7} {1e3 * t_np:>10.2f} {1e3 * t_nb:>10.2f} "
                  f"{t_np / t_nb:>8.2f} {np.max(np.abs(a - b)):>9.1e}")


if __name__ == "__main__":
    main()
