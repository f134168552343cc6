"""Benchmark the numba kernels against the numpy/python fallbacks.

The two hot kernels are the subset DP behind the ordering oracle and the
shift-permutation sweep.  Both implementations are importable side by side,
so this script times them directly; the package-level selection between them
is controlled by the ``PATHLAB_NO_NUMBA`` environment variable.

Run:  python benchmarks/bench_kernels.py [--m 18 20] [--repeat 3]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from pathlab import _kernels
from pathlab.paths import single_edge
from pathlab.shifts import _prep_arrays


def _single_edge_conflicts(m: int):
    offsets = np.arange(m + 1, dtype=np.int64)
    conflict = np.zeros(m, np.int64)
    for j in range(m):
        mask = 0
        if j > 0:
            mask |= 1 << (j - 1)
        if j + 1 < m:
            mask |= 1 << (j + 1)
        conflict[j] = mask
    return conflict, offsets


def bench_subset_dp(m: int, repeat: int) -> dict:
    conflict, offsets = _single_edge_conflicts(m)
    rows = {}
    if _kernels.USING_NUMBA:
        _kernels._max_ordering_nb(conflict, offsets, m, _kernels._DEBRUIJN_TABLE)  # warm jit
        t0 = time.perf_counter()
        for _ in range(repeat):
            got_nb = _kernels._max_ordering_nb(conflict, offsets, m, _kernels._DEBRUIJN_TABLE)
        rows["numba"] = (time.perf_counter() - t0) / repeat
    t0 = time.perf_counter()
    for _ in range(repeat):
        got_np = _kernels._max_ordering_np(conflict, offsets, m)
    rows["numpy"] = (time.perf_counter() - t0) / repeat
    expected = (m + 1) // 2
    assert got_np == expected
    if "numba" in rows:
        assert got_nb == expected
    return rows


def bench_shift_sweep(m: int, repeat: int) -> dict:
    seq = [single_edge(i) for i in range(1, m + 1)]
    comp_vmask, comp_len, offsets, gmask = _prep_arrays(seq)
    rows = {}
    if _kernels.USING_NUMBA:
        _kernels._shift_sweep_nb(comp_vmask, comp_len, offsets, gmask, m, 0)  # warm jit
        t0 = time.perf_counter()
        for _ in range(repeat):
            out_nb = _kernels._shift_sweep_nb(comp_vmask, comp_len, offsets, gmask, m, 0)
        rows["numba"] = (time.perf_counter() - t0) / repeat
    t0 = time.perf_counter()
    for _ in range(repeat):
        out_py = _kernels._shift_sweep_py(comp_vmask, comp_len, offsets, gmask, m, 0)
    rows["python"] = (time.perf_counter() - t0) / repeat
    if "numba" in rows:
        assert np.array_equal(out_nb, out_py)
    return rows


def main() -> None:
    parser = argparse.ArgumentParser()
    parser.add_argument("--m", type=int, nargs="+", default=[14, 18, 20])
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()
    print(f"numba available and enabled: {_kernels.USING_NUMBA}")
    print(f"{'kernel':<14}{'m':>4}{'numba (s)':>12}{'fallback (s)':>14}{'speedup':>9}")
    for m in args.m:
        rows = bench_subset_dp(m, args.repeat)
        nb = rows.get("numba")
        np_t = rows["numpy"]
        ratio = f"{np_t / nb:8.1f}x" if nb else "      --"
        print(f"{'subset-dp':<14}{m:>4}{(f'{nb:12.4f}' if nb else '          --')}{np_t:>14.4f}{ratio}")
    for m in args.m:
        rows = bench_shift_sweep(m, args.repeat)
        nb = rows.get("numba")
        py_t = rows["python"]
        ratio = f"{py_t / nb:8.1f}x" if nb else "      --"
        print(f"{'shift-sweep':<14}{m:>4}{(f'{nb:12.4f}' if nb else '          --')}{py_t:>14.4f}{ratio}")


if __name__ == "__main__":
    main()
