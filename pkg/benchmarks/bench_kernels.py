"""Compiled kernels against their interpreted originals.

    python3 benchmarks/bench_kernels.py [--repeat 5]

Both paths receive identical inputs (including the pre-drawn random tapes), so
their outputs are compared for equality before timing is reported.
"""
from __future__ import annotations

import argparse
import time

import numpy as np

from hyperchroma import kernels
from hyperchroma._accel import JIT_ENABLED
from hyperchroma.process import triangle_hypergraph, uniform_random
from hyperchroma.resample import rankk_color_count
from hyperchroma.rng import make_rng


def best_of(fn, repeat: int) -> float:
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def greedy_case(n: int):
    G = triangle_hypergraph(n)
    arrays = G.csr()
    order = make_rng(1).permutation(G.vertex_count).astype(np.int64)
    return f"greedy_is triangle_of_K{n} (N={G.vertex_count})", lambda f: f(G.vertex_count, *arrays, order)


def resample_case(n: int, m: int):
    G = uniform_random(n, m, 3, make_rng(2))
    r = max(2, rankk_color_count(G) // 4)  # few colors so the resampler has work to do
    ep, ev, ip, ie = G.csr()
    rng = make_rng(3)
    start = rng.integers(r, size=n).astype(np.int64)
    tape = rng.integers(r, size=2_000_000).astype(np.int64)

    def run(f):
        colors = start.copy()
        viol = kernels.mono_flags.py_func(ep, ev, colors)
        return f(ep, ev, ip, ie, colors, viol, tape, 0, 0, 0, 200_000), colors

    return f"mono_resample n={n} m={m} r={r}", run


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    print(f"numba enabled: {JIT_ENABLED}")
    cases = [
        (greedy_case(60), kernels.greedy_is),
        (greedy_case(120), kernels.greedy_is),
        (resample_case(300, 2000), kernels.mono_resample),
    ]
    print(f"{'case':<48} {'python s':>10} {'jit s':>10} {'speedup':>8}")
    for (label, run), kern in cases:
        slow = kern.py_func
        ref, out = run(slow), run(kern)  # also warms up the compiled path
        same = all(np.array_equal(np.asarray(a), np.asarray(b)) for a, b in zip(_flat(ref), _flat(out)))
        if not same:
            raise SystemExit(f"{label}: compiled and interpreted outputs differ")
        t_py = best_of(lambda: run(slow), max(1, args.repeat // 2))
        t_jit = best_of(lambda: run(kern), args.repeat)
        print(f"{label:<48} {t_py:>10.4f} {t_jit:>10.4f} {t_py / t_jit:>8.1f}")


def _flat(value):
    if isinstance(value, tuple):
        for v in value:
            yield from _flat(v)
    else:
        yield value


if __name__ == "__main__":
    main()
