"""Time the jit kernels against their pure-python fallbacks.

Run with ``python3 benchmarks/bench_kernels.py``.  The same inputs go
through both code paths (the fallback is selected with the
``PLANECOLOR_NO_NUMBA`` environment flag), so the table below is a
direct apples-to-apples comparison.
"""

from __future__ import annotations

import os
import time

import numpy as np

from planecolor import _kernels
from planecolor.generators import random_plane

SIZES = [50, 100, 200]
REPEATS = 5


def timed(fn, *args, repeats: int = REPEATS) -> float:
    fn(*args)  # warm up (jit compilation happens here)
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def bench_graph(n: int) -> list[tuple[str, float, float]]:
    g = random_plane(n, seed=42)
    succ = _kernels.face_successors(g.rot_start, g.rot_flat, g.mirror, g.deg)
    indptr, indices = g.n2_csr()
    order = np.argsort(-np.diff(indptr)).astype(np.int32)

    cases = [
        ("trace_orbits", _kernels.trace_orbits, (succ,)),
        ("two_hop_csr", _kernels.two_hop_csr, (g.rot_start, g.rot_flat, g.n)),
        (
            "solve_k_coloring(k=16)",
            _kernels.solve_k_coloring,
            (indptr, indices, order, g.n, 16, 10**7),
        ),
    ]

    rows = []
    for label, fn, args in cases:
        os.environ.pop("PLANECOLOR_NO_NUMBA", None)
        jit = timed(fn, *args)
        os.environ["PLANECOLOR_NO_NUMBA"] = "1"
        py = timed(fn, *args)
        os.environ.pop("PLANECOLOR_NO_NUMBA", None)
        rows.append((label, jit, py))
    return rows


def main() -> None:
    if not _kernels.use_numba():
        print("numba unavailable; only the fallback path will be timed")
    header = f"{'kernel':<26} {'n':>4} {'jit (ms)':>10} {'python (ms)':>12} {'speedup':>8}"
    print(header)
    print("-" * len(header))
    for n in SIZES:
        for label, jit, py in bench_graph(n):
            speed = py / jit if jit > 0 else float("inf")
            print(
                f"{label:<26} {n:>4} {jit * 1e3:>10.3f} {py * 1e3:>12.3f} {speed:>7.1f}x"
            )


if __name__ == "__main__":
    main()
