"""Exact distance-two coloring by backtracking search.

The search runs on the conflict graph (vertices at distance <= 2 are
adjacent), with a static variable order, ascending color choice, the
first vertex pinned to color 1, and forward checking.  A node budget
caps the number of assignments tried; hitting it returns UNKNOWN rather
than a wrong answer.
"""

from __future__ import annotations

import numpy as np

from . import _kernels
from .conflict import Coloring, validate
from .plane_graph import PlaneGraph

__all__ = [
    "INFEASIBLE",
    "UNKNOWN",
    "DEFAULT_BUDGET",
    "color_with_k",
    "chi2_exact",
]

DEFAULT_BUDGET = 10_000_000


class _Sentinel:
    __slots__ = ("name",)

    def __init__(self, name: str) -> None:
        self.name = name

    def __repr__(self) -> str:
        return self.name


INFEASIBLE = _Sentinel("INFEASIBLE")
UNKNOWN = _Sentinel("UNKNOWN")


def _static_order(g: PlaneGraph) -> np.ndarray:
    # most constrained first: descending d2, ties by ascending id
    d2 = np.array([g.d2(v) for v in range(g.n)], np.int64)
    ids = np.arange(g.n, dtype=np.int64)
    return np.lexsort((ids, -d2)).astype(np.int32)


def color_with_k(g: PlaneGraph, k: int, budget: int = DEFAULT_BUDGET):
    """Search for a distance-two coloring with exactly k colors allowed.

    Returns:
        A valid Coloring on success, INFEASIBLE when the search space
        is exhausted, UNKNOWN when the node budget runs out first.
    """
    indptr, indices = g.n2_csr()
    order = _static_order(g)
    status, colors, _nodes = _kernels.solve_k_coloring(
        indptr, indices, order, g.n, k, budget
    )
    if status == _kernels.SOLVE_INFEASIBLE:
        return INFEASIBLE
    if status == _kernels.SOLVE_UNKNOWN:
        return UNKNOWN
    out = Coloring(palette=k, colors={v: int(colors[v]) + 1 for v in range(g.n)})
    report = validate(g, out)
    if not report.valid:  # kernel bug tripwire, not a normal outcome
        raise AssertionError(f"solver produced an invalid coloring: {report}")
    return out


def chi2_exact(g: PlaneGraph, budget: int = DEFAULT_BUDGET):
    """Smallest palette size admitting a distance-two coloring.

    Tries k = max-degree + 1 upward; k = n always succeeds, so the loop
    terminates.  Returns UNKNOWN if any attempt exhausts the budget
    before a feasible k is found.
    """
    if g.n == 1:
        return 1
    lo = int(g.deg.max()) + 1
    for k in range(lo, g.n + 1):
        res = color_with_k(g, k, budget)
        if res is UNKNOWN:
            return UNKNOWN
        if res is not INFEASIBLE:
            return k
    return g.n  # unreachable: k = n is always feasible
