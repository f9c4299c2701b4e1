"""Named test graphs and a seeded random plane-graph generator.

All named graphs are hand-pinned rotation systems (or cheap derivations
such as the dual of another named graph).  The five ``fig*`` graphs are
icosahedron surgeries: deleting a few edges opens larger faces around a
chosen vertex so that it lands in one of the special degree-5 classes.

``random_plane`` grows a random triangulation by repeated in-face vertex
insertion, then deletes edges at vertices of degree 6+ until the degree
bound 5 holds, and keeps the largest component.  Same (n, seed) gives a
byte-identical graph.
"""

from __future__ import annotations

import random

from .errors import GenerationFailed, UnknownName
from .plane_graph import PlaneGraph

__all__ = [
    "NAMED_GRAPHS",
    "DESIGNATED_VERTEX",
    "named",
    "random_plane",
]


# ======================================================================
# fixed rotation tables
# ======================================================================


def _cycle(n: int) -> list[list[int]]:
    return [[(i + 1) % n, (i - 1) % n] for i in range(n)]


def _prism(k: int) -> list[list[int]]:
    # outer ring 0..k-1 clockwise, inner ring k..2k-1, spokes i -- i+k
    rots: list[list[int]] = []
    for i in range(k):
        rots.append([(i + 1) % k, i + k, (i - 1) % k])
    for i in range(k):
        rots.append([k + (i + 1) % k, k + (i - 1) % k, i])
    return rots


def _icosahedron() -> list[list[int]]:
    # north pole 0, upper ring 1..5, lower ring 6..10, south pole 11
    rots: list[list[int]] = [[1, 2, 3, 4, 5]]
    for j in range(5):
        prev_u = 1 + (j - 1) % 5
        next_u = 1 + (j + 1) % 5
        rots.append([0, prev_u, 6 + (j - 1) % 5, 6 + j, next_u])
    for k in range(5):
        prev_l = 6 + (k - 1) % 5
        next_l = 6 + (k + 1) % 5
        rots.append([11, next_l, 1 + (k + 1) % 5, 1 + k, prev_l])
    # the south pole winds against the north pole
    rots.append([10, 9, 8, 7, 6])
    return rots


def _delete_edges(rots: list[list[int]], edges) -> list[list[int]]:
    out = [list(r) for r in rots]
    for u, v in edges:
        out[u].remove(v)
        out[v].remove(u)
    return out


# fig1a/fig1b: vertex 0 keeps four triangle corners, the fifth corner
# becomes a 4-face (one deleted edge) or a 5-face (two deleted edges).
# fig2a/2b/2c: vertex 4 keeps two or three triangle corners around the
# doctored vertex 0 and the remaining corners are opened as needed.
_FIG_SURGERY: dict[str, list[tuple[int, int]]] = {
    "fig1a": [(1, 2)],
    "fig1b": [(1, 2), (1, 6)],
    "fig2a": [(1, 2), (3, 8), (9, 5), (5, 10)],
    "fig2b": [(1, 2), (1, 6), (8, 9), (9, 5)],
    "fig2c": [(1, 2), (3, 8), (8, 9), (9, 5)],
}

# Vertex whose classification each fig graph exhibits.
DESIGNATED_VERTEX: dict[str, int] = {
    "fig1a": 0,
    "fig1b": 0,
    "fig2a": 4,
    "fig2b": 4,
    "fig2c": 4,
}


def _build(name: str) -> PlaneGraph:
    if name == "k1":
        return PlaneGraph([[]])
    if name == "k2":
        return PlaneGraph([[1], [0]])
    if name == "k4":
        return PlaneGraph([[1, 2, 3], [0, 3, 2], [0, 1, 3], [0, 2, 1]])
    if name == "c5":
        return PlaneGraph(_cycle(5))
    if name == "c6":
        return PlaneGraph(_cycle(6))
    if name == "cube":
        return PlaneGraph(_prism(4))
    if name == "pentagonal_prism":
        return PlaneGraph(_prism(5))
    if name == "icosahedron":
        return PlaneGraph(_icosahedron())
    if name == "dodecahedron":
        return PlaneGraph(_icosahedron()).dual()
    if name == "star5":
        return PlaneGraph([[1, 2, 3, 4, 5], [0], [0], [0], [0], [0]])
    if name in _FIG_SURGERY:
        return PlaneGraph(_delete_edges(_icosahedron(), _FIG_SURGERY[name]))
    raise UnknownName(f"no graph named {name!r}")


NAMED_GRAPHS: tuple[str, ...] = (
    "k1",
    "k2",
    "k4",
    "c5",
    "c6",
    "cube",
    "dodecahedron",
    "icosahedron",
    "pentagonal_prism",
    "star5",
    "fig1a",
    "fig1b",
    "fig2a",
    "fig2b",
    "fig2c",
)


def named(name: str) -> PlaneGraph:
    """Build a named graph.

    Raises:
        UnknownName: name not in NAMED_GRAPHS.
    """
    if name not in NAMED_GRAPHS:
        raise UnknownName(f"no graph named {name!r}")
    return _build(name)


# ======================================================================
# random generation
# ======================================================================


def _grow_triangulation(n: int, rng: random.Random):
    rots: list[list[int]] = [[1, 2], [2, 0], [0, 1]]
    faces: list[tuple[int, int, int]] = [(0, 1, 2), (0, 2, 1)]
    while len(rots) < n:
        a, b, c = faces[rng.randrange(len(faces))]
        w = len(rots)
        # w sits inside (a,b,c); splitting keeps everything triangular
        rots[a].insert(rots[a].index(c) + 1, w)
        rots[b].insert(rots[b].index(a) + 1, w)
        rots[c].insert(rots[c].index(b) + 1, w)
        rots.append([a, c, b])
        fi = faces.index((a, b, c))
        faces[fi] = (a, b, w)
        faces.append((b, c, w))
        faces.append((c, a, w))
    return rots


def _trim_to_degree_five(rots: list[list[int]]) -> None:
    n = len(rots)
    while True:
        v = -1
        for i in range(n):
            if len(rots[i]) >= 6:
                v = i
                break
        if v < 0:
            return
        # drop the edge toward the heaviest neighbour, smallest id on ties
        u = max(rots[v], key=lambda t: (len(rots[t]), -t))
        rots[v].remove(u)
        rots[u].remove(v)


def _largest_component(rots: list[list[int]]):
    n = len(rots)
    comp = [-1] * n
    nc = 0
    for s in range(n):
        if comp[s] >= 0:
            continue
        stack = [s]
        comp[s] = nc
        while stack:
            x = stack.pop()
            for y in rots[x]:
                if comp[y] < 0:
                    comp[y] = nc
                    stack.append(y)
        nc += 1
    sizes = [0] * nc
    for c in comp:
        sizes[c] += 1
    best = max(range(nc), key=lambda c: (sizes[c], -c))
    keep = [v for v in range(n) if comp[v] == best]
    remap = {old: new for new, old in enumerate(keep)}
    return [[remap[u] for u in rots[old]] for old in keep]


def random_plane(n: int, seed: int) -> PlaneGraph:
    """Random connected simple plane graph with max degree <= 5.

    The result has between n/2 and n vertices.  Deterministic in
    (n, seed), byte-identical across runs.

    Raises:
        GenerationFailed: postconditions unreachable within the retry
            budget (does not happen for n >= 3 in practice).
    """
    if n < 1:
        raise GenerationFailed(f"need n >= 1, got {n}")
    if n == 1:
        return PlaneGraph([[]])
    if n == 2:
        return PlaneGraph([[1], [0]])
    for attempt in range(64):
        rng = random.Random(f"{seed}:{attempt}")
        rots = _grow_triangulation(n, rng)
        _trim_to_degree_five(rots)
        kept = _largest_component(rots)
        if 2 * len(kept) >= n:
            return PlaneGraph(kept)
    raise GenerationFailed(f"no admissible graph for n={n} seed={seed}")
