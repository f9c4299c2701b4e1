"""Plane graphs as rotation systems, with certified faces.

A graph comes in as one clockwise neighbour order per vertex.  Faces are
traced from the rotations at construction time and the Euler identity
|V| - |E| + |F| = 2 is required to hold; that certifies the embedding
has genus zero without ever touching coordinates.

Vertices are dense ids 0..n-1.  Graphs are simple and connected.  The
degree bound 5 is NOT enforced here; callers that need it check it.

Rotation text format::

    # optional comment lines anywhere
    n m
    0: 1 4 2
    1: 0 2
    ...

one line per vertex, neighbours in clockwise order.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import (
    AsymmetricRotation,
    Disconnected,
    NotPlanarEmbedding,
    ParseError,
    UnknownVertex,
)

__all__ = [
    "Face",
    "VertexMetrics",
    "PlaneGraph",
    "from_rotation_text",
    "metrics",
    "distance",
]


@dataclass(frozen=True)
class Face:
    """One face of the embedding.

    Attributes:
        index: dense face id.
        darts: boundary as a cyclic tuple of (tail, head) arcs.
        length: number of boundary darts (counts bridges twice).
    """

    index: int
    darts: tuple[tuple[int, int], ...]
    length: int

    @property
    def vertices(self) -> tuple[int, ...]:
        return tuple(t for t, _ in self.darts)


@dataclass(frozen=True)
class VertexMetrics:
    """Local structure report for one vertex.

    n3/n4/n5 count neighbours of that degree; m3/m4/m5plus count
    DISTINCT incident faces of length 3, 4, >= 5.  n2 is the sorted
    two-hop neighbourhood (distance 1 or 2, the vertex excluded) and
    d2 its size.
    """

    d: int
    n3: int
    n4: int
    n5: int
    m3: int
    m4: int
    m5plus: int
    n2: tuple[int, ...]
    d2: int


# ======================================================================
# construction
# ======================================================================


class PlaneGraph:
    """Immutable plane graph defined by clockwise rotations."""

    __slots__ = (
        "n",
        "m",
        "rotations",
        "deg",
        "rot_start",
        "rot_flat",
        "dart_tail",
        "mirror",
        "face_of_dart",
        "face_lens",
        "num_faces",
        "_face_start_dart",
        "_edge_set",
        "_dart_of",
        "_n2_indptr",
        "_n2_flat",
        "_d2",
        "_corner_fid",
        "_n3",
        "_n4",
        "_n5",
        "_m3",
        "_m4",
        "_m5p",
        "_faces_cache",
    )

    def __init__(self, rotations) -> None:
        rots = [tuple(int(u) for u in row) for row in rotations]
        n = len(rots)
        if n == 0:
            raise ParseError("empty vertex set")
        for v, row in enumerate(rots):
            for u in row:
                if not 0 <= u < n:
                    raise ParseError(f"vertex {v} lists out-of-range neighbour {u}")
                if u == v:
                    raise ParseError(f"self-loop at vertex {v}")
            if len(set(row)) != len(row):
                raise ParseError(f"repeated neighbour in rotation of vertex {v}")
        for v, row in enumerate(rots):
            for u in row:
                if v not in rots[u]:
                    raise AsymmetricRotation(
                        f"{v} lists {u} but {u} does not list {v}"
                    )

        self.n = n
        self.rotations = tuple(rots)
        deg = np.array([len(row) for row in rots], np.int32)
        self.deg = deg
        total = int(deg.sum())
        if total % 2:  # cannot happen once symmetric, kept as a guard
            raise AsymmetricRotation("odd dart count")
        self.m = total // 2

        rot_start = np.zeros(n + 1, np.int32)
        np.cumsum(deg, out=rot_start[1:])
        rot_flat = np.fromiter(
            (u for row in rots for u in row), np.int32, count=total
        )
        dart_tail = np.repeat(np.arange(n, dtype=np.int32), deg)
        self.rot_start = rot_start
        self.rot_flat = rot_flat
        self.dart_tail = dart_tail

        self._edge_set = frozenset(
            (v, u) if v < u else (u, v)
            for v, row in enumerate(rots)
            for u in row
        )
        self._dart_of = {
            (int(dart_tail[p]), int(rot_flat[p])): p for p in range(total)
        }

        self._check_connected()

        if total == 0:
            # single vertex: one face of length 0 keeps Euler at 2
            self.mirror = np.empty(0, np.int32)
            self.face_of_dart = np.empty(0, np.int32)
            self.face_lens = np.zeros(1, np.int32)
            self.num_faces = 1
            self._face_start_dart = np.zeros(1, np.int32)
        else:
            self.mirror = _kernels.build_mirror(dart_tail, rot_flat)
            succ = _kernels.face_successors(rot_start, rot_flat, self.mirror, deg)
            face_of, lens = _kernels.trace_orbits(succ)
            self.face_of_dart = face_of
            self.face_lens = lens
            self.num_faces = int(lens.shape[0])
            first = np.full(self.num_faces, -1, np.int32)
            for p in range(total - 1, -1, -1):
                first[face_of[p]] = p
            self._face_start_dart = first

        if self.n - self.m + self.num_faces != 2:
            raise NotPlanarEmbedding(
                f"Euler check failed: {self.n} - {self.m} + {self.num_faces} != 2"
            )

        self._build_tables()
        self._faces_cache = None

    def _check_connected(self) -> None:
        if self.n == 1:
            return
        seen = np.zeros(self.n, bool)
        seen[0] = True
        stack = [0]
        rots = self.rotations
        while stack:
            v = stack.pop()
            for u in rots[v]:
                if not seen[u]:
                    seen[u] = True
                    stack.append(u)
        if not seen.all():
            raise Disconnected(f"{int((~seen).sum())} vertices unreachable from 0")

    def _build_tables(self) -> None:
        n = self.n
        if self.m == 0:
            self._n2_indptr = np.zeros(2, np.int32)
            self._n2_flat = np.empty(0, np.int32)
            self._d2 = np.zeros(1, np.int32)
            self._corner_fid = np.empty(0, np.int32)
            for name in ("_n3", "_n4", "_n5", "_m3", "_m4", "_m5p"):
                setattr(self, name, np.zeros(1, np.int32))
            return
        indptr, flat = _kernels.two_hop_csr(self.rot_start, self.rot_flat, n)
        self._n2_indptr = indptr
        self._n2_flat = flat
        self._d2 = (indptr[1:] - indptr[:-1]).astype(np.int32)

        # corner i of v sits between rotation neighbours i and i+1; its
        # face is the one traced by the dart v -> rot[v][i+1]
        base = self.rot_start[self.dart_tail]
        pos = np.arange(2 * self.m, dtype=np.int32) - base
        nxt = base + (pos + 1) % self.deg[self.dart_tail]
        self._corner_fid = self.face_of_dart[nxt]

        ndeg = self.deg[self.rot_flat]
        starts = self.rot_start[:-1]
        self._n3 = np.add.reduceat((ndeg == 3).astype(np.int32), starts)
        self._n4 = np.add.reduceat((ndeg == 4).astype(np.int32), starts)
        self._n5 = np.add.reduceat((ndeg == 5).astype(np.int32), starts)

        m3 = np.zeros(n, np.int32)
        m4 = np.zeros(n, np.int32)
        m5p = np.zeros(n, np.int32)
        fl = self.face_lens
        fo = self.face_of_dart
        rs = self.rot_start
        for v in range(n):
            fids = set(fo[rs[v] : rs[v + 1]].tolist())
            for f in fids:
                ln = fl[f]
                if ln == 3:
                    m3[v] += 1
                elif ln == 4:
                    m4[v] += 1
                elif ln >= 5:
                    m5p[v] += 1
        self._m3, self._m4, self._m5p = m3, m4, m5p

    # ==================================================================
    # basic queries
    # ==================================================================

    def _check_vertex(self, v: int) -> None:
        if not 0 <= v < self.n:
            raise UnknownVertex(f"vertex {v} not in [0, {self.n})")

    def degree(self, v: int) -> int:
        self._check_vertex(v)
        return int(self.deg[v])

    def neighbors(self, v: int) -> tuple[int, ...]:
        self._check_vertex(v)
        return self.rotations[v]

    def has_edge(self, u: int, v: int) -> bool:
        key = (u, v) if u < v else (v, u)
        return key in self._edge_set

    def edges(self) -> list[tuple[int, int]]:
        return sorted(self._edge_set)

    def dart(self, u: int, v: int) -> int:
        """Flat index of the arc u -> v."""
        try:
            return self._dart_of[(u, v)]
        except KeyError:
            raise UnknownVertex(f"no edge {u}-{v}") from None

    def faces(self) -> list[Face]:
        if self._faces_cache is None:
            if self.m == 0:
                self._faces_cache = [Face(0, (), 0)]
            else:
                out = []
                tail = self.dart_tail
                flat = self.rot_flat
                succ = _kernels.face_successors(
                    self.rot_start, flat, self.mirror, self.deg
                )
                for f in range(self.num_faces):
                    p0 = int(self._face_start_dart[f])
                    darts = []
                    p = p0
                    while True:
                        darts.append((int(tail[p]), int(flat[p])))
                        p = int(succ[p])
                        if p == p0:
                            break
                    out.append(Face(f, tuple(darts), len(darts)))
                self._faces_cache = out
        return self._faces_cache

    def face_length(self, fid: int) -> int:
        return int(self.face_lens[fid])

    @property
    def face_anomalies(self) -> list[int]:
        """Faces of length < 3 (single vertex, bridges, K2); informational."""
        return [f for f in range(self.num_faces) if self.face_lens[f] < 3]

    def corner_face(self, v: int, i: int) -> int:
        """Face id in corner i of v (between rotation neighbours i and i+1)."""
        self._check_vertex(v)
        d = int(self.deg[v])
        return int(self._corner_fid[self.rot_start[v] + (i % d)])

    def corner_faces(self, v: int) -> tuple[int, ...]:
        self._check_vertex(v)
        lo, hi = int(self.rot_start[v]), int(self.rot_start[v + 1])
        return tuple(int(f) for f in self._corner_fid[lo:hi])

    def incident_faces(self, v: int) -> tuple[int, ...]:
        """Distinct faces around v, ascending."""
        self._check_vertex(v)
        if self.deg[v] == 0:
            return (0,)
        lo, hi = int(self.rot_start[v]), int(self.rot_start[v + 1])
        return tuple(sorted(set(self.face_of_dart[lo:hi].tolist())))

    def edge_faces(self, u: int, v: int) -> tuple[int, int]:
        """The two faces at edge uv (equal for a bridge)."""
        return (
            int(self.face_of_dart[self.dart(u, v)]),
            int(self.face_of_dart[self.dart(v, u)]),
        )

    def edge_in_two_triangles(self, u: int, v: int) -> bool:
        f1, f2 = self.edge_faces(u, v)
        return f1 != f2 and self.face_lens[f1] == 3 and self.face_lens[f2] == 3

    def edge_large_face_count(self, u: int, v: int) -> int:
        """How many of the edge's two sides are faces of length >= 5."""
        f1, f2 = self.edge_faces(u, v)
        if f1 == f2:
            return 1 if self.face_lens[f1] >= 5 else 0
        return int(self.face_lens[f1] >= 5) + int(self.face_lens[f2] >= 5)

    # ==================================================================
    # distance structure
    # ==================================================================

    def n2(self, v: int) -> tuple[int, ...]:
        self._check_vertex(v)
        lo, hi = int(self._n2_indptr[v]), int(self._n2_indptr[v + 1])
        return tuple(int(u) for u in self._n2_flat[lo:hi])

    def d2(self, v: int) -> int:
        self._check_vertex(v)
        return int(self._d2[v])

    def n2_csr(self) -> tuple[np.ndarray, np.ndarray]:
        return self._n2_indptr, self._n2_flat

    def within_two(self, u: int, v: int) -> bool:
        if u == v:
            return True
        return _kernels.csr_has(self._n2_indptr, self._n2_flat, u, v)

    def distance(self, u: int, v: int) -> int | None:
        """BFS distance, None when unreachable (cannot happen: connected)."""
        self._check_vertex(u)
        self._check_vertex(v)
        if u == v:
            return 0
        dist = {u: 0}
        frontier = [u]
        while frontier:
            nxt = []
            for x in frontier:
                for y in self.rotations[x]:
                    if y not in dist:
                        dist[y] = dist[x] + 1
                        if y == v:
                            return dist[y]
                        nxt.append(y)
            frontier = nxt
        return None

    def girth(self) -> int | None:
        """Length of a shortest cycle, None for forests."""
        best: int | None = None
        for root in range(self.n):
            dist = {root: 0}
            parent = {root: -1}
            frontier = [root]
            while frontier:
                nxt = []
                for x in frontier:
                    for y in self.rotations[x]:
                        if y not in dist:
                            dist[y] = dist[x] + 1
                            parent[y] = x
                            nxt.append(y)
                        elif parent[x] != y and parent[y] != x:
                            cyc = dist[x] + dist[y] + 1
                            if best is None or cyc < best:
                                best = cyc
                frontier = nxt
                if best is not None and frontier and 2 * dist[frontier[0]] >= best:
                    break
        return best

    def metrics(self, v: int) -> VertexMetrics:
        self._check_vertex(v)
        return VertexMetrics(
            d=int(self.deg[v]),
            n3=int(self._n3[v]),
            n4=int(self._n4[v]),
            n5=int(self._n5[v]),
            m3=int(self._m3[v]),
            m4=int(self._m4[v]),
            m5plus=int(self._m5p[v]),
            n2=self.n2(v),
            d2=int(self._d2[v]),
        )

    # ==================================================================
    # derived graphs
    # ==================================================================

    def dual(self) -> "PlaneGraph":
        """Planar dual; requires the dual to be simple (no bridges, no
        two faces sharing more than one edge)."""
        if self.m == 0:
            raise NotPlanarEmbedding("dual of a single vertex is not simple")
        succ = _kernels.face_successors(
            self.rot_start, self.rot_flat, self.mirror, self.deg
        )
        rots = []
        for f in range(self.num_faces):
            p0 = int(self._face_start_dart[f])
            row = []
            p = p0
            while True:
                row.append(int(self.face_of_dart[self.mirror[p]]))
                p = int(succ[p])
                if p == p0:
                    break
            rots.append(row)
        return PlaneGraph(rots)

    # ==================================================================
    # serialization
    # ==================================================================

    def to_rotation_text(self) -> str:
        lines = [f"{self.n} {self.m}"]
        for v, row in enumerate(self.rotations):
            lines.append(f"{v}: " + " ".join(str(u) for u in row) if row else f"{v}:")
        return "\n".join(lines) + "\n"

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "m": self.m,
            "rotations": [list(row) for row in self.rotations],
        }

    def to_json_text(self) -> str:
        return json.dumps(self.to_json(), separators=(",", ":"))

    @classmethod
    def from_json(cls, obj) -> "PlaneGraph":
        if isinstance(obj, (str, bytes)):
            obj = json.loads(obj)
        try:
            n = obj["n"]
            m = obj["m"]
            rots = obj["rotations"]
        except (KeyError, TypeError) as exc:
            raise ParseError(f"bad graph JSON: {exc}") from exc
        g = cls(rots)
        if g.n != n or g.m != m:
            raise ParseError(
                f"declared n={n} m={m} but rotations give n={g.n} m={g.m}"
            )
        return g

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return f"PlaneGraph(n={self.n}, m={self.m}, f={self.num_faces})"

    def __eq__(self, other) -> bool:
        return isinstance(other, PlaneGraph) and self.rotations == other.rotations

    def __hash__(self) -> int:
        return hash(self.rotations)


# ======================================================================
# module-level helpers
# ======================================================================


def from_rotation_text(text: str) -> PlaneGraph:
    """Parse the rotation text format.

    Raises:
        ParseError: malformed document.
        AsymmetricRotation: one-sided adjacency.
        Disconnected: more than one component.
        NotPlanarEmbedding: Euler check failed.
    """
    lines = []
    for raw in text.splitlines():
        s = raw.split("#", 1)[0].strip()
        if s:
            lines.append(s)
    if not lines:
        raise ParseError("empty document")
    head = lines[0].split()
    if len(head) != 2:
        raise ParseError(f"header must be 'n m', got {lines[0]!r}")
    try:
        n, m = int(head[0]), int(head[1])
    except ValueError as exc:
        raise ParseError(f"bad header {lines[0]!r}") from exc
    if n <= 0 or m < 0:
        raise ParseError(f"bad sizes n={n} m={m}")
    if len(lines) - 1 != n:
        raise ParseError(f"expected {n} rotation lines, got {len(lines) - 1}")
    rows: dict[int, list[int]] = {}
    for ln in lines[1:]:
        if ":" not in ln:
            raise ParseError(f"missing ':' in rotation line {ln!r}")
        left, right = ln.split(":", 1)
        try:
            v = int(left.strip())
            nbrs = [int(t) for t in right.split()]
        except ValueError as exc:
            raise ParseError(f"bad rotation line {ln!r}") from exc
        if v in rows:
            raise ParseError(f"vertex {v} listed twice")
        rows[v] = nbrs
    if sorted(rows) != list(range(n)):
        raise ParseError("rotation lines do not cover 0..n-1 exactly")
    g = PlaneGraph([rows[v] for v in range(n)])
    if g.m != m:
        raise ParseError(f"declared m={m} but rotations give m={g.m}")
    return g


def metrics(g: PlaneGraph, v: int) -> VertexMetrics:
    return g.metrics(v)


def distance(g: PlaneGraph, u: int, v: int) -> int | None:
    return g.distance(u, v)
