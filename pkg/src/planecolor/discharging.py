"""Charge bookkeeping over vertices and faces, in exact arithmetic.

Initial charge is d(v)-4 on a vertex and len(f)-4 on a face; over any
plane graph the grand total is -8.  Ten local transfer rules then move
charge around without creating or destroying any.  The auditor applies
one static pass of the rules and reports who ends up negative; if
nothing is negative and no reducible configuration exists either, the
engine's core claim would be falsified, which the audit flags loudly.

All amounts are integers scaled by 45, the common denominator of the
rule fractions (1/3 = 15, 1/9 = 5, 1/5 = 9, 1/15 = 3, 2/15 = 6), so
conservation checks are exact integer equality.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .configurations import _Ctx, classify_special, detect
from .errors import EulerIdentityViolated
from .plane_graph import PlaneGraph

__all__ = [
    "DENOM",
    "AMOUNTS",
    "ChargeLedger",
    "TransferRecord",
    "initial_charges",
    "apply_rules",
    "audit",
]

DENOM = 45
TOTAL = -8 * DENOM

THIRD = 15
NINTH = 5
FIFTH = 9
FIFTEENTH = 3
TWO_FIFTEENTHS = 6

AMOUNTS = frozenset({THIRD, NINTH, FIFTH, FIFTEENTH, TWO_FIFTEENTHS})


def _fmt(p: int) -> str:
    return f"{p}/{DENOM}"


@dataclass(frozen=True)
class TransferRecord:
    """One charge movement: rule name, giver, taker, amount in 45ths."""

    rule: str
    source: tuple[str, int]
    sink: tuple[str, int]
    amount: int

    def to_json(self) -> dict:
        return {
            "rule": self.rule,
            "source": list(self.source),
            "sink": list(self.sink),
            "amount": _fmt(self.amount),
        }


@dataclass(frozen=True)
class ChargeLedger:
    """Charges in 45ths for every vertex and face."""

    vertices: tuple[int, ...]
    faces: tuple[int, ...]

    def total(self) -> int:
        return sum(self.vertices) + sum(self.faces)

    def negatives(self) -> list[tuple[str, int, int]]:
        out = [
            ("vertex", v, c) for v, c in enumerate(self.vertices) if c < 0
        ]
        out += [("face", f, c) for f, c in enumerate(self.faces) if c < 0]
        return out

    def to_json(self) -> dict:
        return {
            "vertices": {str(v): _fmt(c) for v, c in enumerate(self.vertices)},
            "faces": {str(f): _fmt(c) for f, c in enumerate(self.faces)},
            "total": _fmt(self.total()),
        }


def initial_charges(g: PlaneGraph) -> ChargeLedger:
    """d-4 per vertex, len-4 per face, scaled by 45.

    Raises:
        EulerIdentityViolated: the grand total is not exactly -8, which
            a plane graph cannot produce.
    """
    verts = tuple(DENOM * (int(d) - 4) for d in g.deg)
    faces = tuple(DENOM * (int(l) - 4) for l in g.face_lens)
    led = ChargeLedger(vertices=verts, faces=faces)
    if led.total() != TOTAL:
        raise EulerIdentityViolated(
            f"initial charges total {_fmt(led.total())}, want {_fmt(TOTAL)}"
        )
    return led


def _distinct_incident_faces(g: PlaneGraph, v: int) -> list[int]:
    return sorted(set(g.corner_faces(v)))


def apply_rules(
    g: PlaneGraph,
) -> tuple[ChargeLedger, list[TransferRecord]]:
    """One static pass of the ten transfer rules.

    Rules fire off the graph's structure alone, so a single pass is
    complete; order is rule-major with ascending ids purely to make the
    record list deterministic.  Returns the final ledger and every
    transfer made.
    """
    led = initial_charges(g)
    vc = list(led.vertices)
    fc = list(led.faces)
    rec: list[TransferRecord] = []
    ctx = _Ctx(g)
    deg = g.deg
    flen = g.face_lens

    def move(rule: str, src: tuple[str, int], dst: tuple[str, int], amt: int):
        arr = vc if src[0] == "vertex" else fc
        arr[src[1]] -= amt
        arr = vc if dst[0] == "vertex" else fc
        arr[dst[1]] += amt
        rec.append(TransferRecord(rule, src, dst, amt))

    faces = g.faces()

    # R1: every vertex pays 1/3 to each incident 3-face
    for f in faces:
        if f.length != 3:
            continue
        for v in sorted(f.vertices):
            move("R1", ("vertex", v), ("face", f.index), THIRD)

    # R2: every 5-vertex pays 1/9 to each 3-neighbour
    for v in range(g.n):
        if deg[v] != 3:
            continue
        for u in sorted(g.rotations[v]):
            if deg[u] == 5:
                move("R2", ("vertex", u), ("vertex", v), NINTH)

    # R3 / R4: big faces pay their small incident vertices
    for v in range(g.n):
        if deg[v] == 3:
            for fid in _distinct_incident_faces(g, v):
                if flen[fid] >= 5:
                    move("R3", ("face", fid), ("vertex", v), THIRD)
        elif deg[v] == 4:
            for fid in _distinct_incident_faces(g, v):
                if flen[fid] >= 5:
                    move("R4", ("face", fid), ("vertex", v), FIFTH)

    # R5 / R6: big faces pay incident 5-vertices, less when the face
    # carries one of the vertex's 3-neighbours
    for v in range(g.n):
        if deg[v] != 5:
            continue
        small_nbrs = {u for u in g.rotations[v] if deg[u] == 3}
        for fid in _distinct_incident_faces(g, v):
            if flen[fid] < 5:
                continue
            on_face = set(faces[fid].vertices)
            if on_face & small_nbrs:
                move("R6", ("face", fid), ("vertex", v), NINTH)
            else:
                move("R5", ("face", fid), ("vertex", v), FIFTH)

    # R7: a 5-vertex with at most three incident 3-faces pays each
    # 4-neighbour per big face along their shared edge
    for v in range(g.n):
        if deg[v] != 5 or g.metrics(v).m3 > 3:
            continue
        for u in sorted(g.rotations[v]):
            if deg[u] != 4:
                continue
            big = g.edge_large_face_count(v, u)
            if big == 1:
                move("R7a", ("vertex", v), ("vertex", u), FIFTEENTH)
            elif big == 2:
                move("R7b", ("vertex", v), ("vertex", u), TWO_FIFTEENTHS)

    # R8-R10: the degree-5 taxonomy pays its bad or semi-bad charges
    for v in range(g.n):
        if deg[v] != 5:
            continue
        sc = classify_special(g, v, ctx)
        if sc is None:
            continue
        w = sc.ring
        if sc.kind == "strong":
            doubled = sum(
                1 for i in (0, 1) if ctx.in2(w[i], w[i + 1])
            )
            if doubled == 1:
                move("R8a", ("vertex", v), ("vertex", w[1]), TWO_FIFTEENTHS)
            elif doubled == 2:
                move("R8b", ("vertex", v), ("vertex", w[1]), FIFTH)
        elif sc.kind == "good":
            move("R9", ("vertex", v), ("vertex", w[1]), FIFTH)
            if ctx.bad_kind(w[2]) == "semi-bad":
                move("R9", ("vertex", v), ("vertex", w[2]), FIFTH)
        elif sc.kind == "support":
            for u in sorted(g.rotations[v]):
                if ctx.bad_kind(u) is not None and g.edge_in_two_triangles(v, u):
                    move("R10", ("vertex", v), ("vertex", u), THIRD)

    after = ChargeLedger(vertices=tuple(vc), faces=tuple(fc))
    if after.total() != TOTAL:  # tripwire: moves cannot change the sum
        raise AssertionError(
            f"transfers broke conservation: {_fmt(after.total())}"
        )
    return after, rec


def audit(g: PlaneGraph) -> dict:
    """Run the full discharging audit on one graph.

    The verdict field ``falsification`` is True only if no vertex or
    face ends negative AND no reducible configuration exists; a single
    such graph would disprove the engine's claim, so callers should
    treat it as a hard failure.
    """
    initial = initial_charges(g)
    after, transfers = apply_rules(g)
    match = detect(g)
    negatives = [
        {"kind": kind, "id": i, "charge": _fmt(c)}
        for kind, i, c in after.negatives()
    ]
    return {
        "n": g.n,
        "m": g.m,
        "faces": g.num_faces,
        "initial_total": _fmt(initial.total()),
        "final_total": _fmt(after.total()),
        "conservation": "-8" if after.total() == TOTAL else _fmt(after.total()),
        "transfers": len(transfers),
        "negatives": negatives,
        "configuration": match.to_json() if match is not None else None,
        "falsification": (match is None) and not negatives,
    }
