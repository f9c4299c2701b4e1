"""Apply reducible configurations and unwind them into a 16-coloring.

The pipeline: detect a configuration, delete its designated vertex,
chord the gap so distance-two constraints survive, recurse, then pick
the smallest color the deleted vertex cannot see.  Every step is
re-verified on the concrete graphs, never trusted from the table.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .configurations import ConfigMatch, iter_matches
from .conflict import Coloring, validate
from .errors import (
    AnomalyNoConfiguration,
    DegreeOverflow,
    Disconnected,
    EmbeddingBroken,
    NoAvailableColor,
    NotPlanarEmbedding,
)
from .exact_solver import DEFAULT_BUDGET, color_with_k
from .plane_graph import PlaneGraph

__all__ = [
    "ReductionTrace",
    "apply",
    "extend",
    "color16",
    "is_proper_wrt",
    "PALETTE",
]

PALETTE = 16


@dataclass(frozen=True)
class ReductionTrace:
    """Record of one reduction step, enough to replay or audit it."""

    step: int
    rule: str
    deleted: int
    added_edges: tuple[tuple[int, int], ...]
    v_plus_e_before: int
    v_plus_e_after: int
    observed_d2: int

    def to_json(self) -> dict:
        return {
            "step": self.step,
            "rule": self.rule,
            "deleted": self.deleted,
            "added_edges": [list(e) for e in self.added_edges],
            "v_plus_e_before": self.v_plus_e_before,
            "v_plus_e_after": self.v_plus_e_after,
            "observed_d2": self.observed_d2,
        }


def _chord_targets_in_order(g: PlaneGraph, dv: int, u: int, targets: list[int]):
    """Order chord targets for u's rotation slot.

    The slot where dv sat in rot(u) is replaced by the chord partners
    sorted by how far they sit past u in dv's own rotation; that is the
    order in which the new edges fan across the hole dv leaves, so the
    patched rotation stays a plane embedding.
    """
    rot_dv = g.rotations[dv]
    d = len(rot_dv)
    pu = rot_dv.index(u)

    def past_u(t: int) -> int:
        return (rot_dv.index(t) - pu) % d

    return sorted(targets, key=past_u)


def is_proper_wrt(g: PlaneGraph, h: PlaneGraph, deleted: int) -> bool:
    """Do all distance-two pairs of g (minus the deleted vertex) stay
    within distance two in h?

    Vertices above ``deleted`` shift down by one in h.  Both sides are
    compared as sorted pair codes so the whole check is vectorized.
    """
    gp, gi = g.n2_csr()
    hp, hi = h.n2_csr()
    rows = np.repeat(np.arange(g.n), np.diff(gp))
    cols = gi
    keep = (rows != deleted) & (cols != deleted) & (cols > rows)
    ru = rows[keep].astype(np.int64)
    cv = cols[keep].astype(np.int64)
    ru[ru > deleted] -= 1
    cv[cv > deleted] -= 1
    need = ru * h.n + cv
    hrows = np.repeat(np.arange(h.n), np.diff(hp)).astype(np.int64)
    have = hrows * h.n + hi.astype(np.int64)  # sorted: CSR rows ascend
    if need.size == 0:
        return True
    pos = np.searchsorted(have, need)
    inside = pos < have.size
    return bool(np.all(inside & (have[np.minimum(pos, have.size - 1)] == need)))


def apply(g: PlaneGraph, match: ConfigMatch) -> tuple[PlaneGraph, ReductionTrace]:
    """Delete the match's vertex, add its chords, rebuild the graph.

    Raises:
        DegreeOverflow: a chord endpoint would pass degree 5.
        EmbeddingBroken: the patched rotations fail validation, come
            out non-planar, disconnected, or lose a distance-two pair.
    """
    dv = match.deleted
    adds = [e for e in match.added_edges() if not g.has_edge(*e)]

    gain: dict[int, int] = {}
    for a, b in adds:
        gain[a] = gain.get(a, 0) + 1
        gain[b] = gain.get(b, 0) + 1
    for x, extra in gain.items():
        newd = g.degree(x) - (1 if g.has_edge(x, dv) else 0) + extra
        if newd > 5:
            raise DegreeOverflow(
                f"rule {match.rule_id}: vertex {x} would reach degree {newd}"
            )

    chords_at: dict[int, list[int]] = {}
    for a, b in adds:
        chords_at.setdefault(a, []).append(b)
        chords_at.setdefault(b, []).append(a)

    new_rots: list[list[int]] = []
    for v in range(g.n):
        if v == dv:
            continue
        row = list(g.rotations[v])
        if v in chords_at:
            # chord endpoints are always former neighbours of dv
            i = row.index(dv)
            row[i : i + 1] = _chord_targets_in_order(g, dv, v, chords_at[v])
        elif dv in row:
            row.remove(dv)
        new_rots.append([u - 1 if u > dv else u for u in row])

    try:
        h = PlaneGraph(new_rots)
    except (NotPlanarEmbedding, Disconnected) as exc:
        raise EmbeddingBroken(f"rule {match.rule_id} at {dv}: {exc}") from exc

    before = g.n + g.m
    after = h.n + h.m
    if after >= before:
        raise EmbeddingBroken(
            f"rule {match.rule_id}: size did not drop ({before} -> {after})"
        )
    if h.n > 1 and int(h.deg.max()) > 5:
        raise DegreeOverflow(f"rule {match.rule_id}: reduced graph has degree > 5")
    if not is_proper_wrt(g, h, dv):
        raise EmbeddingBroken(
            f"rule {match.rule_id}: a distance-two pair fell apart"
        )

    trace = ReductionTrace(
        step=-1,
        rule=match.rule_id,
        deleted=dv,
        added_edges=tuple(tuple(e) for e in adds),
        v_plus_e_before=before,
        v_plus_e_after=after,
        observed_d2=match.observed_d2,
    )
    return h, trace


def extend(g: PlaneGraph, trace: ReductionTrace, colors_h: dict[int, int]) -> dict:
    """Lift a coloring of the reduced graph back through one step.

    colors_h maps the reduced graph's vertices; the result maps g's,
    with the deleted vertex given the least color free in its
    distance-two ball.
    """
    dv = trace.deleted
    out: dict[int, int] = {}
    for hv, c in colors_h.items():
        out[hv + 1 if hv >= dv else hv] = c
    seen = {out[u] for u in g.n2(dv)}
    for c in range(1, PALETTE + 1):
        if c not in seen:
            out[dv] = c
            return out
    raise NoAvailableColor(
        f"vertex {dv} sees all {PALETTE} colors (d2={g.d2(dv)})"
    )


def _base_coloring(g: PlaneGraph) -> dict[int, int]:
    # at most 16 vertices left: give everyone a distinct color
    return {v: v + 1 for v in range(g.n)}


def color16(
    g: PlaneGraph, budget: int = DEFAULT_BUDGET
) -> tuple[Coloring, list[ReductionTrace]]:
    """Construct a 16-color distance-two coloring of g.

    Reduces until at most 16 vertices remain, colors those trivially,
    then unwinds.  If every matched configuration fails to apply on
    some graph (which the table says cannot happen), the step is
    retried with the exact solver before giving up.

    Returns the coloring plus the trace stack, outermost step first.

    Raises:
        AnomalyNoConfiguration: no configuration matched and the exact
            fallback found nothing; the engine's claim failed on g.
    """
    stack: list[tuple[PlaneGraph, ReductionTrace]] = []
    cur = g
    step = 0
    while cur.n > PALETTE:
        advanced = False
        for match in iter_matches(cur):
            try:
                nxt, trace = apply(cur, match)
            except (EmbeddingBroken, DegreeOverflow):
                continue
            stack.append((cur, ReductionTrace(step=step, **_rest(trace))))
            cur = nxt
            step += 1
            advanced = True
            break
        if not advanced:
            direct = color_with_k(cur, PALETTE, budget=budget * 10)
            if isinstance(direct, Coloring):
                colors = dict(direct.colors)
                sentinel = ReductionTrace(
                    step=step,
                    rule="anomaly-exact-fallback",
                    deleted=-1,
                    added_edges=(),
                    v_plus_e_before=cur.n + cur.m,
                    v_plus_e_after=cur.n + cur.m,
                    observed_d2=-1,
                )
                stack.append((cur, sentinel))
                return _unwind(g, stack, colors)
            raise AnomalyNoConfiguration(
                f"no configuration applies at n={cur.n}, m={cur.m}"
            )
    colors = _base_coloring(cur)
    return _unwind(g, stack, colors)


def _rest(trace: ReductionTrace) -> dict:
    return {
        "rule": trace.rule,
        "deleted": trace.deleted,
        "added_edges": trace.added_edges,
        "v_plus_e_before": trace.v_plus_e_before,
        "v_plus_e_after": trace.v_plus_e_after,
        "observed_d2": trace.observed_d2,
    }


def _unwind(
    g: PlaneGraph,
    stack: list[tuple[PlaneGraph, ReductionTrace]],
    colors: dict[int, int],
) -> tuple[Coloring, list[ReductionTrace]]:
    traces = [t for _, t in stack]
    for frame_g, trace in reversed(stack):
        if trace.rule == "anomaly-exact-fallback":
            continue
        colors = extend(frame_g, trace, colors)
    coloring = Coloring(palette=PALETTE, colors=colors)
    report = validate(g, coloring)
    if not report.valid:  # tripwire: unwinding is supposed to be safe
        raise AssertionError(
            f"constructed coloring is invalid: {report.to_json()}"
        )
    return coloring, traces
