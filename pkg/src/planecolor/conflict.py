"""Colorings and distance-two conflict checking.

A coloring maps vertex -> color (1-based) and carries the palette size
it claims to fit in.  Two vertices conflict when they share a color at
graph distance <= 2.  The report lists every violating pair, so a valid
report means there is literally nothing left to flag.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .errors import ParseError
from .plane_graph import PlaneGraph

__all__ = ["Coloring", "ConflictReport", "conflict_sets", "validate"]


@dataclass(frozen=True)
class Coloring:
    """Partial vertex coloring with a declared palette size."""

    palette: int
    colors: dict[int, int] = field(default_factory=dict)

    def get(self, v: int) -> int | None:
        return self.colors.get(v)

    def to_json(self) -> dict:
        return {
            "palette": self.palette,
            "colors": {str(v): self.colors[v] for v in sorted(self.colors)},
        }

    def to_json_text(self) -> str:
        return json.dumps(self.to_json(), separators=(",", ":"))

    @classmethod
    def from_json(cls, obj) -> "Coloring":
        if isinstance(obj, (str, bytes)):
            obj = json.loads(obj)
        try:
            palette = int(obj["palette"])
            colors = {int(k): int(c) for k, c in obj["colors"].items()}
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"bad coloring JSON: {exc}") from exc
        return cls(palette=palette, colors=colors)


@dataclass(frozen=True)
class ConflictReport:
    """Outcome of validating a coloring against a graph.

    valid is True exactly when violations and uncolored are both empty.
    over_palette lists colored vertices whose color falls outside
    1..palette; it does not affect validity but callers that promised a
    palette should treat it as failure.
    """

    valid: bool
    violations: tuple[tuple[int, int, int], ...]
    uncolored: tuple[int, ...]
    over_palette: tuple[tuple[int, int], ...]

    def to_json(self) -> dict:
        return {
            "valid": self.valid,
            "violations": [list(t) for t in self.violations],
            "uncolored": list(self.uncolored),
            "over_palette": [list(t) for t in self.over_palette],
        }


def conflict_sets(g: PlaneGraph, coloring: Coloring) -> list[tuple[int, int, int]]:
    """All pairs u < v at distance <= 2 wearing the same color.

    The list is exhaustive and sorted; each unordered pair appears once.
    """
    colors = coloring.colors
    out: list[tuple[int, int, int]] = []
    for u in range(g.n):
        cu = colors.get(u)
        if cu is None:
            continue
        for v in g.n2(u):
            if v > u and colors.get(v) == cu:
                out.append((u, v, cu))
    return out


def validate(g: PlaneGraph, coloring: Coloring) -> ConflictReport:
    """Full conflict report for a coloring."""
    violations = tuple(conflict_sets(g, coloring))
    uncolored = tuple(v for v in range(g.n) if v not in coloring.colors)
    over = tuple(
        (v, c)
        for v, c in sorted(coloring.colors.items())
        if not 1 <= c <= coloring.palette
    )
    return ConflictReport(
        valid=not violations and not uncolored,
        violations=violations,
        uncolored=uncolored,
        over_palette=over,
    )
