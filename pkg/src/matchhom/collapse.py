"""Elementary collapses of matching complexes.

An elementary collapse removes a free pair (sigma, tau): tau is the only
simplex properly containing sigma, and dim tau = dim sigma + 1.  Removing
such pairs preserves the homotopy type, so homology is unchanged; replay
validates a recorded trace step by step against exactly that rule.

The greedy strategy aims at a target dimension: while simplices above the
target exist, collapse pairs whose free face leaves its smallest uncovered
vertex matchable by a single edge.  For the matching complex of a graph on
2k vertices, every perfect matching tau pairs with tau minus its edge at
the lowest vertex, and these pairs alone already collapse the complex to
dimension k-2; a graph without perfect matchings is there from the start.
On a stall the vertex priority is rotated and the collapse restarts.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .complexes import Matching, MatchingComplex

Pair = tuple[Matching, Matching]


@dataclass
class CollapseTrace:
    """Ordered free pairs removed, plus the final complex."""

    steps: list[Pair]
    final: MatchingComplex

    def to_json(self) -> dict:
        return {
            "format": "matchhom-collapse-trace",
            "version": 1,
            "steps": [
                [[list(e) for e in free], [list(e) for e in coface]]
                for free, coface in self.steps
            ],
        }

    @classmethod
    def from_json(cls, data: dict, final: MatchingComplex) -> "CollapseTrace":
        if data.get("format") != "matchhom-collapse-trace":
            raise ValueError("not a collapse trace")
        steps = [
            (tuple(tuple(e) for e in free), tuple(tuple(e) for e in coface))
            for free, coface in data["steps"]
        ]
        return cls(steps, final)

    def save(self, path) -> None:
        with open(path, "w") as f:
            json.dump(self.to_json(), f, sort_keys=True)


class _Working:
    """Mutable simplex set with coface counts for free-pair queries."""

    def __init__(self, k: MatchingComplex):
        self.simplices: set[Matching] = set(k.all_simplices())
        self.graph = k.graph
        self.n_cofaces: dict[Matching, int] = {m: 0 for m in self.simplices}
        for m in self.simplices:
            for pos in range(len(m)):
                self.n_cofaces[m[:pos] + m[1 + pos:]] += 1

    def dim(self) -> int:
        return max((len(m) - 1 for m in self.simplices), default=-2)

    def cofaces(self, m: Matching) -> list[Matching]:
        used = {v for e in m for v in e}
        out = []
        for e in self.graph.edge_list():
            if e[0] in used or e[1] in used:
                continue
            up = tuple(sorted(m + (e,)))
            if up in self.simplices:
                out.append(up)
        return out

    def remove_pair(self, free: Matching, coface: Matching):
        self.simplices.discard(free)
        self.simplices.discard(coface)
        for m in (free, coface):
            for pos in range(len(m)):
                facet = m[:pos] + m[1 + pos:]
                if facet in self.n_cofaces:
                    self.n_cofaces[facet] -= 1
        self.n_cofaces.pop(free, None)
        self.n_cofaces.pop(coface, None)

    def to_complex(self) -> MatchingComplex:
        by_dim: dict[int, list[Matching]] = {}
        for m in self.simplices:
            by_dim.setdefault(len(m) - 1, []).append(m)
        return MatchingComplex(self.graph,
                               {d: tuple(sorted(ms)) for d, ms in sorted(by_dim.items())})


def _priority(m: Matching, rotation: int, n: int):
    """Sort key: smallest uncovered vertex (rotated), then the face itself."""
    used = {v for e in m for v in e}
    free_verts = [((v - 1 + rotation) % n) for v in range(1, n + 1) if v not in used]
    return (min(free_verts, default=n), m)


def collapse_to_dimension(k: MatchingComplex, target: int) -> CollapseTrace | None:
    """Greedily collapse until dim <= target; None when every rotation stalls.

    A returned trace always replays validly and its final complex has
    dimension at most the target (failure is a value, not an exception).
    """
    if k.is_void or k.dim <= target:
        return CollapseTrace([], k)
    n = max(k.graph.n, 1)
    for rotation in range(n):
        work = _Working(k)
        steps: list[Pair] = []
        while work.dim() > target:
            top = work.dim()
            candidates = sorted(
                (m for m in work.simplices
                 if len(m) - 1 == top - 1 and work.n_cofaces.get(m) == 1),
                key=lambda m: _priority(m, rotation, n),
            )
            progress = False
            for free in candidates:
                if free not in work.simplices or work.n_cofaces.get(free) != 1:
                    continue
                cof = work.cofaces(free)
                if len(cof) != 1 or len(cof[0]) - 1 != top:
                    continue
                coface = cof[0]
                if work.n_cofaces.get(coface, 0) != 0:
                    continue
                work.remove_pair(free, coface)
                steps.append((free, coface))
                progress = True
            if not progress:
                break
        if work.dim() <= target:
            return CollapseTrace(steps, work.to_complex())
    return None


def replay(k: MatchingComplex, trace: CollapseTrace) -> bool:
    """Validate every step of a trace as a legal elementary collapse."""
    work = _Working(k)
    for free, coface in trace.steps:
        if free not in work.simplices or coface not in work.simplices:
            return False
        if len(coface) != len(free) + 1 or not set(free) <= set(coface):
            return False
        if work.n_cofaces.get(free) != 1:
            return False
        if work.n_cofaces.get(coface, 0) != 0:
            return False
        work.remove_pair(free, coface)
    return True
