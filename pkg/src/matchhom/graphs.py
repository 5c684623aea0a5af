"""Labeled simple graphs on vertex set {1, ..., n}.

Vertices are contiguous integers starting at 1; edges are unordered pairs
stored as (u, v) with u < v.  Graphs are immutable and hashable, so they can
be shared freely and used as cache keys.  Induced subgraphs relabel

order-preservingly and return the relabeling map, because chains built on a
subgraph's matching complex must be transportable back to the ambient
complex.

The empty graph (n = 0) is allowed as an internal value only; the public
constructors all require n >= 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable

Edge = tuple[int, int]


def edge(u: int, v: int) -> Edge:
    """Normalize an unordered pair to (min, max), rejecting loops."""
    if u == v:
        raise ValueError(f"loop edge {u}{v} not allowed")
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph on vertices 1..n."""

    n: int
    edges: frozenset[Edge]

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("vertex count must be nonnegative")
        for u, v in self.edges:
            if not (1 <= u < v <= self.n):
                raise ValueError(f"edge ({u},{v}) invalid on vertex set [1..{self.n}]")

    @property
    def vertices(self) -> range:
        return range(1, self.n + 1)

    def edge_list(self) -> list[Edge]:
        """Edges in lexicographic order."""
        return sorted(self.edges)

    def has_edge(self, u: int, v: int) -> bool:
        return edge(u, v) in self.edges

    def degree(self, v: int) -> int:
        return sum(1 for e in self.edges if v in e)


def graph(n: int, edges: Iterable[tuple[int, int]]) -> Graph:
    """Build a graph from any iterable of (possibly unordered) pairs."""
    return Graph(n, frozenset(edge(u, v) for u, v in edges))


def complete_graph(n: int) -> Graph:
    """K_n, all pairs on [1..n]."""
    if n < 1:
        raise ValueError("complete_graph requires n >= 1")
    return Graph(n, frozenset(combinations(range(1, n + 1), 2)))


def complete_bipartite(a: int, b: int) -> Graph:
    """Complete bipartite graph with blocks [1..a] and [a+1..a+b]."""
    if a < 1 or b < 1:
        raise ValueError("complete_bipartite requires both block sizes >= 1")
    left = range(1, a + 1)
    right = range(a + 1, a + b + 1)
    return Graph(a + b, frozenset((u, v) for u in left for v in right))


def near_matching_deleted_graph(k: int) -> Graph:
    """K_{2k+1} with the near-perfect matching {23, 45, ..., 2k(2k+1)} removed."""
    if k < 1:
        raise ValueError("near_matching_deleted_graph requires k >= 1")
    g = complete_graph(2 * k + 1)
    removed = frozenset((2 * i, 2 * i + 1) for i in range(1, k + 1))
    return Graph(g.n, g.edges - removed)


def induced_subgraph(g: Graph, s: Iterable[int]) -> tuple[Graph, dict[int, int]]:
    """Restrict to vertex set ``s``, relabeled order-preservingly to 1..|s|.

    Returns the subgraph together with the old-vertex -> new-vertex map.
    Restricting to the empty set yields the internal n = 0 graph.
    """
    svert = sorted(set(s))
    if svert and not (1 <= svert[0] and svert[-1] <= g.n):
        raise ValueError(f"{svert} is not a subset of [1..{g.n}]")
    relabel = {v: i + 1 for i, v in enumerate(svert)}
    keep = set(svert)
    new_edges = frozenset(
        (relabel[u], relabel[v]) for u, v in g.edges if u in keep and v in keep
    )
    return Graph(len(svert), new_edges), relabel


def delete_edges(g: Graph, drop: Iterable[tuple[int, int]]) -> Graph:
    """Same vertex set, with the given edges removed.  Rejects non-edges."""
    dropset = frozenset(edge(u, v) for u, v in drop)
    extra = dropset - g.edges
    if extra:
        raise ValueError(f"cannot delete non-edges {sorted(extra)}")
    return Graph(g.n, g.edges - dropset)


def restrict_to_vertices(g: Graph, s: Iterable[int]) -> Graph:
    """Keep only edges inside ``s`` but retain the ambient labeling.

    Unlike :func:`induced_subgraph` this does not relabel; vertices outside
    ``s`` become isolated.  The matching complex of the result is the
    complex of matchings of ``g`` contained in ``s``, on ambient labels.
    """
    keep = set(s)
    for v in keep:
        if not 1 <= v <= g.n:
            raise ValueError(f"vertex {v} outside [1..{g.n}]")
    return Graph(g.n, frozenset(e for e in g.edges if e[0] in keep and e[1] in keep))


def parse_edge_list(text: str) -> Graph:
    """Parse the CLI edge-list format: first line n, then lines "u v"."""
    lines = [ln.strip() for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if not lines:
        raise ValueError("empty edge-list input")
    n = int(lines[0])
    if n < 1:
        raise ValueError("edge-list vertex count must be >= 1")
    edges = []
    for ln in lines[1:]:
        parts = ln.split()
        if len(parts) != 2:
            raise ValueError(f"bad edge line: {ln!r}")
        u, v = int(parts[0]), int(parts[1])
        if not u < v:
            raise ValueError(f"edge line must have u < v: {ln!r}")
        edges.append((u, v))
    return graph(n, edges)


def format_edge_list(g: Graph) -> str:
    lines = [str(g.n)]
    lines.extend(f"{u} {v}" for u, v in g.edge_list())
    return "\n".join(lines) + "\n"
