"""Matching complexes and their subcomplexes.

A matching of a graph is a set of pairwise vertex-disjoint edges; the family
of all matchings is a simplicial complex whose d-simplices are the matchings
of d+1 edges.  The empty matching is the unique (-1)-simplex, so reduced
homology needs no special-casing later.

Two degenerate complexes are distinguished throughout: the *void* complex
(no simplices at all, the bottom filtration level) and the *empty* complex
{()} holding only the empty matching.  They have different reduced homology
and conflating them breaks the small-n conventions.

Simplices are stored per dimension in lexicographic order of their edge
lists; every matrix downstream references these indices, which makes runs
bit-reproducible.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from typing import Callable, Iterable

from .graphs import Edge, Graph, graph, restrict_to_vertices

# A matching: lexicographically sorted tuple of disjoint edges.
Matching = tuple[Edge, ...]

COMPLEX_FORMAT_VERSION = 1


def matching_vertices(m: Matching) -> set[int]:
    return {v for e in m for v in e}


def is_matching(m: Iterable[Edge]) -> bool:
    seen: set[int] = set()
    for u, v in m:
        if u in seen or v in seen or u == v:
            return False
        seen.add(u)
        seen.add(v)
    return True


class MatchingComplex:
    """A downward-closed family of matchings of a ground graph.

    ``simplices[d]`` is the lex-ordered tuple of d-simplices; dimension -1
    holds the empty matching for every nonvoid complex.
    """

    __slots__ = ("graph", "simplices", "_index", "_content_key")

    def __init__(self, g: Graph, simplices: dict[int, tuple[Matching, ...]]):
        self.graph = g
        self.simplices = simplices
        self._index: dict[int, dict[Matching, int]] = {}
        self._content_key: str | None = None

    # -- basic queries ------------------------------------------------

    @property
    def is_void(self) -> bool:
        return not self.simplices

    @property
    def dim(self) -> int:
        """Top dimension; -1 for {()}.  Raises on the void complex."""
        if self.is_void:
            raise ValueError("void complex has no dimension")
        return max(self.simplices)

    def f_vector(self) -> tuple[int, ...]:
        """Counts per dimension starting at -1; (0,) for the void complex."""
        if self.is_void:
            return (0,)
        return tuple(len(self.simplices.get(d, ())) for d in range(-1, self.dim + 1))

    def n_simplices(self) -> int:
        return sum(len(v) for v in self.simplices.values())

    def contains(self, m: Matching) -> bool:
        d = len(m) - 1
        return m in self.index(d)

    def index(self, d: int) -> dict[Matching, int]:
        if d not in self._index:
            self._index[d] = {m: i for i, m in enumerate(self.simplices.get(d, ()))}
        return self._index[d]

    def all_simplices(self) -> Iterable[Matching]:
        for d in sorted(self.simplices):
            yield from self.simplices[d]

    def is_subcomplex_of(self, other: "MatchingComplex") -> bool:
        for d, ms in self.simplices.items():
            idx = other.index(d)
            if any(m not in idx for m in ms):
                return False
        return True

    def __eq__(self, other) -> bool:
        if not isinstance(other, MatchingComplex):
            return NotImplemented
        return self.simplices == other.simplices

    def __hash__(self):
        return hash(self.content_key())

    def __repr__(self):
        if self.is_void:
            return "MatchingComplex(void)"
        return f"MatchingComplex(n={self.graph.n}, f={self.f_vector()})"

    def content_key(self) -> str:
        """Stable hex digest of the simplex data, used as cache key."""
        if self._content_key is None:
            h = hashlib.sha256()
            h.update(b"matchhom-complex-v1")
            for d in sorted(self.simplices):
                h.update(str(d).encode())
                for m in self.simplices[d]:
                    h.update(repr(m).encode())
            self._content_key = h.hexdigest()
        return self._content_key


# -- constructors -----------------------------------------------------


def void_complex(g: Graph | None = None) -> MatchingComplex:
    return MatchingComplex(g if g is not None else Graph(0, frozenset()), {})


def empty_complex(g: Graph | None = None) -> MatchingComplex:
    """The complex {()} holding only the empty matching."""
    return MatchingComplex(g if g is not None else Graph(0, frozenset()), {-1: ((),)})


def matching_complex(g: Graph) -> MatchingComplex:
    """Enumerate all matchings of ``g``, grouped by dimension.

    A graph with no edges yields {()}.  Enumeration is depth-first over the
    lex-ordered edge list, which emits each dimension in lex order directly.
    """
    edges = g.edge_list()
    by_dim: dict[int, list[Matching]] = {-1: [()]}
    nedges = len(edges)
    masks = [(1 << u) | (1 << v) for u, v in edges]

    def extend(prefix: Matching, used: int, start: int):
        d = len(prefix)  # dimension of the extensions below
        bucket = by_dim.setdefault(d, [])
        for i in range(start, nedges):
            if used & masks[i]:
                continue
            m = prefix + (edges[i],)
            bucket.append(m)
            extend(m, used | masks[i], i + 1)

    extend((), 0, 0)
    return MatchingComplex(g, {d: tuple(ms) for d, ms in by_dim.items() if ms})


def from_matchings(g: Graph, matchings: Iterable[Matching]) -> MatchingComplex:
    """Build a complex from an explicit simplex set, checking closure."""
    by_dim: dict[int, set[Matching]] = {}
    for m in matchings:
        if not is_matching(m):
            raise ValueError(f"{m} is not a matching")
        by_dim.setdefault(len(m) - 1, set()).add(tuple(sorted(m)))
    for d, ms in sorted(by_dim.items(), reverse=True):
        if d < 0:
            continue
        below = by_dim.setdefault(d - 1, set())
        for m in ms:
            for i in range(len(m)):
                facet = m[:i] + m[i + 1:]
                if facet not in below:
                    raise ValueError(f"not downward closed: missing {facet} under {m}")
    return MatchingComplex(g, {d: tuple(sorted(ms)) for d, ms in sorted(by_dim.items())})


def subcomplex(k: MatchingComplex, keep: Callable[[Matching], bool]) -> MatchingComplex:
    """Subcomplex of simplices satisfying ``keep`` (must be closed downward)."""
    out: dict[int, tuple[Matching, ...]] = {}
    for d, ms in k.simplices.items():
        kept = tuple(m for m in ms if keep(m))
        if kept:
            out[d] = kept
    sub = MatchingComplex(k.graph, out)
    for d, ms in out.items():
        if d < 0:
            continue
        idx = sub.index(d - 1)
        for m in ms:
            for i in range(len(m)):
                if m[:i] + m[i + 1:] not in idx:
                    raise ValueError("keep predicate is not downward closed")
    return sub


def delete_zero_cell(k: MatchingComplex, e: tuple[int, int]) -> MatchingComplex:
    """Remove the 0-cell ``e`` (an edge) and everything containing it."""
    e = (e[0], e[1]) if e[0] < e[1] else (e[1], e[0])
    if (e,) not in k.index(0):
        raise ValueError(f"{e} is not a vertex of the complex")
    return subcomplex(k, lambda m: e not in m)


def crossing_count(m: Matching, split: int) -> int:
    """Number of edges with one endpoint in [1..split] and one above."""
    return sum(1 for u, v in m if u <= split < v)


def filtration_level(n: int, m: int, i: int) -> MatchingComplex:
    """Level i of the crossing-edge filtration of M_n with split [1..m].

    Level i keeps the matchings with at most i edges crossing the split;
    level -1 is the void complex and the top level min(m, n-m) is M_n.
    """
    from .graphs import complete_graph

    if not 1 <= m <= n - 1:
        raise ValueError("split must satisfy 1 <= m <= n-1")
    top = min(m, n - m)
    if not -1 <= i <= top:
        raise ValueError(f"level must lie in [-1, {top}]")
    full = matching_complex(complete_graph(n))
    if i == -1:
        return void_complex(full.graph)
    return subcomplex(full, lambda mm: crossing_count(mm, m) <= i)


def join(k: MatchingComplex, l: MatchingComplex, offset: int = 0) -> MatchingComplex:
    """Simplicial join {sigma | tau_shifted}, on disjoint ground sets.

    ``offset`` is added to every vertex of ``l`` first.  Joining with {()}
    is the identity; joining with the void complex is void.
    """
    if k.is_void or l.is_void:
        return void_complex()
    shift = offset
    l_edges = frozenset((u + shift, v + shift) for u, v in l.graph.edges)
    k_support = {v for e in k.graph.edges for v in e}
    l_support = {v for e in l_edges for v in e}
    if k_support & l_support:
        raise ValueError(f"ground sets overlap: {sorted(k_support & l_support)}")
    n = max([k.graph.n, l.graph.n + shift, 0])
    g = Graph(n, k.graph.edges | l_edges)
    by_dim: dict[int, list[Matching]] = {}
    for ds, sims in k.simplices.items():
        for dl, siml in l.simplices.items():
            d = ds + dl + 1
            bucket = by_dim.setdefault(d, [])
            for a in sims:
                for b in siml:
                    shifted = tuple((u + shift, v + shift) for u, v in b)
                    bucket.append(tuple(sorted(a + shifted)))
    return MatchingComplex(g, {d: tuple(sorted(ms)) for d, ms in sorted(by_dim.items())})


def complex_on_vertices(n: int, s: Iterable[int]) -> MatchingComplex:
    """M(K_s) on ambient labels: matchings of K_n contained in ``s``.

    Vertices outside ``s`` are isolated, so the simplices coincide with the
    matching complex of the complete graph on ``s`` without relabeling.
    """
    from .graphs import complete_graph

    return matching_complex(restrict_to_vertices(complete_graph(n), s))


@dataclass(frozen=True)
class ComplexPair:
    """A complex and a subcomplex, for relative homology."""

    ambient: MatchingComplex
    sub: MatchingComplex

    def __post_init__(self):
        if not self.sub.is_subcomplex_of(self.ambient):
            raise ValueError("sub is not a subcomplex of ambient")


# -- serialization ----------------------------------------------------


def complex_to_json(k: MatchingComplex) -> dict:
    return {
        "format": "matchhom-complex",
        "version": COMPLEX_FORMAT_VERSION,
        "n": k.graph.n,
        "edges": [list(e) for e in k.graph.edge_list()],
        "simplices": {
            str(d): [[list(e) for e in m] for m in ms]
            for d, ms in sorted(k.simplices.items())
        },
    }


def complex_from_json(data: dict) -> MatchingComplex:
    if data.get("format") != "matchhom-complex":
        raise ValueError("not a matchhom complex file")
    if data.get("version") != COMPLEX_FORMAT_VERSION:
        raise ValueError(f"unsupported complex format version {data.get('version')}")
    g = graph(data["n"], [tuple(e) for e in data["edges"]])
    simplices = {
        int(d): tuple(tuple(tuple(e) for e in m) for m in ms)
        for d, ms in data["simplices"].items()
    }
    return MatchingComplex(g, simplices)


def save_complex(k: MatchingComplex, path) -> None:
    with open(path, "w") as f:
        json.dump(complex_to_json(k), f, sort_keys=True)


def load_complex(path) -> MatchingComplex:
    with open(path) as f:
        return complex_from_json(json.load(f))
