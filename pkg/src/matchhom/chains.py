"""Chains, boundary operators, wedge products, and relabelings.

A chain is a sparse integer combination of matchings of one fixed dimension.
The generator for a matching is its edge list in lexicographic order; any
operation that produces edges in another order picks up the sign of the
permutation sorting them back.  The boundary deletes the j-th edge of the
ordered list with sign (-1)^j, and the empty matching is a genuine basis
element in dimension -1, so boundaries of 0-chains land on it and reduced
homology comes out of the same machinery as everything else.
"""

from __future__ import annotations

from typing import Callable, Iterable

from .complexes import Matching, MatchingComplex, is_matching, matching_vertices

Edge = tuple[int, int]


def merge_sign(left: Matching, right: Matching) -> int:
    """Sign of the shuffle sorting ``left + right`` when both are sorted."""
    inversions = 0
    j = 0
    for e in right:
        while j < len(left) and left[j] < e:
            j += 1
        inversions += len(left) - j
    return -1 if inversions & 1 else 1


def sort_with_sign(edges: Iterable[Edge]) -> tuple[Matching, int]:
    """Sort an edge list, returning the permutation sign (0 on repeats)."""
    lst = list(edges)
    sign = 1
    # insertion sort; lists here have at most ~6 edges
    for i in range(1, len(lst)):
        j = i
        while j > 0 and lst[j] < lst[j - 1]:
            lst[j], lst[j - 1] = lst[j - 1], lst[j]
            sign = -sign
            j -= 1
        if j > 0 and lst[j] == lst[j - 1]:
            return tuple(lst), 0
    return tuple(lst), sign


class Chain:
    """Sparse formal integer combination of same-dimension matchings."""

    __slots__ = ("terms",)

    def __init__(self, terms: dict[Matching, int] | None = None):
        self.terms = {m: c for m, c in (terms or {}).items() if c}
        sizes = {len(m) for m in self.terms}
        if len(sizes) > 1:
            raise ValueError("chain mixes dimensions")

    @property
    def dimension(self) -> int | None:
        """Dimension of the support, None for the zero chain."""
        for m in self.terms:
            return len(m) - 1
        return None

    def is_zero(self) -> bool:
        return not self.terms

    def support_vertices(self) -> set[int]:
        return {v for m in self.terms for v in matching_vertices(m)}

    def items(self):
        return self.terms.items()

    def __add__(self, other: "Chain") -> "Chain":
        out = dict(self.terms)
        for m, c in other.terms.items():
            nc = out.get(m, 0) + c
            if nc:
                out[m] = nc
            else:
                out.pop(m, None)
        return Chain(out)

    def __sub__(self, other: "Chain") -> "Chain":
        return self + (-other)

    def __neg__(self) -> "Chain":
        return Chain({m: -c for m, c in self.terms.items()})

    def __rmul__(self, k: int) -> "Chain":
        if k == 0:
            return Chain()
        return Chain({m: k * c for m, c in self.terms.items()})

    def __eq__(self, other) -> bool:
        if not isinstance(other, Chain):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __repr__(self):
        if not self.terms:
            return "Chain(0)"
        bits = []
        for m, c in sorted(self.terms.items()):
            mm = "|".join(f"{u}{v}" if v < 10 else f"{u},{v}" for u, v in m) or "()"
            bits.append(f"{c:+d}*{mm}")
        return "Chain(" + " ".join(bits) + ")"

    def reduce_mod(self, p: int) -> "Chain":
        return Chain({m: c % p for m, c in self.terms.items()})


def chain_of(m: Iterable[Edge], coeff: int = 1) -> Chain:
    mm, sign = sort_with_sign(tuple(m))
    if sign == 0:
        raise ValueError("repeated edge in matching")
    return Chain({mm: coeff * sign})


UNIT = Chain({(): 1})  # the empty matching, wedge identity in dimension -1


def edge_chain(u: int, v: int, coeff: int = 1) -> Chain:
    return chain_of([(min(u, v), max(u, v))], coeff)


def wedge(c1: Chain, c2: Chain) -> Chain:
    """Bilinear concatenation with the lex-resorting sign.

    Supports must use disjoint vertex sets.
    """
    v1, v2 = c1.support_vertices(), c2.support_vertices()
    if v1 & v2:
        raise ValueError(f"wedge supports share vertices {sorted(v1 & v2)}")
    out: dict[Matching, int] = {}
    for m1, a in c1.terms.items():
        for m2, b in c2.terms.items():
            sign = merge_sign(m1, m2)
            m = tuple(sorted(m1 + m2))
            nc = out.get(m, 0) + sign * a * b
            if nc:
                out[m] = nc
            else:
                out.pop(m, None)
    return Chain(out)


def wedge_all(chains: Iterable[Chain]) -> Chain:
    out = UNIT
    for c in chains:
        out = wedge(out, c)
    return out


def relabel(c: Chain, mapping: dict[int, int] | Callable[[int], int]) -> Chain:
    """Apply an injective vertex map, re-signing to canonical order."""
    f = mapping.__getitem__ if isinstance(mapping, dict) else mapping
    support = sorted({v for m in c.terms for e in m for v in e})
    image = [f(v) for v in support]
    if len(set(image)) != len(image):
        raise ValueError("relabeling map is not injective on the support")
    out: dict[Matching, int] = {}
    for m, coeff in c.terms.items():
        edges = []
        for u, v in m:
            fu, fv = f(u), f(v)
            edges.append((fu, fv) if fu < fv else (fv, fu))
        mm, sign = sort_with_sign(edges)
        nc = out.get(mm, 0) + sign * coeff
        if nc:
            out[mm] = nc
        else:
            out.pop(mm, None)
    return Chain(out)


def shift(c: Chain, offset: int) -> Chain:
    """Add ``offset`` to every vertex in the support."""
    return relabel(c, lambda v: v + offset)


def boundary(c: Chain) -> Chain:
    """The simplicial boundary, independent of any ambient complex."""
    out: dict[Matching, int] = {}
    for m, coeff in c.terms.items():
        for j in range(len(m)):
            facet = m[:j] + m[j + 1:]
            sign = -1 if j & 1 else 1
            nc = out.get(facet, 0) + sign * coeff
            if nc:
                out[facet] = nc
            else:
                out.pop(facet, None)
    return Chain(out)


def split_off(m: Matching, label: Matching) -> tuple[int, Matching] | None:
    """Factor ``m`` as (sign, rest) with m = sign * (label wedge rest).

    Returns None when ``label`` is not contained in ``m``.
    """
    rest = tuple(e for e in m if e not in set(label))
    if len(rest) + len(label) != len(m):
        return None
    return merge_sign(label, rest), rest


class SparseIntMatrix:
    """Exact sparse integer matrix, entries indexed by (row, col)."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows: int, cols: int, entries: dict[tuple[int, int], int] | None = None):
        self.rows = rows
        self.cols = cols
        self.entries = {k: v for k, v in (entries or {}).items() if v}

    def nnz(self) -> int:
        return len(self.entries)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def row_dicts(self) -> dict[int, dict[int, int]]:
        out: dict[int, dict[int, int]] = {}
        for (r, c), v in self.entries.items():
            out.setdefault(r, {})[c] = v
        return out

    def col_dicts(self) -> dict[int, dict[int, int]]:
        out: dict[int, dict[int, int]] = {}
        for (r, c), v in self.entries.items():
            out.setdefault(c, {})[r] = v
        return out

    def transpose(self) -> "SparseIntMatrix":
        return SparseIntMatrix(self.cols, self.rows, {(c, r): v for (r, c), v in self.entries.items()})

    def matmul(self, other: "SparseIntMatrix") -> "SparseIntMatrix":
        if self.cols != other.rows:
            raise ValueError("shape mismatch")
        orows = other.row_dicts()
        out: dict[tuple[int, int], int] = {}
        for (r, k), v in self.entries.items():
            row2 = orows.get(k)
            if not row2:
                continue
            for c, w in row2.items():
                key = (r, c)
                nv = out.get(key, 0) + v * w
                if nv:
                    out[key] = nv
                else:
                    del out[key]
        return SparseIntMatrix(self.rows, other.cols, out)

    def mul_vector(self, vec: dict[int, int]) -> dict[int, int]:
        """Matrix times a sparse column vector (dict col -> value)."""
        out: dict[int, int] = {}
        cols = self.col_dicts()
        for c, x in vec.items():
            col = cols.get(c)
            if not col:
                continue
            for r, v in col.items():
                nv = out.get(r, 0) + v * x
                if nv:
                    out[r] = nv
                else:
                    del out[r]
        return out

    def is_zero(self) -> bool:
        return not self.entries

    def to_dense(self) -> list[list[int]]:
        out = [[0] * self.cols for _ in range(self.rows)]
        for (r, c), v in self.entries.items():
            out[r][c] = v
        return out

    @classmethod
    def from_dense(cls, rows: list[list[int]]) -> "SparseIntMatrix":
        nr = len(rows)
        nc = len(rows[0]) if rows else 0
        entries = {
            (r, c): v for r, row in enumerate(rows) for c, v in enumerate(row) if v
        }
        return cls(nr, nc, entries)

    def __eq__(self, other):
        if not isinstance(other, SparseIntMatrix):
            return NotImplemented
        return self.shape == other.shape and self.entries == other.entries

    def __repr__(self):
        return f"SparseIntMatrix({self.rows}x{self.cols}, nnz={self.nnz()})"


def boundary_matrix(k: MatchingComplex, d: int) -> SparseIntMatrix:
    """Matrix of the boundary from dimension d to d-1, canonical bases."""
    if d < 0:
        raise ValueError("boundary_matrix needs d >= 0")
    cols = k.simplices.get(d, ())
    row_index = k.index(d - 1)
    entries: dict[tuple[int, int], int] = {}
    for j, m in enumerate(cols):
        for pos in range(len(m)):
            facet = m[:pos] + m[pos + 1:]
            entries[(row_index[facet], j)] = -1 if pos & 1 else 1
    return SparseIntMatrix(len(row_index), len(cols), entries)


def apply_boundary(k: MatchingComplex, c: Chain) -> Chain:
    """Boundary of a chain supported on ``k``; matches boundary_matrix."""
    d = c.dimension
    if d is None:
        return Chain()
    idx = k.index(d)
    for m in c.terms:
        if m not in idx:
            raise ValueError(f"chain support {m} not in the complex")
    return boundary(c)


def is_cycle(k: MatchingComplex, c: Chain) -> bool:
    return apply_boundary(k, c).is_zero()


def chain_to_vector(k: MatchingComplex, c: Chain, d: int | None = None) -> dict[int, int]:
    """Sparse coordinate vector of a chain in the canonical basis."""
    if d is None:
        d = c.dimension
    if d is None:
        return {}
    idx = k.index(d)
    out = {}
    for m, coeff in c.terms.items():
        if m not in idx:
            raise ValueError(f"chain support {m} not in complex at dim {d}")
        out[idx[m]] = coeff
    return out


def vector_to_chain(k: MatchingComplex, d: int, vec: dict[int, int]) -> Chain:
    sims = k.simplices.get(d, ())
    return Chain({sims[i]: v for i, v in vec.items() if v})


# -- chain text format ------------------------------------------------


def format_chain(c: Chain) -> str:
    """Lines of "coeff  u1 v1 | u2 v2 | ..." naming matchings by edges."""
    lines = []
    for m, coeff in sorted(c.terms.items()):
        body = " | ".join(f"{u} {v}" for u, v in m)
        lines.append(f"{coeff} {body}".rstrip())
    return "\n".join(lines) + "\n"


def parse_chain(text: str) -> Chain:
    total = Chain()
    for ln in text.splitlines():
        ln = ln.strip()
        if not ln or ln.startswith("#"):
            continue
        head, *rest = ln.split(None, 1)
        coeff = int(head)
        edges = []
        if rest and rest[0].strip():
            for part in rest[0].split("|"):
                uv = part.split()
                if len(uv) != 2:
                    raise ValueError(f"bad edge {part!r} in chain line {ln!r}")
                u, v = int(uv[0]), int(uv[1])
                edges.append((min(u, v), max(u, v)))
        if not is_matching(edges):
            raise ValueError(f"line {ln!r} does not name a matching")
        total = total + chain_of(edges, coeff)
    return total
