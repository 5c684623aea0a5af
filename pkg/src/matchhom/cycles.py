"""Explicit cycles: alternating-product generators, fundamental cycles of
complete bipartite matching complexes, and wedge-type constructions.

The alternating product gamma(r) = (12-23) ^ (45-56) ^ ... is the standard
3-torsion representative: an (r-1)-cycle on 3r vertices with 2^r terms.
Fundamental cycles of M(K_{b+1,b}) are built by propagating signs over the
flip graph of maximal matchings (every facet has exactly two maximal
cofaces, so one consistency sweep orients the pseudomanifold) and verified
by a boundary check.
"""

from __future__ import annotations

from itertools import combinations, permutations, product
from typing import Iterable, Sequence

from .chains import Chain, UNIT, boundary, edge_chain, relabel, shift, wedge, wedge_all

CycleType = tuple[tuple[int, int], ...]  # ((n_1, d_1), ..., (n_s, d_s))


def gamma(r: int) -> Chain:
    """The (r-1)-cycle (12-23) ^ (45-56) ^ ... on vertex set [3r]."""
    if r < 1:
        raise ValueError("gamma requires r >= 1")
    factors = []
    for i in range(r):
        a = 3 * i + 1
        factors.append(edge_chain(a, a + 1) - edge_chain(a + 1, a + 2))
    return wedge_all(factors)


def bipartite_fundamental_cycle(a_block: Sequence[int], b_block: Sequence[int]) -> Chain:
    """Fundamental cycle of the matching complex of K_{A,B}, |A| = |B| + 1.

    The maximal matchings (size |B|) are the facets of an orientable
    pseudomanifold; signs are fixed by breadth-first propagation from the
    lexicographically first facet and the result is checked to be a cycle.
    The degenerate case B = {} returns the empty-matching unit.
    """
    a_sorted = tuple(sorted(a_block))
    b_sorted = tuple(sorted(b_block))
    if set(a_sorted) & set(b_sorted):
        raise ValueError("blocks must be disjoint")
    if len(b_sorted) == len(a_sorted) + 1:
        a_sorted, b_sorted = b_sorted, a_sorted
    if len(a_sorted) != len(b_sorted) + 1:
        raise ValueError("block sizes must differ by exactly one")
    if not b_sorted:
        return UNIT

    maximal = []
    for image in permutations(a_sorted, len(b_sorted)):
        m = tuple(sorted(
            (u, v) if u < v else (v, u) for u, v in zip(b_sorted, image)
        ))
        maximal.append(m)
    maximal = sorted(set(maximal))
    index = {m: i for i, m in enumerate(maximal)}

    # facet -> the (at most two) maximal matchings containing it
    facets: dict[tuple, list[int]] = {}
    for i, m in enumerate(maximal):
        for pos in range(len(m)):
            facets.setdefault(m[:pos] + m[pos + 1:], []).append(i)

    def facet_sign(m, facet) -> int:
        pos = next(j for j in range(len(m)) if m[:j] + m[j + 1:] == facet)
        return -1 if pos & 1 else 1

    signs: dict[int, int] = {0: 1}
    queue = [0]
    while queue:
        i = queue.pop()
        m = maximal[i]
        for pos in range(len(m)):
            facet = m[:pos] + m[pos + 1:]
            for j in facets[facet]:
                if j == i or j in signs:
                    continue
                s_i = -1 if pos & 1 else 1
                s_j = facet_sign(maximal[j], facet)
                signs[j] = -signs[i] * s_i * s_j
                queue.append(j)
    if len(signs) != len(maximal):
        raise AssertionError("flip graph of maximal matchings is disconnected")
    cycle = Chain({m: signs[index[m]] for m in maximal})
    if not boundary(cycle).is_zero():
        raise AssertionError("sign propagation did not produce a cycle")
    return cycle


def theta(z: Chain, g: Chain, shift_by: int) -> Chain:
    """z ^ (g shifted up by ``shift_by``), the torsion-transport map."""
    return wedge(z, shift(g, shift_by))


def part_generators(n_i: int, d_i: int, block: Sequence[int]) -> list[Chain]:
    """Deterministic generator list for one factor of a cycle type.

    Supported factors: (1,0) the unit; (3,1) the three vertex-pair
    differences; (2k+1, k) the bipartite fundamental cycles over all
    (k+1, k) splits of the block, the hexagons of a 5-block being the
    k = 2 case.
    """
    block = sorted(block)
    if len(block) != n_i:
        raise ValueError(f"block size {len(block)} does not match part ({n_i},{d_i})")
    if (n_i, d_i) == (1, 0):
        return [UNIT]
    if (n_i, d_i) == (3, 1):
        a, b, c = block
        return [
            edge_chain(a, b) - edge_chain(b, c),
            edge_chain(a, b) - edge_chain(a, c),
            edge_chain(a, c) - edge_chain(b, c),
        ]
    if n_i == 2 * d_i + 1:
        k = d_i
        out = []
        for a_block in combinations(block, k + 1):
            b_block = tuple(v for v in block if v not in a_block)
            out.append(bipartite_fundamental_cycle(a_block, b_block))
        if (n_i, d_i) == (5, 2):
            # the ten 6-term fundamental cycles span only an index-2
            # sublattice of the cycle lattice of a 5-block; the twelve
            # 5-term cycles below restore integral generation
            out.extend(pentagon_cycles(block))
        return out
    raise ValueError(f"no generator family for part ({n_i},{d_i})")


def pentagon_cycles(block: Sequence[int]) -> list[Chain]:
    """The twelve 5-term cycles on a 5-element block, canonical signs.

    Pattern: as^bt + bt^ac + ac^st + st^bc + bc^as over labelings of the
    block, deduplicated up to sign in first-seen lexicographic order.
    """
    block = sorted(block)
    if len(block) != 5:
        raise ValueError("pentagon cycles need a 5-element block")
    e = edge_chain
    seen: set[frozenset] = set()
    out: list[Chain] = []
    for a, b, c, s, t in permutations(block):
        z = (wedge(e(a, s), e(b, t)) + wedge(e(b, t), e(a, c))
             + wedge(e(a, c), e(s, t)) + wedge(e(s, t), e(b, c))
             + wedge(e(b, c), e(a, s)))
        if sorted(z.terms.items())[0][1] < 0:
            z = -z
        key = frozenset(z.terms.items())
        if key not in seen:
            seen.add(key)
            out.append(z)
    return out


def type_cycle(parts: CycleType, partition: Sequence[Sequence[int]],
               choices: Sequence[int | Chain] | None = None) -> Chain:
    """Wedge of per-block generators for the given cycle type.

    ``choices`` selects a generator per part, either by index into
    :func:`part_generators` or as an explicit chain on that block.
    """
    if len(parts) != len(partition):
        raise ValueError("partition length does not match type")
    blocks = [sorted(b) for b in partition]
    seen: set[int] = set()
    for b in blocks:
        if seen & set(b):
            raise ValueError("partition blocks overlap")
        seen |= set(b)
    if choices is None:
        choices = [0] * len(parts)
    factors = []
    for (n_i, d_i), block, choice in zip(parts, blocks, choices):
        if isinstance(choice, Chain):
            factors.append(choice)
        else:
            factors.append(part_generators(n_i, d_i, block)[choice])
    return wedge_all(factors)


def _ordered_partitions(vertices: tuple[int, ...], sizes: Sequence[int],
                        parts: CycleType) -> Iterable[tuple[tuple[int, ...], ...]]:
    """Partitions of ``vertices`` into blocks of the given sizes, lex order.

    Blocks belonging to equal parts are produced in increasing order of
    their minimum element, so each unordered arrangement appears once.
    """
    if not sizes:
        yield ()
        return
    first_size = sizes[0]
    for block in combinations(vertices, first_size):
        rest = tuple(v for v in vertices if v not in block)
        for tail in _ordered_partitions(rest, sizes[1:], parts[1:]):
            if tail and parts[0] == parts[1] and tail[0] < block:
                continue
            yield (block,) + tail


def enumerate_type_cycles(parts: CycleType, n: int, cap: int) -> list[Chain]:
    """At most ``cap`` cycles of the given type on [n], deterministically.

    Enumeration order: partitions of [n] with block sizes as in the type
    (lexicographic, equal parts deduplicated), then per-block generator
    selectors in lexicographic order.
    """
    if sum(p[0] for p in parts) != n:
        raise ValueError("part sizes must sum to n")
    if cap <= 0:
        return []
    out: list[Chain] = []
    vertices = tuple(range(1, n + 1))
    sizes = [p[0] for p in parts]
    for partition in _ordered_partitions(vertices, sizes, parts):
        gens = [part_generators(p[0], p[1], block)
                for p, block in zip(parts, partition)]
        for combo in product(*(range(len(g)) for g in gens)):
            out.append(wedge_all(gens[i][j] for i, j in enumerate(combo)))
            if len(out) >= cap:
                return out
    return out


def permutation_orbit(c: Chain, n: int, cap: int) -> list[Chain]:
    """Relabelings of ``c`` under the first ``cap`` permutations of [n]."""
    out = []
    for perm in permutations(range(1, n + 1)):
        mapping = {i + 1: v for i, v in enumerate(perm)}
        out.append(relabel(c, mapping))
        if len(out) >= cap:
            break
    return out
