"""Exact reduced homology of matching complexes.

Over Z the computation is Smith normal form of two boundary matrices: the
free rank of H_d is dim C_d - rank(bd_d) - rank(bd_{d+1}) and the torsion
is read off the invariant factors of bd_{d+1} exceeding 1.  Over Q and
GF(p) only ranks are needed; the GF(p) path runs an independent Gaussian
elimination so the universal-coefficient cross-check really compares two
routes.

Results are memoized behind a lock keyed by (complex digest, degree, ring);
an optional on-disk cache can be attached for the CLI.
"""

from __future__ import annotations

import threading
import time
from dataclasses import dataclass, field
from math import gcd

from .chains import Chain, SparseIntMatrix, boundary_matrix, chain_to_vector, is_cycle
from .complexes import ComplexPair, MatchingComplex
from .snf import (
    SnfResult,
    kernel_basis,
    lattice_reduce,
    rank_exact,
    rank_mod_p,
    smith_normal_form,
)

Ring = str | int  # "Z", "Q", or a prime p

TRIAL_DIVISION_BOUND = 10 ** 6


def normalize_ring(ring: Ring) -> Ring:
    if isinstance(ring, int):
        if ring < 2:
            raise ValueError(f"field characteristic must be a prime, got {ring}")
        return ring
    if ring in ("Z", "Q"):
        return ring
    if isinstance(ring, str) and ring.startswith("Zp:"):
        return int(ring.split(":", 1)[1])
    raise ValueError(f"unknown ring {ring!r}")


@dataclass(frozen=True)
class GroupDescriptor:
    """A finitely generated abelian group: free rank + invariant factors.

    Over a field only ``free_rank`` is meaningful (the dimension).  The
    torsion list d1 | d2 | ... is canonical with every factor > 1.
    """

    free_rank: int
    torsion: tuple[int, ...] = ()

    def __post_init__(self):
        for i, d in enumerate(self.torsion):
            if d <= 1:
                raise ValueError("torsion factors must exceed 1")
            if i and d % self.torsion[i - 1]:
                raise ValueError("torsion factors must form a divisibility chain")

    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    def p_torsion_count(self, p: int) -> int:
        return sum(1 for d in self.torsion if d % p == 0)

    def exponent(self) -> int | None:
        """Exponent of the torsion part (1 if torsion-free)."""
        return self.torsion[-1] if self.torsion else 1

    def direct_sum(self, other: "GroupDescriptor") -> "GroupDescriptor":
        from .snf import _invariant_chain

        chain = _invariant_chain(list(self.torsion) + list(other.torsion))
        return GroupDescriptor(self.free_rank + other.free_rank,
                               tuple(d for d in chain if d > 1))

    def torsion_primes(self) -> dict[int, int]:
        """Prime -> number of invariant factors it divides.

        Factors are split by trial division; anything surviving above the
        bound is reported under itself (unfactored).
        """
        counts: dict[int, int] = {}
        for d in self.torsion:
            for p in _factor(d):
                counts[p] = counts.get(p, 0) + 1
        return counts

    def __str__(self):
        if self.is_trivial():
            return "0"
        parts = []
        if self.free_rank == 1:
            parts.append("Z")
        elif self.free_rank > 1:
            parts.append(f"Z^{self.free_rank}")
        i = 0
        while i < len(self.torsion):
            d = self.torsion[i]
            j = i
            while j < len(self.torsion) and self.torsion[j] == d:
                j += 1
            count = j - i
            parts.append(f"Z_{d}" if count == 1 else f"Z_{d}^{count}")
            i = j
        return " + ".join(parts)


def _factor(n: int) -> list[int]:
    """Distinct prime factors by trial division; large leftovers unfactored."""
    out = []
    m = n
    p = 2
    while p * p <= m and p <= TRIAL_DIVISION_BOUND:
        if m % p == 0:
            out.append(p)
            while m % p == 0:
                m //= p
        p += 1 if p == 2 else 2
    if m > 1:
        out.append(m)
    return out


def group_from_snf(c_dim: int, rank_d: int, snf_up: SnfResult) -> GroupDescriptor:
    free = c_dim - rank_d - snf_up.rank
    return GroupDescriptor(free, snf_up.torsion())


ZERO_GROUP = GroupDescriptor(0)


# -- memo / cache -------------------------------------------------------

_memo: dict[tuple, GroupDescriptor] = {}
_memo_lock = threading.RLock()
_snf_memo: dict[tuple, SnfResult] = {}
_disk_cache = None  # set by the CLI via attach_disk_cache


def attach_disk_cache(cache) -> None:
    """Install a ResultCache used by homology() for Z/Q/p results."""
    global _disk_cache
    _disk_cache = cache


def clear_memo() -> None:
    with _memo_lock:
        _memo.clear()
        _snf_memo.clear()


def boundary_snf(k: MatchingComplex, d: int) -> SnfResult:
    """Memoized Smith normal form of the boundary in dimension d."""
    key = (k.content_key(), d)
    with _memo_lock:
        hit = _snf_memo.get(key)
    if hit is not None:
        return hit
    n_low = len(k.simplices.get(d - 1, ()))
    n_high = len(k.simplices.get(d, ()))
    if d < 0 or n_high == 0:
        res = SnfResult((), n_low, n_high)
    else:
        res = smith_normal_form(boundary_matrix(k, d))
    with _memo_lock:
        _snf_memo[key] = res
    return res


def _field_dim(k: MatchingComplex, d: int, p: int | None) -> int:
    """dim H_d over GF(p) (p prime) or Q (p None), by Gaussian elimination."""
    c_dim = len(k.simplices.get(d, ()))
    if c_dim == 0:
        return 0
    lo = boundary_matrix(k, d) if d >= 0 else None
    hi_sims = len(k.simplices.get(d + 1, ()))
    hi = boundary_matrix(k, d + 1) if hi_sims else None
    if p is None:
        r_lo = rank_exact(lo) if lo is not None else 0
        r_hi = rank_exact(hi) if hi is not None else 0
    else:
        r_lo = rank_mod_p(lo, p) if lo is not None else 0
        r_hi = rank_mod_p(hi, p) if hi is not None else 0
    return c_dim - r_lo - r_hi


def homology(k: MatchingComplex, d: int, ring: Ring = "Z") -> GroupDescriptor:
    """Reduced homology of ``k`` in degree d over the given ring.

    Degrees with no simplices give the zero group; H_{-1} of {()} is the
    coefficient ring.  Over a field the descriptor carries the dimension in
    ``free_rank`` with empty torsion.
    """
    ring = normalize_ring(ring)
    key = (k.content_key(), d, ring)
    with _memo_lock:
        hit = _memo.get(key)
    if hit is not None:
        return hit
    if _disk_cache is not None:
        cached = _disk_cache.get_group(key)
        if cached is not None:
            with _memo_lock:
                _memo[key] = cached
            return cached

    t0 = time.perf_counter()
    c_dim = len(k.simplices.get(d, ()))
    if c_dim == 0:
        result = ZERO_GROUP
    elif ring == "Z":
        rank_d = boundary_snf(k, d).rank if d >= 0 else 0
        result = group_from_snf(c_dim, rank_d, boundary_snf(k, d + 1))
    elif ring == "Q":
        result = GroupDescriptor(_field_dim(k, d, None))
    else:
        result = GroupDescriptor(_field_dim(k, d, ring))
    wall_ms = (time.perf_counter() - t0) * 1000.0

    with _memo_lock:
        _memo[key] = result
    if _disk_cache is not None:
        _disk_cache.put_group(key, result, wall_ms)
    return result


def homology_groups(k: MatchingComplex, ring: Ring = "Z") -> dict[int, GroupDescriptor]:
    """All degrees from -1 through the top dimension."""
    if k.is_void:
        return {}
    return {d: homology(k, d, ring) for d in range(-1, k.dim + 1)}


# -- relative homology ---------------------------------------------------


def relative_boundary_matrix(pair: ComplexPair, d: int) -> SparseIntMatrix:
    """Boundary of the quotient complex C(ambient)/C(sub) in dimension d."""
    amb, sub = pair.ambient, pair.sub
    cols = [m for m in amb.simplices.get(d, ()) if m not in sub.index(d)]
    rows = [m for m in amb.simplices.get(d - 1, ()) if m not in sub.index(d - 1)]
    row_index = {m: i for i, m in enumerate(rows)}
    entries = {}
    for j, m in enumerate(cols):
        for pos in range(len(m)):
            facet = m[:pos] + m[pos + 1:]
            i = row_index.get(facet)
            if i is not None:
                entries[(i, j)] = -1 if pos & 1 else 1
    return SparseIntMatrix(len(rows), len(cols), entries)


def relative_homology(pair: ComplexPair, d: int, ring: Ring = "Z") -> GroupDescriptor:
    """Homology of the relative chain complex of the pair."""
    ring = normalize_ring(ring)
    amb, sub = pair.ambient, pair.sub
    c_dim = sum(1 for m in amb.simplices.get(d, ()) if m not in sub.index(d))
    if c_dim == 0:
        return ZERO_GROUP
    lo = relative_boundary_matrix(pair, d)
    hi = relative_boundary_matrix(pair, d + 1)
    if ring == "Z":
        return group_from_snf(c_dim, smith_normal_form(lo).rank, smith_normal_form(hi))
    if ring == "Q":
        return GroupDescriptor(c_dim - rank_exact(lo) - rank_exact(hi))
    return GroupDescriptor(c_dim - rank_mod_p(lo, ring) - rank_mod_p(hi, ring))


# -- class orders and generation checks ----------------------------------


def class_order(k: MatchingComplex, z: Chain) -> int | None:
    """Order of the homology class of the cycle ``z``; None = infinite.

    Smallest m >= 1 with m*z a boundary, found by carrying z through the
    row reduction of the next boundary matrix (the U transform is applied
    on the fly, never materialized).
    """
    if not is_cycle(k, z):
        raise ValueError("class_order requires a cycle")
    if z.is_zero():
        return 1
    d = z.dimension
    vec = chain_to_vector(k, z, d)
    mat = boundary_matrix(k, d + 1) if k.simplices.get(d + 1) else \
        SparseIntMatrix(len(k.simplices.get(d, ())), 0)
    red = lattice_reduce(mat, [vec])
    return red.order(0)


def classes_generate(k: MatchingComplex, d: int, cycles: list[Chain], ring: Ring = "Z") -> bool:
    """Do the classes of ``cycles`` generate H_d(k) over the ring?

    True iff span(cycles) + boundaries = all cycles.  Over a field this is
    a rank computation; over Z each member of an integral kernel basis is
    tested for membership in the lattice spanned by boundaries and cycles.
    """
    ring = normalize_ring(ring)
    for z in cycles:
        if not (z.is_zero() or z.dimension == d):
            raise ValueError("generator of wrong dimension")
        if not is_cycle(k, z):
            raise ValueError("classes_generate requires cycles")
    c_dim = len(k.simplices.get(d, ()))
    if c_dim == 0:
        return True
    lo = boundary_matrix(k, d) if d >= 0 else None
    hi = boundary_matrix(k, d + 1) if k.simplices.get(d + 1) else \
        SparseIntMatrix(c_dim, 0)

    n_extra = len(cycles)
    combined = SparseIntMatrix(c_dim, hi.cols + n_extra, dict(hi.entries))
    for j, z in enumerate(cycles):
        for i, v in chain_to_vector(k, z, d).items():
            combined.entries[(i, hi.cols + j)] = v

    if ring == "Q":
        dim_ker = c_dim - (rank_exact(lo) if lo is not None else 0)
        return rank_exact(combined) == dim_ker
    if isinstance(ring, int):
        dim_ker = c_dim - (rank_mod_p(lo, ring) if lo is not None else 0)
        return rank_mod_p(combined, ring) == dim_ker

    basis = kernel_basis(lo) if lo is not None else \
        [{i: 1} for i in range(c_dim)]
    if not basis:
        return True
    red = lattice_reduce(combined, basis)
    return all(red.in_lattice(i) for i in range(len(basis)))


def uct_dimension_check(k: MatchingComplex, d: int, p: int) -> bool:
    """Universal-coefficient cross-check of the GF(p) and Z pipelines.

    dim_p H_d must equal rank H_d + (p-torsion of H_d) + (p-torsion of
    H_{d-1}); the left side comes from Gaussian elimination mod p, the
    right side from Smith normal form over Z.
    """
    hd = homology(k, d, "Z")
    hd1 = homology(k, d - 1, "Z")
    expected = hd.free_rank + hd.p_torsion_count(p) + hd1.p_torsion_count(p)
    return _field_dim(k, d, p) == expected


def exponent_divides(order: int | None, group: GroupDescriptor) -> bool:
    """Does a finite class order divide the group exponent?"""
    if order is None:
        return group.free_rank > 0
    exp = group.exponent()
    return exp is not None and exp % order == 0


def order_after_scaling(order: int, m: int) -> int:
    """Order of m*z given the order of z."""
    return order // gcd(order, m)
