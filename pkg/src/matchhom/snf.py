"""Sparse exact integer elimination: Smith normal form, ranks, kernels.

The boundary matrices of matching complexes are very sparse with entries
+-1, so almost the entire reduction happens with unit pivots: clearing a
pivot column needs row operations only, after which the pivot row and
column can be retired (the implicit column ops touch nothing else).
Whatever survives without a unit entry is collected into a small dense
block and finished with the textbook algorithm using arbitrary-precision
integers; intermediate growth is confined to that block.

Pivot rule: take the active column of smallest support (ties by lowest
column index), then within it the unit entry in the shortest row (ties by
lowest row index).  The rule is deterministic, so diagonals, transforms and
cached results are bit-reproducible.

Three variants share the elimination loop:

- ``smith_normal_form``: invariant factors over Z, optional U, V transforms.
- ``rank_exact``: rank over Q with fraction-free updates (any pivot).
- ``rank_mod_p``: rank over GF(p), used as the independent cross-check path.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from math import gcd

from .chains import SparseIntMatrix


@dataclass
class SnfResult:
    """Diagonal of the Smith form plus optional transforms U*M*V = D."""

    diagonal: tuple[int, ...]  # nonzero invariant factors, d1 | d2 | ...
    rows: int
    cols: int
    U: SparseIntMatrix | None = None
    V: SparseIntMatrix | None = None

    @property
    def rank(self) -> int:
        return len(self.diagonal)

    def torsion(self) -> tuple[int, ...]:
        return tuple(d for d in self.diagonal if d > 1)

    def rank_mod(self, p: int) -> int:
        """Rank over GF(p), free from the invariant factors."""
        return sum(1 for d in self.diagonal if d % p != 0)

    def d_matrix(self) -> SparseIntMatrix:
        return SparseIntMatrix(
            self.rows, self.cols,
            {(i, i): d for i, d in enumerate(self.diagonal)},
        )


@dataclass
class LatticeReduction:
    """Row-reduced data for membership of vectors in a column lattice.

    ``pivots`` lists (row, invariant value) for every pivot row of the
    reduction; ``reduced`` holds the carried vectors after the same row
    operations.  A vector lies in the lattice iff each pivot-row value is
    divisible by its invariant and every non-pivot-row value vanishes.
    """

    pivots: list[tuple[int, int]]
    reduced: list[dict[int, int]]

    def _parts(self, i: int) -> tuple[list[tuple[int, int]], dict[int, int]]:
        vec = dict(self.reduced[i])
        paired = []
        for r, d in self.pivots:
            paired.append((d, vec.pop(r, 0)))
        return paired, vec

    def in_lattice(self, i: int) -> bool:
        paired, residual = self._parts(i)
        return all(v % d == 0 for d, v in paired) and not any(residual.values())

    def order(self, i: int) -> int | None:
        """Least m >= 1 with m * vector in the lattice; None if infinite."""
        paired, residual = self._parts(i)
        if any(residual.values()):
            return None
        m = 1
        for d, v in paired:
            need = d // gcd(d, v % d if v % d else d)
            m = m * need // gcd(m, need)
        return m


class _Elim:
    """One elimination pass over a sparse integer matrix."""

    def __init__(self, m: SparseIntMatrix, mode: str, p: int | None = None,
                 carried: list[dict[int, int]] | None = None,
                 track_u: bool = False, track_v: bool = False):
        self.mode = mode  # "snf" | "rank" | "modp"
        self.p = p
        self.nrows, self.ncols = m.rows, m.cols
        rows: dict[int, dict[int, int]] = {}
        cols: dict[int, set[int]] = {}
        for (r, c), v in m.entries.items():
            if mode == "modp":
                v %= p
                if not v:
                    continue
            rows.setdefault(r, {})[c] = v
            cols.setdefault(c, set()).add(r)
        self.rows = rows
        self.cols = cols
        self.heap: list[tuple[int, int]] = [(len(rs), c) for c, rs in cols.items()]
        heapq.heapify(self.heap)
        self.pivots: list[tuple[int, int, int]] = []  # (row, col, value)
        self.carried = carried
        self.urows: dict[int, dict[int, int]] | None = {} if track_u else None
        self.vcols: dict[int, dict[int, int]] | None = {} if track_v else None

    # -- transform bookkeeping ---------------------------------------

    def _urow(self, r: int) -> dict[int, int]:
        row = self.urows.get(r)
        if row is None:
            row = self.urows[r] = {r: 1}
        return row

    def _vcol(self, c: int) -> dict[int, int]:
        col = self.vcols.get(c)
        if col is None:
            col = self.vcols[c] = {c: 1}
        return col

    def _row_op(self, tgt: int, src: int, mult: int):
        """Row tgt -= mult * row src, on transforms and carried columns."""
        if self.urows is not None:
            srow, trow = self._urow(src), self._urow(tgt)
            for k, v in srow.items():
                nv = trow.get(k, 0) - mult * v
                if nv:
                    trow[k] = nv
                else:
                    trow.pop(k, None)
        if self.carried is not None:
            for vec in self.carried:
                x = vec.get(src, 0)
                if x:
                    nv = vec.get(tgt, 0) - mult * x
                    if nv:
                        vec[tgt] = nv
                    else:
                        vec.pop(tgt, None)

    def _col_op(self, tgt: int, src: int, mult: int):
        """Column tgt -= mult * column src on V."""
        if self.vcols is None:
            return
        scol, tcol = self._vcol(src), self._vcol(tgt)
        for k, v in scol.items():
            nv = tcol.get(k, 0) - mult * v
            if nv:
                tcol[k] = nv
            else:
                tcol.pop(k, None)

    # -- sparse phase --------------------------------------------------

    def _pick_column(self) -> int | None:
        """Pop the shortest usable active column; None when exhausted."""
        heap, cols = self.heap, self.cols
        deferred = []
        found = None
        while heap:
            ln, c = heapq.heappop(heap)
            rs = cols.get(c)
            if rs is None or not rs:
                continue
            if ln != len(rs):
                heapq.heappush(heap, (len(rs), c))  # refresh stale entry
                continue
            if self.mode != "snf":
                found = c
                break
            rows = self.rows
            if any(abs(rows[r][c]) == 1 for r in rs):
                found = c
                break
            deferred.append((ln, c))
        for item in deferred:
            heapq.heappush(heap, item)
        return found

    def _pick_row(self, c: int) -> int:
        rows = self.rows
        if self.mode == "snf":
            cand = (r for r in self.cols[c] if abs(rows[r][c]) == 1)
        else:
            cand = iter(self.cols[c])
        return min(cand, key=lambda r: (len(rows[r]), r))

    def sparse_phase(self):
        rows, cols = self.rows, self.cols
        mode, p = self.mode, self.p
        track = self.urows is not None or self.carried is not None
        while True:
            c = self._pick_column()
            if c is None:
                return
            r = self._pick_row(c)
            prow = rows.pop(r)
            v = prow[c]
            # detach the pivot row from the column index
            for c2 in prow:
                cols[c2].discard(r)
            targets = sorted(cols[c])
            for r2 in targets:
                row2 = rows[r2]
                a = row2[c]
                if mode == "snf":
                    mult = a * v  # v = +-1, so mult * v == a
                elif mode == "modp":
                    mult = a * pow(v, -1, p) % p
                else:  # rank over Q, fraction-free
                    if a % v:
                        # scale the target row by the pivot value first;
                        # rank is unchanged and entries stay integral
                        for c2 in row2:
                            row2[c2] *= v
                        a = row2[c]
                    mult = a // v
                for c2, w in prow.items():
                    nv = row2.get(c2, 0) - mult * w
                    if mode == "modp":
                        nv %= p
                    if nv:
                        row2[c2] = nv
                        cols[c2].add(r2)
                    elif c2 in row2:
                        del row2[c2]
                        cols[c2].discard(r2)
                if mode == "rank" and row2:
                    g = 0
                    for w in row2.values():
                        g = gcd(g, w)
                        if g == 1:
                            break
                    if g > 1:
                        for c2 in row2:
                            row2[c2] //= g
                if track:
                    self._row_op(r2, r, mult)
                if not row2:
                    del rows[r2]
            del cols[c]
            # implicit column clears for the retired pivot row
            if self.vcols is not None:
                for c2, w in prow.items():
                    if c2 != c:
                        if abs(v) != 1:
                            raise AssertionError("non-unit pivot in sparse snf phase")
                        self._col_op(c2, c, w * v)
            self.pivots.append((r, c, v))

    # -- dense phase (snf only) ----------------------------------------

    def dense_phase(self, enforce_chain: bool):
        rows = self.rows
        rowids = sorted(r for r, row in rows.items() if row)
        colset: set[int] = set()
        for r in rowids:
            colset.update(rows[r])
        colids = sorted(colset)
        if not rowids or not colids:
            return []
        cindex = {c: j for j, c in enumerate(colids)}
        a = [[0] * len(colids) for _ in rowids]
        for i, r in enumerate(rowids):
            for c, v in rows[r].items():
                a[i][cindex[c]] = v
        m, n = len(rowids), len(colids)

        def row_op(ti, si, q):
            ra, rb = a[ti], a[si]
            for j in range(n):
                if rb[j]:
                    ra[j] -= q * rb[j]
            self._row_op(rowids[ti], rowids[si], q)

        def col_op(tj, sj, q):
            for i in range(m):
                if a[i][sj]:
                    a[i][tj] -= q * a[i][sj]
            self._col_op(colids[tj], colids[sj], q)

        def row_swap(i1, i2):
            a[i1], a[i2] = a[i2], a[i1]
            rowids[i1], rowids[i2] = rowids[i2], rowids[i1]

        def col_swap(j1, j2):
            for i in range(m):
                a[i][j1], a[i][j2] = a[i][j2], a[i][j1]
            colids[j1], colids[j2] = colids[j2], colids[j1]

        def negate_row(i):
            a[i] = [-x for x in a[i]]
            if self.urows is not None:
                self.urows[rowids[i]] = {k: -v for k, v in self._urow(rowids[i]).items()}
            if self.carried is not None:
                r = rowids[i]
                for vec in self.carried:
                    if r in vec:
                        vec[r] = -vec[r]

        diag = []
        t = 0
        while t < m and t < n:
            best = None
            for i in range(t, m):
                row = a[i]
                for j in range(t, n):
                    v = row[j]
                    if v and (best is None or (abs(v), i, j) < best):
                        best = (abs(v), i, j)
            if best is None:
                break
            _, bi, bj = best
            if bi != t:
                row_swap(t, bi)
            if bj != t:
                col_swap(t, bj)
            while True:
                # clear column t
                for i in range(t + 1, m):
                    while a[i][t]:
                        q = a[i][t] // a[t][t]
                        if q:
                            row_op(i, t, q)
                        if a[i][t]:
                            row_swap(t, i)
                # clear row t; may reintroduce column entries
                for j in range(t + 1, n):
                    while a[t][j]:
                        q = a[t][j] // a[t][t]
                        if q:
                            col_op(j, t, q)
                        if a[t][j]:
                            col_swap(t, j)
                if all(a[i][t] == 0 for i in range(t + 1, m)) and \
                   all(a[t][j] == 0 for j in range(t + 1, n)):
                    break
            if enforce_chain:
                # pivot must divide the rest of the block
                piv = a[t][t]
                offender = None
                for i in range(t + 1, m):
                    for j in range(t + 1, n):
                        if a[i][j] % piv:
                            offender = i
                            break
                    if offender is not None:
                        break
                if offender is not None:
                    row_op(t, offender, -1)  # add offending row to pivot row
                    continue
            if a[t][t] < 0:
                negate_row(t)
            diag.append(a[t][t])
            self.pivots.append((rowids[t], colids[t], a[t][t]))
            t += 1
        return diag


def _invariant_chain(values: list[int]) -> list[int]:
    """Canonical divisibility chain of a diagonal multiset."""
    vals = sorted(abs(v) for v in values if v)
    rest = [v for v in vals if v != 1]
    ones = len(vals) - len(rest)
    changed = True
    while changed:
        changed = False
        for i in range(len(rest)):
            for j in range(i + 1, len(rest)):
                x, y = rest[i], rest[j]
                if y % x:
                    g = gcd(x, y)
                    rest[i], rest[j] = g, x * y // g
                    changed = True
        rest.sort()
    return [1] * ones + rest


def smith_normal_form(m: SparseIntMatrix, want_transforms: bool = False) -> SnfResult:
    elim = _Elim(m, "snf", track_u=want_transforms, track_v=want_transforms)
    elim.sparse_phase()
    dense_diag = elim.dense_phase(enforce_chain=want_transforms)
    units = len(elim.pivots) - len(dense_diag)
    if want_transforms:
        diagonal = [1] * units + dense_diag
    else:
        diagonal = [1] * units + _invariant_chain(dense_diag)
    u = v = None
    if want_transforms:
        pivot_rows = [r for r, _, _ in elim.pivots]
        pivot_cols = [c for _, c, _ in elim.pivots]
        row_order = pivot_rows + sorted(set(range(m.rows)) - set(pivot_rows))
        col_order = pivot_cols + sorted(set(range(m.cols)) - set(pivot_cols))
        uent = {}
        for i, r in enumerate(row_order):
            for k, val in elim.urows.get(r, {r: 1}).items():
                uent[(i, k)] = val
        vent = {}
        for j, c in enumerate(col_order):
            for k, val in elim.vcols.get(c, {c: 1}).items():
                vent[(k, j)] = val
        u = SparseIntMatrix(m.rows, m.rows, uent)
        v = SparseIntMatrix(m.cols, m.cols, vent)
    return SnfResult(tuple(diagonal), m.rows, m.cols, u, v)


def snf_diagonal(m: SparseIntMatrix) -> tuple[int, ...]:
    return smith_normal_form(m).diagonal


def rank_exact(m: SparseIntMatrix) -> int:
    """Rank over Q (equivalently over Z), fraction-free."""
    elim = _Elim(m, "rank")
    elim.sparse_phase()
    if elim.rows and any(elim.rows.values()):
        raise AssertionError("rank elimination left entries behind")
    return len(elim.pivots)


def rank_mod_p(m: SparseIntMatrix, p: int) -> int:
    """Rank over GF(p) by independent sparse Gaussian elimination."""
    elim = _Elim(m, "modp", p=p)
    elim.sparse_phase()
    if elim.rows and any(elim.rows.values()):
        raise AssertionError("mod-p elimination left entries behind")
    return len(elim.pivots)


def kernel_basis(m: SparseIntMatrix) -> list[dict[int, int]]:
    """Basis of the integer kernel lattice {x : Mx = 0}.

    Vectors are sparse dicts over column indices; they span ker(M) over Q
    and generate the full (pure) kernel sublattice over Z.
    """
    elim = _Elim(m, "snf", track_v=True)
    elim.sparse_phase()
    elim.dense_phase(enforce_chain=False)
    pivot_cols = {c for _, c, _ in elim.pivots}
    out = []
    for c in range(m.cols):
        if c in pivot_cols:
            continue
        col = elim.vcols.get(c, {c: 1})
        out.append({k: v for k, v in col.items() if v})
    return out


def lattice_reduce(m: SparseIntMatrix, vectors: list[dict[int, int]]) -> LatticeReduction:
    """Carry column vectors through the row reduction of ``m``.

    The result answers membership and order questions for the column
    lattice of ``m`` without materializing the U transform.
    """
    carried = [dict(v) for v in vectors]
    elim = _Elim(m, "snf", carried=carried)
    elim.sparse_phase()
    elim.dense_phase(enforce_chain=False)
    pivots = [(r, abs(v)) for r, _, v in elim.pivots]
    return LatticeReduction(pivots, carried)
