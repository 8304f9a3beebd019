"""Second integral homology via the normalized bar resolution.

Bases in degree k are k-tuples of non-identity elements; the boundary
maps are

    d2[g1|g2]    = [g2] - [g1*g2] + [g1]
    d3[g1|g2|g3] = [g2|g3] - [g1*g2|g3] + [g1|g2*g3] - [g1|g2]

with any tuple containing the identity sent to zero.  For a finite
group H2 = ker d2 / im d3 is finite, and because ker d2 is a pure
sublattice of the degree-2 chain lattice the torsion of C2 / im d3
equals H2 exactly; the invariant factors of im d3 (plus rank checks)
therefore give the multiplier without an explicit kernel basis.

Two elimination back ends:

* exact: arbitrary-precision incremental Hermite accumulation of the
  streamed d3 columns followed by exact Smith reduction (the default
  for small orders and the reference oracle);
* mod p^E: for p-groups all invariant factors are p-powers bounded by
  Green's inequality, so all arithmetic can run modulo p^E with
  E = n(n-1)+1; valuation bookkeeping makes precision loss loud, and a
  compiled kernel makes half-million-column streams cheap.

d3 is never materialized: its columns are generated in chunks and
streamed into the accumulator.
"""

from __future__ import annotations

import heapq
import math
import random
from dataclasses import dataclass
from typing import Callable, Iterable, Iterator

import numpy as np

from .errors import ConsistencyError, SizeError, ValidationError
from .groups import AbelianInvariants, FiniteGroup, prime_power

DEFAULT_HOMOLOGY_CAP = 128
EXACT_AUTO_LIMIT = 16  # auto mode uses exact arithmetic up to this order

Column = tuple[tuple[int, int], ...]


# -- sparse matrices ------------------------------------------------------------


@dataclass(frozen=True)
class SparseIntMatrix:
    """Column-major sparse integer matrix; columns may be generated lazily."""

    rows: int
    cols: int
    columns: tuple[Column, ...] | None = None
    column_factory: Callable[[], Iterator[Column]] | None = None

    def __post_init__(self):
        if self.columns is None and self.column_factory is None:
            raise ValidationError("matrix needs stored columns or a factory")
        if self.columns is not None:
            for col in self.columns:
                last = -1
                for r, v in col:
                    if not 0 <= r < self.rows:
                        raise ValidationError(f"row index {r} out of range")
                    if r <= last:
                        raise ValidationError("column rows must be strictly increasing")
                    if v == 0:
                        raise ValidationError("stored zero entry")
                    last = r

    @classmethod
    def from_dense(cls, dense) -> "SparseIntMatrix":
        dense = [list(row) for row in dense]
        nrows = len(dense)
        ncols = len(dense[0]) if nrows else 0
        cols = []
        for j in range(ncols):
            cols.append(tuple((i, dense[i][j]) for i in range(nrows) if dense[i][j]))
        return cls(nrows, ncols, tuple(cols))

    @classmethod
    def from_row_dicts(cls, rows: list[dict[int, int]], ncols: int) -> "SparseIntMatrix":
        coldata: dict[int, list[tuple[int, int]]] = {}
        for i, rd in enumerate(rows):
            for c, v in rd.items():
                if v:
                    coldata.setdefault(c, []).append((i, v))
        cols = []
        for j in range(ncols):
            cols.append(tuple(sorted(coldata.get(j, ()))))
        return cls(len(rows), ncols, tuple(cols))

    def iter_columns(self) -> Iterator[Column]:
        if self.columns is not None:
            yield from self.columns
        else:
            yield from self.column_factory()

    def materialized(self) -> "SparseIntMatrix":
        if self.columns is not None:
            return self
        return SparseIntMatrix(self.rows, self.cols, tuple(self.iter_columns()))

    @property
    def nnz(self) -> int:
        return sum(len(c) for c in self.iter_columns())

    def to_dense(self) -> list[list[int]]:
        out = [[0] * self.cols for _ in range(self.rows)]
        for j, col in enumerate(self.iter_columns()):
            for i, v in col:
                out[i][j] = v
        return out

    def compose(self, other: "SparseIntMatrix") -> "SparseIntMatrix":
        """self @ other (apply self to each column of other)."""
        if self.cols != other.rows:
            raise ValidationError("dimension mismatch in compose")
        mine = self.materialized().columns
        out_cols = []
        for col in other.iter_columns():
            acc: dict[int, int] = {}
            for r, v in col:
                for i, u in mine[r]:
                    acc[i] = acc.get(i, 0) + v * u
            out_cols.append(tuple(sorted((i, v) for i, v in acc.items() if v)))
        return SparseIntMatrix(self.rows, other.cols, tuple(out_cols))


@dataclass(frozen=True)
class SnfResult:
    """Nonzero diagonal of the Smith form: d_1 | d_2 | ... ."""

    invariant_factors: tuple[int, ...]
    rank: int

    def __post_init__(self):
        fs = self.invariant_factors
        for a, b in zip(fs, fs[1:]):
            if b % a != 0:
                raise ConsistencyError(f"Smith diagonal not a chain: {fs}")

    @property
    def nontrivial(self) -> tuple[int, ...]:
        return tuple(f for f in self.invariant_factors if f != 1)


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """(g, x, y) with x*a + y*b = g = gcd(a, b) >= 0."""
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def smith_normal_form(matrix: SparseIntMatrix, seed: int | None = None) -> SnfResult:
    """Exact invariant factors over Z.

    Pivots take the least |value| with sparsest row+column as tie-break;
    remaining ties break by a seeded shuffle, which cannot change the
    (canonical) result but exercises pivot-order independence.
    """
    rows: dict[int, dict[int, int]] = {}
    colrows: dict[int, set[int]] = {}
    for j, col in enumerate(matrix.iter_columns()):
        for i, v in col:
            rows.setdefault(i, {})[j] = v
            colrows.setdefault(j, set()).add(i)
    rng = random.Random(0 if seed is None else seed)

    def add_row(dst: int, src: int, mult: int):
        rd = rows[dst]
        for c, v in rows[src].items():
            nv = rd.get(c, 0) + mult * v
            if nv:
                rd[c] = nv
                colrows[c].add(dst)
            elif c in rd:
                del rd[c]
                colrows[c].discard(dst)
        if not rd:
            del rows[dst]

    def negate_row(r: int):
        rows[r] = {c: -v for c, v in rows[r].items()}

    factors: list[int] = []
    while rows:
        best_key = None
        candidates: list[tuple[int, int]] = []
        for r, rd in rows.items():
            for c, v in rd.items():
                key = (abs(v), len(rd) + len(colrows[c]))
                if best_key is None or key < best_key:
                    best_key = key
                    candidates = [(r, c)]
                elif key == best_key:
                    candidates.append((r, c))
        r0, c0 = candidates[rng.randrange(len(candidates))]
        if rows[r0][c0] < 0:
            negate_row(r0)

        while True:
            v = rows[r0][c0]
            moved = False
            # clear / shrink along the pivot column
            for r in sorted(colrows[c0]):
                if r == r0 or r not in rows or c0 not in rows.get(r, {}):
                    continue
                q = rows[r][c0] // v
                if q:
                    add_row(r, r0, -q)
                if r in rows and rows[r].get(c0):
                    # nonzero remainder: strictly smaller pivot found
                    r0 = r
                    if rows[r0][c0] < 0:
                        negate_row(r0)
                    moved = True
                    break
            if moved:
                continue
            # pivot column now contains only the pivot; clear the pivot row
            # (column ops touch nothing else since the column is clean)
            rd = rows[r0]
            tail = [c for c in rd if c != c0]
            done_row = True
            for c in tail:
                q, rem = divmod(rd[c], v)
                if rem:
                    # move pivot within the row and start over
                    rd[c] = rem
                    if q:
                        pass  # the subtracted part is a column op with no other witnesses
                    c0 = c
                    done_row = False
                    break
                del rd[c]
                colrows[c].discard(r0)
            if not done_row:
                continue
            if abs(v) != 1:
                # the pivot must divide every remaining entry
                offender = None
                for r, rdd in rows.items():
                    if r == r0:
                        continue
                    for c, w in rdd.items():
                        if w % v:
                            offender = r
                            break
                    if offender is not None:
                        break
                if offender is not None:
                    add_row(r0, offender, 1)
                    continue
            break

        factors.append(abs(rows[r0][c0]))
        del rows[r0]
        colrows[c0].discard(r0)
    return SnfResult(tuple(factors), len(factors))


# -- incremental Hermite basis of a column span ---------------------------------


class HermiteBasis:
    """Row-style Hermite basis of an integer lattice, fed one column at a time.

    Rows are keyed by pivot column; every stored row has positive pivot
    and support only at columns >= its pivot.
    """

    def __init__(self, ambient: int):
        self.ambient = ambient
        self.rows: dict[int, dict[int, int]] = {}

    @property
    def rank(self) -> int:
        return len(self.rows)

    @property
    def pivots(self) -> dict[int, int]:
        return {j: row[j] for j, row in self.rows.items()}

    def add_column(self, entries: Iterable[tuple[int, int]]):
        w: dict[int, int] = {}
        for i, v in entries:
            if not 0 <= i < self.ambient:
                raise ValidationError(f"column index {i} out of range")
            nv = w.get(i, 0) + v
            if nv:
                w[i] = nv
            elif i in w:
                del w[i]
        heap = list(w)
        heapq.heapify(heap)
        inheap = set(heap)
        while heap:
            j = heapq.heappop(heap)
            inheap.discard(j)
            v = w.pop(j, 0)
            if not v:
                continue
            row = self.rows.get(j)
            if row is None:
                neg = v < 0
                newrow = {j: -v if neg else v}
                for c, u in w.items():
                    newrow[c] = -u if neg else u
                self.rows[j] = newrow
                return
            a = row[j]
            if v % a == 0:
                q = v // a
                for c, u in row.items():
                    if c == j:
                        continue
                    nv = w.get(c, 0) - q * u
                    if nv:
                        w[c] = nv
                        if c not in inheap:
                            heapq.heappush(heap, c)
                            inheap.add(c)
                    elif c in w:
                        del w[c]
            else:
                g, x, y = xgcd(a, v)
                aa, bb = a // g, v // g
                newrow: dict[int, int] = {}
                neww: dict[int, int] = {}
                keys = set(row) | set(w) | {j}
                for c in keys:
                    rv = row.get(c, 0)
                    wv = v if c == j else w.get(c, 0)
                    nr = x * rv + y * wv
                    nw = -bb * rv + aa * wv
                    if nr:
                        newrow[c] = nr
                    if nw and c != j:
                        neww[c] = nw
                        if c not in inheap:
                            heapq.heappush(heap, c)
                            inheap.add(c)
                for c in list(w):
                    if c not in neww:
                        del w[c]
                w.update(neww)
                self.rows[j] = newrow

    def back_reduce(self):
        """Reduce every entry above each pivot into [0, pivot); one
        ascending sweep suffices because updates only touch later columns."""
        for j in sorted(self.rows):
            pivot_row = self.rows[j]
            a = pivot_row[j]
            for k, row in self.rows.items():
                if k == j or j not in row:
                    continue
                q = row[j] // a
                if not q:
                    continue
                for c, u in pivot_row.items():
                    nv = row.get(c, 0) - q * u
                    if nv:
                        row[c] = nv
                    elif c in row:
                        del row[c]

    def basis_rows(self) -> list[dict[int, int]]:
        return [dict(self.rows[j]) for j in sorted(self.rows)]

    def to_matrix(self) -> SparseIntMatrix:
        return SparseIntMatrix.from_row_dicts(self.basis_rows(), self.ambient)

    def invariant_factors(self, seed: int | None = None) -> tuple[int, ...]:
        return smith_normal_form(self.to_matrix(), seed=seed).invariant_factors


def image_lattice(matrix: SparseIntMatrix) -> HermiteBasis:
    """Hermite-form basis of the integer column span, columns streamed in order."""
    basis = HermiteBasis(matrix.rows)
    for col in matrix.iter_columns():
        basis.add_column(col)
    basis.back_reduce()
    return basis


# -- bar resolution boundaries ---------------------------------------------------


def _nonidentity_positions(G: FiniteGroup) -> tuple[np.ndarray, np.ndarray]:
    n = G.order
    nz = np.array([i for i in range(n) if i != G.identity], dtype=np.int64)
    pos = np.full(n, -1, dtype=np.int64)
    pos[nz] = np.arange(n - 1)
    return nz, pos


def d2_columns(G: FiniteGroup) -> list[Column]:
    """All (n-1)^2 columns of d2, ordered lexicographically in (g1, g2)."""
    n = G.order
    e = G.identity
    nz = [i for i in range(n) if i != e]
    pos = {g: k for k, g in enumerate(nz)}
    cols: list[Column] = []
    for a in nz:
        row_a = G.table[a]
        for b in nz:
            acc: dict[int, int] = {}
            for g, s in ((a, 1), (b, 1)):
                acc[pos[g]] = acc.get(pos[g], 0) + s
            ab = row_a[b]
            if ab != e:
                acc[pos[ab]] = acc.get(pos[ab], 0) - 1
            cols.append(tuple(sorted((i, v) for i, v in acc.items() if v)))
    return cols


def d3_index_chunks(G: FiniteGroup) -> Iterator[np.ndarray]:
    """Per-g1 chunks of d3 column entry indices, shape ((n-1)^2, 4), -1 = absent.

    Entry slots carry fixed signs (+1, -1, +1, -1) for the terms
    [g2|g3], [g1*g2|g3], [g1|g2*g3], [g1|g2].
    """
    n = G.order
    if n <= 1:
        return
    e = G.identity
    T = np.asarray(G.table, dtype=np.int64)
    nz, pos = _nonidentity_positions(G)
    m1 = n - 1
    bb, cc = np.meshgrid(nz, nz, indexing="ij")
    pos_b, pos_c = pos[bb], pos[cc]
    pair_bc = pos_b * m1 + pos_c
    bc = T[bb, cc]
    bc_ok = bc != e
    pos_bc = pos[bc]
    for a in nz:
        pa = pos[a]
        ab = T[a][nz]  # products a*g2 indexed by g2 position
        ab_ok = ab != e
        pos_ab = pos[ab]
        colA = pair_bc
        colB = np.where(ab_ok[:, None], pos_ab[:, None] * m1 + pos_c, -1)
        colC = np.where(bc_ok, pa * m1 + pos_bc, -1)
        colD = np.broadcast_to((pa * m1 + pos_b[:, 0])[:, None], (m1, m1))
        chunk = np.stack([colA, colB, colC, colD], axis=-1).reshape(-1, 4)
        yield np.ascontiguousarray(chunk)


def _d3_column_iter(G: FiniteGroup) -> Iterator[Column]:
    signs = (1, -1, 1, -1)
    for chunk in d3_index_chunks(G):
        for row in chunk:
            acc: dict[int, int] = {}
            for t in range(4):
                i = int(row[t])
                if i < 0:
                    continue
                nv = acc.get(i, 0) + signs[t]
                if nv:
                    acc[i] = nv
                elif i in acc:
                    del acc[i]
            yield tuple(sorted(acc.items()))


def bar_boundaries(
    G: FiniteGroup, cap: int = DEFAULT_HOMOLOGY_CAP
) -> tuple[SparseIntMatrix, SparseIntMatrix]:
    """(d2, d3) on the normalized bar bases; d3 generates its columns lazily."""
    n = G.order
    if n > cap:
        raise SizeError(
            f"order {n} exceeds the homology cap {cap}; use the calculus module "
            "or raise the cap"
        )
    m1 = n - 1
    d2 = SparseIntMatrix(m1, m1 * m1, tuple(d2_columns(G)))
    d3 = SparseIntMatrix(m1 * m1, m1 * m1 * m1, column_factory=lambda: _d3_column_iter(G))
    return d2, d3


# -- multiplier results -----------------------------------------------------------


@dataclass(frozen=True)
class MultiplierResult:
    """Invariant factors of M(G) = H2(G; Z) plus how they were obtained."""

    group: str
    invariants: AbelianInvariants
    order_exponent: int | None  # log_p |M(G)| when |G| is a p-power
    method: str  # "bar-resolution" | "calculus"
    mode: str = ""  # "exact" | "mod-p^E" | "" for calculus results

    @property
    def order(self) -> int:
        return self.invariants.order


def _green_exponent_bound(p: int, npow: int) -> int:
    return npow * (npow - 1) // 2


def _exact_rank_d2(G: FiniteGroup) -> int:
    basis = HermiteBasis(G.order - 1)
    for col in d2_columns(G):
        basis.add_column(col)
    return basis.rank


def _second_homology_exact(G: FiniteGroup, seed: int | None) -> tuple[int, ...]:
    n = G.order
    m1 = n - 1
    m = m1 * m1
    if n == 1:
        return ()
    rank_d2 = _exact_rank_d2(G)
    if rank_d2 != m1:
        raise ConsistencyError(
            f"rank d2 = {rank_d2} != {m1}; H1 of a finite group must be finite"
        )
    basis = HermiteBasis(m)
    for col in _d3_column_iter(G):
        basis.add_column(col)
    basis.back_reduce()
    rank_d3 = basis.rank
    free_rank = (m - m1) - rank_d3
    if free_rank != 0:
        raise ConsistencyError(
            f"free rank {free_rank} != 0; H2 of a finite group must be finite"
        )
    snf = smith_normal_form(basis.to_matrix(), seed=seed)
    return snf.nontrivial


def second_homology(
    G: FiniteGroup,
    cap: int = DEFAULT_HOMOLOGY_CAP,
    mode: str = "auto",
    seed: int | None = None,
) -> MultiplierResult:
    """The Schur multiplier of G as H2(G; Z), exact invariant factors.

    mode "auto" picks exact arithmetic for small or non-prime-power
    orders and the mod-p^E back end above EXACT_AUTO_LIMIT; "exact" and
    "modp" force a back end.
    """
    n = G.order
    if n > cap:
        raise SizeError(
            f"order {n} exceeds the homology cap {cap}; use the calculus module "
            "or raise the cap"
        )
    pp = prime_power(n)
    if mode == "auto":
        mode = "modp" if (pp is not None and n > EXACT_AUTO_LIMIT) else "exact"
    if mode == "modp" and pp is None:
        raise ValidationError("mod-p^E homology requires a p-group")
    if mode not in ("exact", "modp"):
        raise ValidationError(f"unknown homology mode {mode!r}")

    if mode == "exact":
        factors = _second_homology_exact(G, seed)
        used = "exact"
    else:
        from . import modp

        factors = modp.second_homology_modp(G, pp[0], pp[1], seed=seed)
        used = "mod-p^E"

    inv = AbelianInvariants.from_cyclic_orders(factors)
    exponent = None
    if pp is not None:
        p, npow = pp
        mexp = 0
        order = inv.order
        while order % p == 0:
            order //= p
            mexp += 1
        if order != 1:
            raise ConsistencyError(
                f"multiplier of a p-group has non-p torsion: {inv.factors}"
            )
        if mexp > _green_exponent_bound(p, npow):
            raise ConsistencyError(
                f"Green bound violated: log_p|M| = {mexp} for order {p}^{npow}"
            )
        exponent = mexp
    elif inv.order == 1:
        exponent = 0
    return MultiplierResult(
        group=G.name or f"order-{n}",
        invariants=inv,
        order_exponent=exponent,
        method="bar-resolution",
        mode=used,
    )
