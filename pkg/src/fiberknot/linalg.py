"""Exact integer and GF(2) linear algebra.

Integer matrices are sparse maps ``(row, col) -> int`` over Python's
arbitrary-precision integers; nothing here ever touches floating point.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

__all__ = [
    "IntMatrix",
    "SnfResult",
    "snf",
    "determinant",
    "ext_gcd",
    "Gf2Matrix",
    "solve_gf2",
    "gf2_rank",
    "DENSE_FILL_THRESHOLD",
]

# fraction of nonzero entries in the active block above which the Smith
# reduction switches from dict rows to dense lists
DENSE_FILL_THRESHOLD = 0.30


class IntMatrix:
    """Immutable sparse integer matrix."""

    __slots__ = ("rows", "cols", "_entries")

    def __init__(self, rows: int, cols: int, entries: Mapping[tuple[int, int], int] | None = None):
        if rows < 0 or cols < 0:
            raise ValueError("matrix dimensions must be nonnegative")
        clean: dict[tuple[int, int], int] = {}
        for (i, j), v in (entries or {}).items():
            if not (0 <= i < rows and 0 <= j < cols):
                raise IndexError(f"entry ({i}, {j}) outside {rows}x{cols}")
            v = int(v)
            if v:
                clean[(i, j)] = v
        self.rows = rows
        self.cols = cols
        self._entries = clean

    @classmethod
    def from_dense(cls, data: Sequence[Sequence[int]], cols: int | None = None) -> "IntMatrix":
        rows = len(data)
        if cols is None:
            cols = len(data[0]) if rows else 0
        ent = {(i, j): v for i, row in enumerate(data) for j, v in enumerate(row) if v}
        return cls(rows, cols, ent)

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls(n, n, {(i, i): 1 for i in range(n)})

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntMatrix":
        return cls(rows, cols)

    @property
    def entries(self) -> Mapping[tuple[int, int], int]:
        return dict(self._entries)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    @property
    def nnz(self) -> int:
        return len(self._entries)

    def __getitem__(self, ij: tuple[int, int]) -> int:
        return self._entries.get(ij, 0)

    def items(self):
        return self._entries.items()

    def to_dense(self) -> list[list[int]]:
        out = [[0] * self.cols for _ in range(self.rows)]
        for (i, j), v in self._entries.items():
            out[i][j] = v
        return out

    def column(self, j: int) -> dict[int, int]:
        return {i: v for (i, jj), v in self._entries.items() if jj == j}

    def transpose(self) -> "IntMatrix":
        return IntMatrix(self.cols, self.rows, {(j, i): v for (i, j), v in self._entries.items()})

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        by_row: dict[int, list[tuple[int, int]]] = {}
        for (k, j), v in other._entries.items():
            by_row.setdefault(k, []).append((j, v))
        acc: dict[tuple[int, int], int] = {}
        for (i, k), a in self._entries.items():
            for j, b in by_row.get(k, ()):
                acc[(i, j)] = acc.get((i, j), 0) + a * b
        return IntMatrix(self.rows, other.cols, acc)

    def apply(self, vec: Sequence[int]) -> list[int]:
        if len(vec) != self.cols:
            raise ValueError("vector length does not match column count")
        out = [0] * self.rows
        for (i, j), v in self._entries.items():
            if vec[j]:
                out[i] += v * vec[j]
        return out

    def is_diagonal(self) -> bool:
        return all(i == j for (i, j) in self._entries)

    def diagonal(self) -> list[int]:
        return [self[i, i] for i in range(min(self.rows, self.cols))]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, IntMatrix):
            return NotImplemented
        return self.shape == other.shape and self._entries == other._entries

    def __hash__(self) -> int:
        return hash((self.rows, self.cols, frozenset(self._entries.items())))

    def __repr__(self) -> str:
        return f"IntMatrix({self.rows}x{self.cols}, nnz={self.nnz})"


def determinant(m: IntMatrix) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    if m.rows != m.cols:
        raise ValueError("determinant of a non-square matrix")
    a = m.to_dense()
    n = m.rows
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((r for r in range(k + 1, n) if a[r][k]), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1] if n else 1


@dataclass(frozen=True)
class SnfResult:
    """``U @ A @ V == D`` with ``U``, ``V`` unimodular.

    The inverses are carried along because homology computations need
    both directions (kernel bases from ``V``, coordinates from ``V_inv``).
    """

    U: IntMatrix
    D: IntMatrix
    V: IntMatrix
    U_inv: IntMatrix = field(repr=False, compare=False)
    V_inv: IntMatrix = field(repr=False, compare=False)

    @property
    def invariants(self) -> list[int]:
        """Nonzero diagonal entries, in divisibility order."""
        return [d for d in self.D.diagonal() if d]

    @property
    def rank(self) -> int:
        return len(self.invariants)


class _Transforms:
    """Accumulates the row/column operations applied during reduction.

    ``U`` and ``V_inv`` change by row operations, ``U_inv`` and ``V`` by
    column operations, so the first pair is stored by rows and the second
    by columns; each elementary operation then touches one stored vector.
    """

    def __init__(self, m: int, n: int):
        self.U = [{i: 1} for i in range(m)]        # rows of U
        self.U_inv = [{i: 1} for i in range(m)]    # columns of U^-1
        self.V = [{j: 1} for j in range(n)]        # columns of V
        self.V_inv = [{j: 1} for j in range(n)]    # rows of V^-1

    @staticmethod
    def _axpy(target: dict[int, int], src: dict[int, int], c: int) -> None:
        for k, v in src.items():
            nv = target.get(k, 0) + c * v
            if nv:
                target[k] = nv
            else:
                target.pop(k, None)

    def row_add(self, dst: int, src: int, c: int) -> None:
        # row_dst += c * row_src
        self._axpy(self.U[dst], self.U[src], c)
        self._axpy(self.U_inv[src], self.U_inv[dst], -c)

    def col_add(self, dst: int, src: int, c: int) -> None:
        # col_dst += c * col_src
        self._axpy(self.V[dst], self.V[src], c)
        self._axpy(self.V_inv[src], self.V_inv[dst], -c)

    def row_swap(self, i: int, j: int) -> None:
        self.U[i], self.U[j] = self.U[j], self.U[i]
        self.U_inv[i], self.U_inv[j] = self.U_inv[j], self.U_inv[i]

    def col_swap(self, i: int, j: int) -> None:
        self.V[i], self.V[j] = self.V[j], self.V[i]
        self.V_inv[i], self.V_inv[j] = self.V_inv[j], self.V_inv[i]

    def row_neg(self, i: int) -> None:
        self.U[i] = {k: -v for k, v in self.U[i].items()}
        self.U_inv[i] = {k: -v for k, v in self.U_inv[i].items()}

    def rows_mix(self, i: int, j: int, a: int, b: int, c: int, d: int) -> None:
        """Replace rows (i, j) by (a*ri + b*rj, c*ri + d*rj); requires ad - bc = 1."""
        ri, rj = self.U[i], self.U[j]
        self.U[i] = _lin(ri, a, rj, b)
        self.U[j] = _lin(ri, c, rj, d)
        ci, cj = self.U_inv[i], self.U_inv[j]
        self.U_inv[i] = _lin(ci, d, cj, -c)
        self.U_inv[j] = _lin(ci, -b, cj, a)

    def cols_mix(self, i: int, j: int, a: int, b: int, c: int, d: int) -> None:
        """Replace cols (i, j) by (a*ci + b*cj, c*ci + d*cj); requires ad - bc = 1."""
        ci, cj = self.V[i], self.V[j]
        self.V[i] = _lin(ci, a, cj, b)
        self.V[j] = _lin(ci, c, cj, d)
        ri, rj = self.V_inv[i], self.V_inv[j]
        self.V_inv[i] = _lin(ri, d, rj, -c)
        self.V_inv[j] = _lin(ri, -b, rj, a)

    def matrices(self, m: int, n: int) -> tuple[IntMatrix, IntMatrix, IntMatrix, IntMatrix]:
        U = IntMatrix(m, m, {(i, k): v for i, row in enumerate(self.U) for k, v in row.items()})
        U_inv = IntMatrix(m, m, {(k, j): v for j, col in enumerate(self.U_inv) for k, v in col.items()})
        V = IntMatrix(n, n, {(k, j): v for j, col in enumerate(self.V) for k, v in col.items()})
        V_inv = IntMatrix(n, n, {(i, k): v for i, row in enumerate(self.V_inv) for k, v in row.items()})
        return U, U_inv, V, V_inv


def _lin(x: dict[int, int], a: int, y: dict[int, int], b: int) -> dict[int, int]:
    out: dict[int, int] = {}
    if a:
        for k, v in x.items():
            out[k] = a * v
    if b:
        for k, v in y.items():
            nv = out.get(k, 0) + b * v
            if nv:
                out[k] = nv
            else:
                out.pop(k, None)
    return out


def ext_gcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, s, t) with s*a + t*b == g == gcd(a, b) >= 0."""
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


class _Work:
    """Sparse working copy of the matrix being reduced (rows + column index)."""

    def __init__(self, A: IntMatrix, tr: _Transforms):
        self.rows: dict[int, dict[int, int]] = {}
        self.cols: dict[int, dict[int, int]] = {}
        for (i, j), v in A.items():
            self.rows.setdefault(i, {})[j] = v
            self.cols.setdefault(j, {})[i] = v
        self.tr = tr

    def _set(self, i: int, j: int, v: int) -> None:
        if v:
            self.rows.setdefault(i, {})[j] = v
            self.cols.setdefault(j, {})[i] = v
        else:
            r = self.rows.get(i)
            if r is not None and j in r:
                del r[j]
                if not r:
                    del self.rows[i]
            c = self.cols.get(j)
            if c is not None and i in c:
                del c[i]
                if not c:
                    del self.cols[j]

    def row_add(self, dst: int, src: int, c: int) -> None:
        for j, v in list(self.rows.get(src, {}).items()):
            self._set(dst, j, self.rows.get(dst, {}).get(j, 0) + c * v)
        self.tr.row_add(dst, src, c)

    def col_add(self, dst: int, src: int, c: int) -> None:
        for i, v in list(self.cols.get(src, {}).items()):
            self._set(i, dst, self.cols.get(dst, {}).get(i, 0) + c * v)
        self.tr.col_add(dst, src, c)

    def pick_pivot(self, active_rows: set[int], active_cols: set[int]) -> tuple[int, int] | None:
        # smallest magnitude, then least fill-in (Markowitz count), then lowest (row, col)
        best = None
        best_key = None
        for i in active_rows:
            row = self.rows.get(i)
            if not row:
                continue
            ri = len(row) - 1
            for j, v in row.items():
                if j not in active_cols:
                    continue
                key = (abs(v), ri * (len(self.cols[j]) - 1), i, j)
                if best_key is None or key < best_key:
                    best_key, best = key, (i, j)
        return best

    def density(self, active_rows: set[int], active_cols: set[int]) -> float:
        area = len(active_rows) * len(active_cols)
        if not area:
            return 0.0
        nnz = sum(len(self.rows.get(i, ())) for i in active_rows)
        return nnz / area


def _clear_cross(w: _Work, i: int, j: int) -> tuple[int, int]:
    """Reduce row i and column j to the single entry at (i, j).

    When a remainder appears the pivot moves to the smaller entry, which
    strictly decreases |pivot| and therefore terminates.
    """
    while True:
        p = w.rows[i][j]
        for k, v in sorted(w.cols[j].items()):
            if k != i and v // p:
                w.row_add(k, i, -(v // p))
        rem = [(abs(v), k) for k, v in w.cols[j].items() if k != i]
        if rem:
            i = min(rem)[1]
            continue
        for k, v in sorted(w.rows[i].items()):
            if k != j and v // p:
                w.col_add(k, j, -(v // p))
        rem = [(abs(v), k) for k, v in w.rows[i].items() if k != j]
        if rem:
            j = min(rem)[1]
            continue
        return i, j


def _dense_phase(w: _Work, active_rows: set[int], active_cols: set[int],
                 pivots: list[tuple[int, int]]) -> None:
    """Finish the reduction on a dense copy of the active block.

    Same pivot rule as the sparse phase; row/column operations are still
    mirrored into the transform recorder.
    """
    ri = sorted(active_rows)
    cj = sorted(active_cols)
    rpos = {r: a for a, r in enumerate(ri)}
    cpos = {c: b for b, c in enumerate(cj)}
    M = [[0] * len(cj) for _ in ri]
    for r in ri:
        for c, v in w.rows.get(r, {}).items():
            if c in cpos:
                M[rpos[r]][cpos[c]] = v
    tr = w.tr
    alive_r = set(range(len(ri)))
    alive_c = set(range(len(cj)))

    def row_add(d, s, c):
        rd, rs = M[d], M[s]
        for b in alive_c:
            if rs[b]:
                rd[b] += c * rs[b]
        tr.row_add(ri[d], ri[s], c)

    def col_add(d, s, c):
        for a in alive_r:
            if M[a][s]:
                M[a][d] += c * M[a][s]
        tr.col_add(cj[d], cj[s], c)

    while True:
        best_key, best = None, None
        rcount = {a: sum(1 for b in alive_c if M[a][b]) for a in alive_r}
        ccount = {b: sum(1 for a in alive_r if M[a][b]) for b in alive_c}
        for a in alive_r:
            for b in alive_c:
                v = M[a][b]
                if v:
                    key = (abs(v), (rcount[a] - 1) * (ccount[b] - 1), ri[a], cj[b])
                    if best_key is None or key < best_key:
                        best_key, best = key, (a, b)
        if best is None:
            break
        a, b = best
        while True:
            p = M[a][b]
            for k in sorted(alive_r):
                if k != a and M[k][b]:
                    q = M[k][b] // p
                    if q:
                        row_add(k, a, -q)
            rem = [(abs(M[k][b]), k) for k in alive_r if k != a and M[k][b]]
            if rem:
                a = min(rem)[1]
                continue
            p = M[a][b]
            for k in sorted(alive_c):
                if k != b and M[a][k]:
                    q = M[a][k] // p
                    if q:
                        col_add(k, b, -q)
            rem = [(abs(M[a][k]), k) for k in alive_c if k != b and M[a][k]]
            if rem:
                b = min(rem)[1]
                continue
            if all(M[k][b] == 0 for k in alive_r if k != a):
                break
        pivots.append((ri[a], cj[b]))
        alive_r.discard(a)
        alive_c.discard(b)
    # write the dense block back so the caller sees a consistent sparse state
    for r in ri:
        w.rows.pop(r, None)
    for c in cj:
        w.cols.pop(c, None)
    for a, r in enumerate(ri):
        for b, c in enumerate(cj):
            if M[a][b]:
                w.rows.setdefault(r, {})[c] = M[a][b]
                w.cols.setdefault(c, {})[r] = M[a][b]


def snf(A: IntMatrix) -> SnfResult:
    """Smith normal form with unimodular transforms.

    Returns ``SnfResult(U, D, V)`` with ``U @ A @ V == D``, the diagonal of
    ``D`` nonnegative with ``d1 | d2 | ...`` and all zeros trailing.
    """
    m, n = A.shape
    tr = _Transforms(m, n)
    w = _Work(A, tr)
    active_rows = set(range(m))
    active_cols = set(range(n))
    pivots: list[tuple[int, int]] = []

    while True:
        if len(active_rows) > 3 and len(active_cols) > 3 and \
                w.density(active_rows, active_cols) > DENSE_FILL_THRESHOLD:
            _dense_phase(w, active_rows, active_cols, pivots)
            break
        p = w.pick_pivot(active_rows, active_cols)
        if p is None:
            break
        i, j = _clear_cross(w, *p)
        pivots.append((i, j))
        active_rows.discard(i)
        active_cols.discard(j)

    # move pivot (i, j) to diagonal position t
    row_at = list(range(m))   # row_at[t] = current physical row index holding slot t
    col_at = list(range(n))
    row_pos = list(range(m))  # inverse permutation
    col_pos = list(range(n))
    for t, (i, j) in enumerate(pivots):
        pi = row_pos[i]
        if pi != t:
            tr.row_swap(t, pi)
            a, b = row_at[t], row_at[pi]
            row_at[t], row_at[pi] = b, a
            row_pos[a], row_pos[b] = pi, t
        pj = col_pos[j]
        if pj != t:
            tr.col_swap(t, pj)
            a, b = col_at[t], col_at[pj]
            col_at[t], col_at[pj] = b, a
            col_pos[a], col_pos[b] = pj, t
    diag = []
    for t, (i, j) in enumerate(pivots):
        d = w.rows[i][j]
        if d < 0:
            tr.row_neg(t)
            d = -d
        diag.append(d)

    # enforce the divisibility chain: (a, b) -> (gcd, lcm) via 2x2 unimodular mixes
    r = len(diag)
    changed = True
    while changed:
        changed = False
        for s in range(r):
            for t in range(s + 1, r):
                a, b = diag[s], diag[t]
                if b % a == 0:
                    continue
                g, x, y = ext_gcd(a, b)
                tr.rows_mix(s, t, x, y, -b // g, a // g)
                tr.cols_mix(s, t, 1, 1, -y * b // g, x * a // g)
                diag[s], diag[t] = g, a // g * b
                changed = True
    D = IntMatrix(m, n, {(t, t): d for t, d in enumerate(diag)})
    U, U_inv, V, V_inv = tr.matrices(m, n)
    return SnfResult(U=U, D=D, V=V, U_inv=U_inv, V_inv=V_inv)


# --------------------------------------------------------------------------
# GF(2)


@dataclass(frozen=True)
class Gf2Matrix:
    """Matrix over GF(2); row ``i`` is an int whose bit ``j`` is entry (i, j)."""

    rows: int
    cols: int
    data: tuple[int, ...]

    def __post_init__(self):
        if len(self.data) != self.rows:
            raise ValueError("row count does not match data")
        mask = (1 << self.cols) - 1
        if any(r & ~mask for r in self.data):
            raise ValueError("row has bits beyond the column count")

    @classmethod
    def from_dense(cls, data: Sequence[Sequence[int]], cols: int | None = None) -> "Gf2Matrix":
        if cols is None:
            cols = len(data[0]) if data else 0
        return cls(len(data), cols, tuple(pack_bits(row) for row in data))

    @classmethod
    def identity(cls, n: int) -> "Gf2Matrix":
        return cls(n, n, tuple(1 << i for i in range(n)))

    def entry(self, i: int, j: int) -> int:
        return (self.data[i] >> j) & 1

    def to_dense(self) -> list[list[int]]:
        return [unpack_bits(r, self.cols) for r in self.data]

    def apply(self, x: Sequence[int]) -> list[int]:
        if len(x) != self.cols:
            raise ValueError("vector length does not match column count")
        xv = pack_bits(x)
        return [bin(r & xv).count("1") & 1 for r in self.data]


def pack_bits(bits: Iterable[int]) -> int:
    out = 0
    for j, b in enumerate(bits):
        if b & 1:
            out |= 1 << j
    return out


def unpack_bits(value: int, n: int) -> list[int]:
    return [(value >> j) & 1 for j in range(n)]


def _gf2_echelon(rows: list[int], ncols: int, rhs: list[int] | None = None):
    rows = list(rows)
    rhs = list(rhs) if rhs is not None else None
    pivots: list[tuple[int, int]] = []  # (row, col)
    r = 0
    for c in range(ncols):
        bit = 1 << c
        sel = next((k for k in range(r, len(rows)) if rows[k] & bit), None)
        if sel is None:
            continue
        rows[r], rows[sel] = rows[sel], rows[r]
        if rhs is not None:
            rhs[r], rhs[sel] = rhs[sel], rhs[r]
        for k in range(len(rows)):
            if k != r and rows[k] & bit:
                rows[k] ^= rows[r]
                if rhs is not None:
                    rhs[k] ^= rhs[r]
        pivots.append((r, c))
        r += 1
        if r == len(rows):
            break
    return rows, rhs, pivots


def gf2_rank(A: Gf2Matrix) -> int:
    return len(_gf2_echelon(list(A.data), A.cols)[2])


def solve_gf2(A: Gf2Matrix, b: Sequence[int]) -> list[int] | None:
    """One solution of ``A x = b`` over GF(2) (free variables 0), or None."""
    if len(b) != A.rows:
        raise ValueError(f"rhs has length {len(b)}, matrix has {A.rows} rows")
    rows, rhs, pivots = _gf2_echelon(list(A.data), A.cols, [int(v) & 1 for v in b])
    npiv = len(pivots)
    if any(rhs[k] for k in range(npiv, len(rows))):
        return None
    x = [0] * A.cols
    for r, c in pivots:
        x[c] = rhs[r]
    return x
