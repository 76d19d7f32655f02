"""Simplicial homology over Z and Z/2 with explicit representative cycles.

Groups are computed by first shrinking the (relative) chain complex with
unit-pivot eliminations -- free-face collapses first, then general +-1
pivots -- and running Smith normal form only on what is left, which for
manifold triangulations is a handful of cells. Each elimination is logged
so that cycles can be pushed into the small complex (to read off
coordinates) and residual generators pulled back (to get honest cycles
in the original complex).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Sequence

from .linalg import IntMatrix, snf
from .simplicial import Chain, Simplex, SimplicialComplex

__all__ = [
    "Ring",
    "GroupPresentation",
    "HomologyClass",
    "HomologyError",
    "homology_group",
    "class_of",
    "mod2_reduce",
    "induced_map",
    "is_cycle",
]


class Ring(Enum):
    Z = 0
    Z2 = 2

    @property
    def modulus(self) -> int:
        return self.value

    @classmethod
    def parse(cls, value: "Ring | str | int") -> "Ring":
        if isinstance(value, Ring):
            return value
        if value in ("Z", "z", 0):
            return cls.Z
        if value in ("Z2", "z2", 2):
            return cls.Z2
        raise ValueError(f"unknown coefficient ring {value!r}")

    def __str__(self) -> str:
        return self.name


class HomologyError(ValueError):
    """A chain or map does not satisfy the preconditions of a homology operation."""


def _norm(v: int, m: int) -> int:
    return v % m if m else v


class _Reduction:
    """Chain complex of (X, A) shrunk by unit-pivot eliminations."""

    def __init__(self, X: SimplicialComplex, A: SimplicialComplex | None, modulus: int):
        self.modulus = modulus
        top = X.dim
        in_a = (lambda s: s in A) if A is not None else (lambda s: False)
        cells: list[set[Simplex]] = [set(s for s in X.simplices(k) if not in_a(s)) for k in range(top + 1)]
        # cols[d][cell] = {face: coef}; rows[d][face] = set of d-cells with that face
        cols: list[dict[Simplex, dict[Simplex, int]]] = [dict() for _ in range(top + 2)]
        rows: list[dict[Simplex, set[Simplex]]] = [dict() for _ in range(top + 2)]
        for d in range(1, top + 1):
            lower = cells[d - 1]
            rd = rows[d]
            for f in lower:
                rd[f] = set()
            cd = cols[d]
            for s in cells[d]:
                col = {}
                for i in range(len(s)):
                    f = s[:i] + s[i + 1:]
                    if f in lower:
                        col[f] = _norm((-1) ** i, modulus)
                cd[s] = col
                for f in col:
                    rd[f].add(s)
        for s in cells[0]:
            cols[0][s] = {}
        self.top = top
        self.cells = cells
        self.cols = cols
        self.rows = rows
        # log[d]: eliminations pairing a d-cell with a (d-1)-cell
        self.log: list[list[tuple]] = [[] for _ in range(top + 2)]
        for d in range(top, 0, -1):
            self._reduce_degree(d)
        self.residual: list[list[Simplex]] = [sorted(c) for c in cells]
        self._groups: dict[int, "GroupPresentation"] = {}

    def _is_unit(self, v: int) -> bool:
        return v % 2 == 1 if self.modulus == 2 else abs(v) == 1

    def _eliminate(self, d: int, a: Simplex, b: Simplex, stack: list[Simplex]) -> None:
        m = self.modulus
        col, row = self.cols[d], self.rows[d]
        col_a = col.pop(a)
        u = col_a[b]
        rowcoef: dict[Simplex, int] = {}
        for x in list(row[b]):
            if x == a:
                continue
            cx = col[x]
            c = cx[b]
            rowcoef[x] = c
            f = -c * u
            for g, v in col_a.items():
                nv = _norm(cx.get(g, 0) + f * v, m)
                if nv:
                    if g not in cx:
                        row[g].add(x)
                    cx[g] = nv
                elif g in cx:
                    del cx[g]
                    row[g].discard(x)
                    if len(row[g]) == 1:
                        stack.append(g)
        for g in col_a:
            rg = row[g]
            rg.discard(a)
            if len(rg) == 1:
                stack.append(g)
        del row[b]
        if d + 1 <= self.top:
            upper = self.cols[d + 1]
            for y in self.rows[d + 1].pop(a, ()):
                upper[y].pop(a, None)
        for h in self.cols[d - 1].pop(b, {}):
            self.rows[d - 1][h].discard(b)
        self.cells[d].discard(a)
        self.cells[d - 1].discard(b)
        self.log[d].append((a, b, u, col_a, rowcoef))

    def _drain(self, d: int, stack: list[Simplex]) -> int:
        row, col = self.rows[d], self.cols[d]
        done = 0
        while stack:
            b = stack.pop()
            rb = row.get(b)
            if rb is None or len(rb) != 1:
                continue
            (a,) = rb
            if self._is_unit(col[a][b]):
                self._eliminate(d, a, b, stack)
                done += 1
        return done

    def _reduce_degree(self, d: int) -> None:
        row, col = self.rows[d], self.cols[d]
        stack = sorted((b for b, rb in row.items() if len(rb) == 1), reverse=True)
        self._drain(d, stack)
        progress = True
        while progress:
            progress = False
            for a in sorted(col):
                ca = col.get(a)
                if not ca:
                    continue
                best = None
                for b, v in ca.items():
                    if self._is_unit(v):
                        key = (len(row[b]), b)
                        if best is None or key < best:
                            best = key
                if best is None:
                    continue
                self._eliminate(d, a, best[1], stack)
                self._drain(d, stack)
                progress = True

    # -- chain transport ---------------------------------------------------
    def project(self, z: dict[Simplex, int], k: int) -> dict[Simplex, int]:
        """Image of a k-chain in the reduced complex (a homologous chain there)."""
        m = self.modulus
        z = dict(z)
        if k + 1 <= self.top:
            for a, b, u, col_a, _ in self.log[k + 1]:
                c = z.get(b)
                if not c:
                    continue
                f = -u * c
                for g, v in col_a.items():
                    nv = _norm(z.get(g, 0) + f * v, m)
                    if nv:
                        z[g] = nv
                    else:
                        z.pop(g, None)
        if k >= 1:
            for a, *_ in self.log[k]:
                z.pop(a, None)
        return z

    def lift(self, z: dict[Simplex, int], k: int) -> dict[Simplex, int]:
        """Pull a chain of the reduced complex back to the original complex."""
        m = self.modulus
        z = dict(z)
        if k >= 1:
            for a, b, u, _, rowcoef in reversed(self.log[k]):
                s = 0
                for x, c in rowcoef.items():
                    zx = z.get(x)
                    if zx:
                        s += c * zx
                s = _norm(-u * s, m)
                if s:
                    z[a] = s
        return z

    def residual_matrix(self, d: int) -> IntMatrix:
        """Boundary of the reduced complex from degree d to d-1."""
        if d < 1 or d > self.top:
            return IntMatrix(len(self.residual[d - 1]) if 0 <= d - 1 <= self.top else 0,
                             len(self.residual[d]) if 0 <= d <= self.top else 0)
        ridx = {s: i for i, s in enumerate(self.residual[d - 1])}
        ent = {}
        for j, s in enumerate(self.residual[d]):
            for f, v in self.cols[d][s].items():
                ent[(ridx[f], j)] = v
        return IntMatrix(len(self.residual[d - 1]), len(self.residual[d]), ent)


@dataclass(frozen=True, eq=False)
class GroupPresentation:
    """H_k(X, A; ring) as Z^betti + sum Z/d_i, with representative cycles.

    ``basis`` lists the free generators first, then the torsion ones in
    the order of ``torsion``.
    """

    degree: int
    ring: Ring
    betti: int
    torsion: tuple[int, ...]
    basis: tuple[Chain, ...]
    complex: SimplicialComplex = field(repr=False)
    relative_to: SimplicialComplex | None = field(repr=False, default=None)
    _solver: object = field(repr=False, default=None)

    @property
    def rank(self) -> int:
        return self.betti + len(self.torsion)

    @property
    def moduli(self) -> tuple[int, ...]:
        """Per-coordinate modulus: 0 for free coordinates."""
        return (0,) * self.betti + self.torsion

    def is_trivial(self) -> bool:
        return self.rank == 0

    def zero(self) -> "HomologyClass":
        return HomologyClass(self, (0,) * self.rank)

    def describe(self) -> str:
        if self.ring is Ring.Z2:
            return f"dim {self.betti}"
        return f"torsion {list(self.torsion)} free {self.betti}"

    def same_carrier(self, other: "GroupPresentation") -> bool:
        return (self.complex is other.complex or self.complex == other.complex) and \
            self.degree == other.degree and _same_rel(self.relative_to, other.relative_to)


def _same_rel(a, b) -> bool:
    if a is None or b is None:
        return a is None and b is None
    return a is b or a == b


@dataclass(frozen=True)
class HomologyClass:
    group: GroupPresentation = field(repr=False)
    coords: tuple[int, ...]

    def __post_init__(self):
        g = self.group
        if len(self.coords) != g.rank:
            raise HomologyError("coordinate vector does not match group rank")
        fixed = []
        for c, m in zip(self.coords, g.moduli):
            if g.ring is Ring.Z2:
                c %= 2
            elif m:
                c %= m
            fixed.append(int(c))
        object.__setattr__(self, "coords", tuple(fixed))

    @property
    def ring(self) -> Ring:
        return self.group.ring

    def is_zero(self) -> bool:
        return not any(self.coords)

    def __add__(self, other: "HomologyClass") -> "HomologyClass":
        if other.group is not self.group:
            raise HomologyError("classes live in different groups")
        return HomologyClass(self.group, tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> "HomologyClass":
        return HomologyClass(self.group, tuple(-a for a in self.coords))

    def __sub__(self, other: "HomologyClass") -> "HomologyClass":
        return self + (-other)

    def __mul__(self, k: int) -> "HomologyClass":
        return HomologyClass(self.group, tuple(k * a for a in self.coords))

    __rmul__ = __mul__

    def representative(self) -> Chain:
        g = self.group
        acc: dict[Simplex, int] = {}
        for c, z in zip(self.coords, g.basis):
            if c:
                for s, v in z.coeffs.items():
                    acc[s] = acc.get(s, 0) + c * v
        return Chain(g.degree, acc, g.ring.modulus)


class _IntSolver:
    """Coordinates in H_k over Z from the residual complex via two SNFs."""

    def __init__(self, red: _Reduction, k: int):
        self.red = red
        self.k = k
        n_k = len(red.residual[k])
        D_k = red.residual_matrix(k) if k >= 1 else IntMatrix(0, n_k)
        D_up = red.residual_matrix(k + 1) if k + 1 <= red.top else IntMatrix(n_k, 0)
        s1 = snf(D_k)
        r1 = s1.rank
        z = n_k - r1
        self.r1 = r1
        self.V1_inv = s1.V_inv
        # boundaries in the coordinates of the kernel basis V1[:, r1:]
        W = s1.V_inv @ D_up
        B = IntMatrix(z, D_up.cols, {(i - r1, j): v for (i, j), v in W.items() if i >= r1})
        s2 = snf(B)
        inv = s2.invariants
        self.U2 = s2.U
        self.diag = inv + [0] * (z - len(inv))
        free = [i for i in range(z) if i >= len(inv)]
        tors = [i for i in range(len(inv)) if inv[i] > 1]
        self.keep = free + tors
        self.torsion = tuple(inv[i] for i in tors)
        self.betti = len(free)
        # generators: V1[:, r1:] @ U2_inv[:, i]
        V1 = s1.V
        gens = []
        for i in self.keep:
            col_u = {r: v for (r, c), v in s2.U_inv.items() if c == i}
            vec: dict[int, int] = {}
            for r, v in col_u.items():
                for (row, c), w in V1.items():
                    if c == r + r1:
                        vec[row] = vec.get(row, 0) + v * w
            gens.append({red.residual[k][row]: v for row, v in vec.items() if v})
        self.generators = gens

    def coordinates(self, zr: dict[Simplex, int]) -> tuple[int, ...]:
        idx = {s: i for i, s in enumerate(self.red.residual[self.k])}
        vec = [0] * len(idx)
        for s, c in zr.items():
            vec[idx[s]] = c
        y = self.V1_inv.apply(vec)
        if any(y[: self.r1]):
            raise HomologyError("chain is not a cycle")
        w = y[self.r1:]
        coords = self.U2.apply(w) if w else []
        return tuple(coords[i] for i in self.keep)


class _Gf2Solver:
    def __init__(self, red: _Reduction, k: int):
        self.red = red
        self.k = k
        cells = red.residual[k]
        self.idx = {s: i for i, s in enumerate(cells)}
        self.betti = len(cells)
        self.torsion = ()
        self.generators = [{s: 1} for s in cells]

    def coordinates(self, zr: dict[Simplex, int]) -> tuple[int, ...]:
        vec = [0] * len(self.idx)
        for s, c in zr.items():
            vec[self.idx[s]] = c % 2
        return tuple(vec)


def _reduction(X: SimplicialComplex, A: SimplicialComplex | None, ring: Ring) -> _Reduction:
    key = ("reduction", ring.modulus, A)
    cache = X._cache
    red = cache.get(key)
    if red is None:
        red = _Reduction(X, A, ring.modulus)
        cache[key] = red
    return red


def homology_group(X: SimplicialComplex, A: SimplicialComplex | None = None, k: int = 1,
                   ring: Ring | str = Ring.Z) -> GroupPresentation:
    """H_k(X; ring), or H_k(X, A; ring) when a subcomplex ``A`` is given."""
    ring = Ring.parse(ring)
    if A is not None and not A.is_subcomplex_of(X):
        raise HomologyError("relative homology needs A to be a subcomplex of X")
    if k < 0:
        raise HomologyError("negative degree")
    if k > X.dim:
        return GroupPresentation(k, ring, 0, (), (), X, A, None)
    red = _reduction(X, A, ring)
    hit = red._groups.get(k)
    if hit is not None:
        return hit
    solver = _Gf2Solver(red, k) if ring is Ring.Z2 else _IntSolver(red, k)
    basis = tuple(Chain(k, red.lift(g, k), ring.modulus) for g in solver.generators)
    G = GroupPresentation(k, ring, solver.betti, tuple(solver.torsion), basis, X, A, solver)
    red._groups[k] = G
    return G


def _relative_boundary(z: Chain, X: SimplicialComplex, A: SimplicialComplex | None) -> Chain:
    bd = z.boundary()
    if A is None:
        return bd
    return bd.restricted(lambda s: s not in A)


def is_cycle(z: Chain, X: SimplicialComplex, A: SimplicialComplex | None = None) -> bool:
    return _relative_boundary(z, X, A).is_zero()


def class_of(z: Chain, G: GroupPresentation) -> HomologyClass:
    """Coordinates of the class of the cycle ``z`` in ``G``'s basis."""
    if z.degree != G.degree:
        raise HomologyError(f"chain has degree {z.degree}, group has degree {G.degree}")
    X, A = G.complex, G.relative_to
    if not z.lives_in(X):
        raise HomologyError("chain is not supported in the group's complex")
    if G.ring is Ring.Z2 and z.modulus != 2:
        z = z.mod2()
    elif G.ring is Ring.Z and z.modulus != 0:
        raise HomologyError("cannot lift a mod-2 chain to integer homology")
    if A is not None:
        z = z.restricted(lambda s: s not in A)
    if G.degree > 0 and not _relative_boundary(z, X, A).is_zero():
        raise HomologyError("chain is not a cycle")
    if G.rank == 0 or G._solver is None:
        return G.zero()
    red: _Reduction = G._solver.red
    zr = red.project(dict(z.coeffs), G.degree)
    return HomologyClass(G, G._solver.coordinates(zr))


def mod2_reduce(c: HomologyClass, G2: GroupPresentation) -> HomologyClass:
    """Image of an integral class under H_k(-; Z) -> H_k(-; Z/2)."""
    G = c.group
    if c.ring is not Ring.Z or G2.ring is not Ring.Z2:
        raise HomologyError("mod2_reduce maps an integral class into a Z/2 group")
    if not G.same_carrier(G2):
        raise HomologyError("groups are computed from different complexes")
    return class_of(c.representative().mod2(), G2)


def induced_map(source: GroupPresentation, target: GroupPresentation) -> IntMatrix:
    """Matrix of the inclusion-induced map, columns = images of source generators."""
    if source.degree != target.degree or source.ring is not target.ring:
        raise HomologyError("induced map needs equal degree and ring")
    if not source.complex.is_subcomplex_of(target.complex):
        raise HomologyError("source complex is not a subcomplex of the target")
    if source.relative_to is not None:
        if target.relative_to is None or not source.relative_to.is_subcomplex_of(target.relative_to):
            raise HomologyError("relative subcomplexes are not nested")
    ent = {}
    for j, z in enumerate(source.basis):
        for i, v in enumerate(class_of(z, target).coords):
            if v:
                ent[(i, j)] = v
    return IntMatrix(target.rank, source.rank, ent)


def torsion_summary(groups: Sequence[GroupPresentation]) -> list[str]:
    return [f"H{g.degree}({g.ring}): {g.describe()}" for g in groups]
