"""Finite simplicial complexes, integer chains and derived subdivisions."""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Iterator, Mapping, Sequence

from .linalg import IntMatrix

Simplex = tuple[int, ...]

__all__ = [
    "Simplex",
    "SimplicialComplex",
    "Chain",
    "Subdivision",
    "boundary_matrix",
    "derived_subdivision",
    "stellar_subdivision",
    "chords",
    "barycentric_subdivide",
    "star_neighborhood",
    "complement_closure",
    "permutation_sign",
    "oriented",
]


def permutation_sign(seq: Sequence[int]) -> int:
    """Sign of the permutation sorting ``seq`` (entries distinct)."""
    seq = list(seq)
    sign = 1
    seen = [False] * len(seq)
    order = sorted(range(len(seq)), key=seq.__getitem__)
    for i in range(len(seq)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = order[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def oriented(vertices: Sequence[int]) -> tuple[Simplex, int]:
    """Canonical simplex for an ordered vertex tuple, with orientation sign."""
    return tuple(sorted(vertices)), permutation_sign(vertices)


class SimplicialComplex:
    """An abstract simplicial complex, closed under faces.

    Simplices are strictly increasing vertex tuples; ``simplices(k)`` lists
    them in lexicographic order, which is the canonical basis order for
    chains and boundary matrices.
    """

    __slots__ = ("_by_dim", "_index", "_facets", "_cache")

    def __init__(self, simplices: Iterable[Sequence[int]]):
        found: dict[int, set[Simplex]] = {}
        for s in simplices:
            t = tuple(sorted(s))
            if len(set(t)) != len(t):
                raise ValueError(f"simplex {tuple(s)} repeats a vertex")
            if not t:
                continue
            for k in range(len(t), 0, -1):
                bucket = found.setdefault(k - 1, set())
                if k == len(t):
                    bucket.add(t)
                else:
                    bucket.update(combinations(t, k))
        top = max(found) if found else -1
        self._by_dim: list[tuple[Simplex, ...]] = [tuple(sorted(found.get(k, ()))) for k in range(top + 1)]
        self._index: list[dict[Simplex, int]] = [{s: i for i, s in enumerate(lst)} for lst in self._by_dim]
        self._facets: tuple[Simplex, ...] | None = None
        self._cache: dict = {}

    # -- basic queries ---------------------------------------------------
    @property
    def dim(self) -> int:
        return len(self._by_dim) - 1

    def simplices(self, k: int) -> tuple[Simplex, ...]:
        if 0 <= k < len(self._by_dim):
            return self._by_dim[k]
        return ()

    def count(self, k: int) -> int:
        return len(self.simplices(k))

    def index(self, k: int) -> Mapping[Simplex, int]:
        if 0 <= k < len(self._index):
            return self._index[k]
        return {}

    @property
    def vertices(self) -> list[int]:
        return [s[0] for s in self.simplices(0)]

    @property
    def vertex_count(self) -> int:
        return self.count(0)

    def __contains__(self, simplex: Sequence[int]) -> bool:
        t = tuple(sorted(simplex))
        return t in self.index(len(t) - 1)

    def all_simplices(self) -> Iterator[Simplex]:
        for lst in self._by_dim:
            yield from lst

    def facets(self) -> tuple[Simplex, ...]:
        """Simplices that are not a proper face of another simplex."""
        if self._facets is None:
            covered: set[Simplex] = set()
            for k in range(self.dim, 0, -1):
                for s in self._by_dim[k]:
                    covered.update(combinations(s, k))
            self._facets = tuple(s for s in self.all_simplices() if s not in covered)
        return self._facets

    def euler_characteristic(self) -> int:
        return sum((-1) ** k * len(lst) for k, lst in enumerate(self._by_dim))

    def is_subcomplex_of(self, other: "SimplicialComplex") -> bool:
        return all(s in other.index(k) for k, lst in enumerate(self._by_dim) for s in lst)

    def cofaces(self, k: int) -> dict[Simplex, list[Simplex]]:
        """Map each (k-1)-simplex to the k-simplices having it as a face."""
        key = ("cofaces", k)
        if key not in self._cache:
            out: dict[Simplex, list[Simplex]] = {s: [] for s in self.simplices(k - 1)}
            for s in self.simplices(k):
                for f in combinations(s, k):
                    out[f].append(s)
            self._cache[key] = out
        return self._cache[key]

    def vertex_stars(self) -> dict[int, list[Simplex]]:
        """Map each vertex to the facets containing it."""
        if "vstar" not in self._cache:
            out: dict[int, list[Simplex]] = {v: [] for v in self.vertices}
            for f in self.facets():
                for v in f:
                    out[v].append(f)
            self._cache["vstar"] = out
        return self._cache["vstar"]

    def link(self, simplex: Sequence[int]) -> "SimplicialComplex":
        s = set(simplex)
        parts = []
        for f in self.vertex_stars().get(min(s), ()):
            if s.issubset(f):
                rest = tuple(v for v in f if v not in s)
                if rest:
                    parts.append(rest)
        return SimplicialComplex(parts)

    def subcomplex(self, simplices: Iterable[Sequence[int]]) -> "SimplicialComplex":
        sub = SimplicialComplex(simplices)
        if not sub.is_subcomplex_of(self):
            raise ValueError("simplices do not span a subcomplex of this complex")
        return sub

    def connected_components(self) -> list[list[int]]:
        parent = {v: v for v in self.vertices}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for a, b in self.simplices(1):
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)
        groups: dict[int, list[int]] = {}
        for v in self.vertices:
            groups.setdefault(find(v), []).append(v)
        return sorted(groups.values())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SimplicialComplex):
            return NotImplemented
        return self._by_dim == other._by_dim

    def __hash__(self) -> int:
        h = self._cache.get("hash")
        if h is None:
            h = self._cache["hash"] = hash(tuple(self._by_dim))
        return h

    def __repr__(self) -> str:
        counts = ", ".join(str(len(lst)) for lst in self._by_dim)
        return f"SimplicialComplex(f=({counts}))"


@dataclass(frozen=True)
class Chain:
    """Sparse simplicial chain. ``modulus`` is 0 for integer coefficients, 2 for GF(2)."""

    degree: int
    coeffs: Mapping[Simplex, int] = field(default_factory=dict)
    modulus: int = 0

    def __post_init__(self):
        clean = {}
        for s, c in self.coeffs.items():
            t = tuple(s)
            if len(t) != self.degree + 1:
                raise ValueError(f"{t} is not a {self.degree}-simplex")
            if self.modulus:
                c %= self.modulus
            if c:
                clean[t] = c
        object.__setattr__(self, "coeffs", clean)

    @classmethod
    def from_oriented(cls, terms: Iterable[tuple[Sequence[int], int]], modulus: int = 0) -> "Chain":
        """Build from (ordered vertex tuple, coefficient) pairs, fixing signs."""
        acc: dict[Simplex, int] = {}
        degree = None
        for verts, c in terms:
            s, sg = oriented(verts)
            degree = len(s) - 1 if degree is None else degree
            acc[s] = acc.get(s, 0) + sg * c
        if degree is None:
            raise ValueError("cannot infer the degree of an empty chain")
        return cls(degree, acc, modulus)

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def support(self) -> list[Simplex]:
        return sorted(self.coeffs)

    def boundary(self) -> "Chain":
        if self.degree == 0:
            return Chain(-1, {}, self.modulus)
        acc: dict[Simplex, int] = {}
        for s, c in self.coeffs.items():
            for i in range(len(s)):
                f = s[:i] + s[i + 1:]
                acc[f] = acc.get(f, 0) + (-1) ** i * c
        return Chain(self.degree - 1, acc, self.modulus)

    def _combine(self, other: "Chain", sign: int) -> "Chain":
        if other.degree != self.degree or other.modulus != self.modulus:
            raise ValueError("chains differ in degree or coefficient ring")
        acc = dict(self.coeffs)
        for s, c in other.coeffs.items():
            acc[s] = acc.get(s, 0) + sign * c
        return Chain(self.degree, acc, self.modulus)

    def __add__(self, other: "Chain") -> "Chain":
        return self._combine(other, 1)

    def __sub__(self, other: "Chain") -> "Chain":
        return self._combine(other, -1)

    def __neg__(self) -> "Chain":
        return Chain(self.degree, {s: -c for s, c in self.coeffs.items()}, self.modulus)

    def __mul__(self, k: int) -> "Chain":
        return Chain(self.degree, {s: k * c for s, c in self.coeffs.items()}, self.modulus)

    __rmul__ = __mul__

    def mod2(self) -> "Chain":
        return Chain(self.degree, dict(self.coeffs), 2)

    def restricted(self, keep) -> "Chain":
        return Chain(self.degree, {s: c for s, c in self.coeffs.items() if keep(s)}, self.modulus)

    def lives_in(self, X: SimplicialComplex) -> bool:
        idx = X.index(self.degree)
        return all(s in idx for s in self.coeffs)

    def to_vector(self, X: SimplicialComplex) -> list[int]:
        vec = [0] * X.count(self.degree)
        idx = X.index(self.degree)
        for s, c in self.coeffs.items():
            vec[idx[s]] = c
        return vec

    def to_json(self) -> list:
        return [[list(s), c] for s, c in sorted(self.coeffs.items())]

    @classmethod
    def from_json(cls, degree: int, data: Sequence, modulus: int = 0) -> "Chain":
        return cls(degree, {tuple(s): c for s, c in data}, modulus)


def boundary_matrix(X: SimplicialComplex, k: int) -> IntMatrix:
    """Matrix of the boundary map from k-chains to (k-1)-chains."""
    if not 1 <= k <= 3:
        raise ValueError(f"boundary degree must be in 1..3, got {k}")
    rows = X.index(k - 1)
    ent = {}
    for j, s in enumerate(X.simplices(k)):
        for i in range(k + 1):
            ent[(rows[s[:i] + s[i + 1:]], j)] = (-1) ** i
    return IntMatrix(X.count(k - 1), X.count(k), ent)


class Subdivision:
    """A stellar (or derived) subdivision together with its carrier data.

    ``starred`` maps each original simplex that received a new vertex to
    that vertex; the new vertex sits at the barycentre of that simplex.
    ``subdivide_chain`` sends a simplex to the sum of the pieces it
    carries, oriented like it; this is a chain map, so cycles go to
    homologous cycles.
    """

    def __init__(self, original: SimplicialComplex, complex: SimplicialComplex,
                 starred: dict[Simplex, int]):
        self.original = original
        self.complex = complex
        self.starred = starred
        self._vertex_carrier: dict[int, Simplex] = {v: (v,) for v in original.vertices}
        for s, b in starred.items():
            self._vertex_carrier[b] = s
        self._sd_cache: dict[int, dict[Simplex, list[tuple[Simplex, int]]]] = {}

    def carrier(self, simplex: Sequence[int]) -> Simplex:
        """Smallest simplex of the original complex containing ``simplex``."""
        out: set[int] = set()
        for v in simplex:
            out.update(self._vertex_carrier[v])
        return tuple(sorted(out))

    def _relative_sign(self, piece: Simplex, carrier: Simplex) -> int:
        """Orientation of a top piece inside its carrier, from barycentric coordinates."""
        k = len(carrier) - 1
        if k == 0:
            return 1
        pos = {v: i for i, v in enumerate(carrier)}
        pts = []
        for v in piece:
            c = self._vertex_carrier[v]
            w = 12 // len(c)  # 12 = lcm(1..4) keeps barycentres integral
            p = [0] * k
            for x in c:
                i = pos[x]
                if i:
                    p[i - 1] += w
            pts.append(p)
        rows = [[a - b for a, b in zip(p, pts[0])] for p in pts[1:]]
        d = _small_det(rows)
        if d == 0:
            raise ValueError(f"degenerate piece {piece} in {carrier}")
        return 1 if d > 0 else -1

    def _pieces(self, k: int) -> dict[Simplex, list[tuple[Simplex, int]]]:
        hit = self._sd_cache.get(k)
        if hit is None:
            hit = {}
            for sigma in self.complex.simplices(k):
                c = self.carrier(sigma)
                if len(c) == k + 1:
                    hit.setdefault(c, []).append((sigma, self._relative_sign(sigma, c)))
            self._sd_cache[k] = hit
        return hit

    def subdivide_chain(self, z: Chain) -> Chain:
        """Subdivision chain map: each simplex becomes the sum of its oriented pieces."""
        pieces = self._pieces(z.degree)
        acc: dict[Simplex, int] = {}
        for s, c in z.coeffs.items():
            for t, d in pieces[s]:
                acc[t] = acc.get(t, 0) + c * d
        return Chain(z.degree, acc, z.modulus)

    def subdivide_loop(self, vertices: Sequence[int]) -> list[int]:
        """Vertex sequence of a closed edge path after subdivision."""
        out: list[int] = []
        n = len(vertices)
        for i, v in enumerate(vertices):
            out.append(v)
            e = tuple(sorted((v, vertices[(i + 1) % n])))
            b = self.starred.get(e)
            if b is not None:
                out.append(b)
        return out


def _small_det(m: list[list[int]]) -> int:
    n = len(m)
    if n == 1:
        return m[0][0]
    if n == 2:
        return m[0][0] * m[1][1] - m[0][1] * m[1][0]
    return sum((-1) ** j * m[0][j] * _small_det([row[:j] + row[j + 1:] for row in m[1:]])
               for j in range(n))


def derived_subdivision(X: SimplicialComplex, near: Iterable[int] | None = None,
                        within: SimplicialComplex | None = None) -> Subdivision:
    """Derived subdivision of ``X``, optionally only near a vertex set.

    Every simplex of dimension >= 1 that meets ``near`` (all simplices when
    ``near`` is None) and lies in ``within`` (when given) is starred at a
    new vertex, highest dimension first. With ``near=None`` this is the
    first barycentric subdivision.
    """
    near_set = None if near is None else set(near)
    targets: list[Simplex] = []
    for k in range(X.dim, 0, -1):
        for s in X.simplices(k):
            if near_set is not None and near_set.isdisjoint(s):
                continue
            if within is not None and s not in within:
                continue
            targets.append(s)
    return stellar_subdivision(X, targets)


def stellar_subdivision(X: SimplicialComplex, targets: Sequence[Simplex]) -> Subdivision:
    """Star each target simplex in turn at a new vertex.

    Targets are processed in the given order; each must still be a simplex
    when its turn comes, which holds when they are sorted by decreasing
    dimension.
    """
    next_label = (max(X.vertices) + 1) if X.vertex_count else 0
    facets: set[Simplex] = set(X.facets())
    by_vertex: dict[int, set[Simplex]] = {}
    for f in facets:
        for v in f:
            by_vertex.setdefault(v, set()).add(f)

    starred: dict[Simplex, int] = {}
    for s in targets:
        b = next_label
        next_label += 1
        starred[s] = b
        containing = set.intersection(*(by_vertex.get(v, set()) for v in s))
        if not containing:
            raise ValueError(f"{s} is no longer a simplex when it is starred")
        for f in containing:
            facets.discard(f)
            for v in f:
                by_vertex[v].discard(f)
        for f in sorted(containing):
            for w in s:
                nf = tuple(sorted((b,) + tuple(v for v in f if v != w)))
                facets.add(nf)
                for v in nf:
                    by_vertex.setdefault(v, set()).add(nf)
    return Subdivision(X, SimplicialComplex(facets), starred)


def barycentric_subdivide(X: SimplicialComplex) -> Subdivision:
    return derived_subdivision(X)


def star_neighborhood(X: SimplicialComplex, S: SimplicialComplex) -> SimplicialComplex:
    """Closed star of ``S`` in ``X``: every facet meeting ``S`` plus its faces."""
    if not S.is_subcomplex_of(X):
        raise ValueError("S is not a subcomplex of X")
    verts = set(S.vertices)
    stars = X.vertex_stars()
    chosen: set[Simplex] = set()
    for v in verts:
        chosen.update(stars[v])
    return SimplicialComplex(chosen)


def chords(X: SimplicialComplex, L: SimplicialComplex) -> list[Simplex]:
    """Simplices of X spanned by vertices of L but not in L, highest dimension first.

    L is a full subcomplex exactly when this list is empty.
    """
    lv = set(L.vertices)
    out = []
    for k in range(X.dim, 0, -1):
        out.extend(s for s in X.simplices(k) if lv.issuperset(s) and s not in L)
    return out


def complement_closure(X: SimplicialComplex, N: SimplicialComplex) -> SimplicialComplex:
    """Subcomplex generated by the facets of ``X`` that are not in ``N``."""
    return SimplicialComplex(f for f in X.facets() if f not in N)
