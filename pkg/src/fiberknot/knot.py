"""Knots as edge loops: classes, exteriors, meridians and preferred framings."""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from math import gcd
from typing import Iterable, Sequence

from .homology import GroupPresentation, HomologyClass, Ring, class_of, homology_group, induced_map
from .linalg import ext_gcd
from .manifold import CompactModel3, locally_finite_h1, validate
from .simplicial import (
    Chain,
    Simplex,
    SimplicialComplex,
    Subdivision,
    chords,
    complement_closure,
    derived_subdivision,
    star_neighborhood,
    stellar_subdivision,
)

__all__ = [
    "EdgeLoop",
    "KnotError",
    "ExteriorError",
    "ExteriorData",
    "OffsetKind",
    "OffsetSolutionSet",
    "knot_class",
    "is_null_locally_finite",
    "build_exterior",
    "preferred_offsets",
    "offsets_from_exterior",
    "locally_finite_class",
    "solve_offsets",
]


class KnotError(ValueError):
    """The edge loop is not a simple closed interior path of the model."""


class ExteriorError(RuntimeError):
    """The neighbourhood of the knot failed the solid-torus checks."""


@dataclass(frozen=True)
class EdgeLoop:
    """Closed edge path given by its cyclic vertex sequence, traversed in order."""

    vertices: tuple[int, ...]

    def __init__(self, vertices: Iterable[int]):
        object.__setattr__(self, "vertices", tuple(int(v) for v in vertices))

    def __len__(self) -> int:
        return len(self.vertices)

    @property
    def edges(self) -> list[tuple[int, int]]:
        vs = self.vertices
        return [(vs[i], vs[(i + 1) % len(vs)]) for i in range(len(vs))]

    def chain(self, modulus: int = 0) -> Chain:
        acc: dict[Simplex, int] = {}
        for a, b in self.edges:
            s = (a, b) if a < b else (b, a)
            acc[s] = acc.get(s, 0) + (1 if a < b else -1)
        return Chain(1, acc, modulus)

    def reversed(self) -> "EdgeLoop":
        return EdgeLoop(self.vertices[::-1])

    def as_complex(self) -> SimplicialComplex:
        return SimplicialComplex(tuple(sorted(e)) for e in self.edges)

    def problems(self, M: CompactModel3) -> list[str]:
        out = []
        vs = self.vertices
        if len(vs) < 3:
            out.append("a loop needs at least 3 vertices")
        if len(set(vs)) != len(vs):
            out.append("loop is not simple (repeated vertex)")
        X = M.complex
        for a, b in self.edges:
            if (min(a, b), max(a, b)) not in X.index(1):
                out.append(f"({a}, {b}) is not an edge of the model")
        bd = M.boundary_vertices
        touching = sorted(v for v in vs if v in bd)
        if touching:
            out.append(f"loop touches the boundary at vertices {touching[:6]}")
        return out

    def check(self, M: CompactModel3) -> None:
        probs = self.problems(M)
        if probs:
            raise KnotError("; ".join(probs))


def knot_class(M: CompactModel3, K: EdgeLoop, ring: Ring | str = Ring.Z) -> HomologyClass:
    """Class of K in H_1 of the compact model."""
    ring = Ring.parse(ring)
    K.check(M)
    G = homology_group(M.complex, None, 1, ring)
    return class_of(K.chain(ring.modulus), G)


def locally_finite_class(M: CompactModel3, K: EdgeLoop) -> HomologyClass:
    K.check(M)
    return class_of(K.chain(), locally_finite_h1(M, Ring.Z))


def is_null_locally_finite(M: CompactModel3, K: EdgeLoop) -> bool:
    return locally_finite_class(M, K).is_zero()


# ---------------------------------------------------------------------------
# exterior


@dataclass
class ExteriorData:
    model: CompactModel3                # the model after the derived subdivisions
    loop: list[int]                      # the knot in the subdivided model
    neighborhood: SimplicialComplex      # N(K)
    exterior: CompactModel3              # closure of the complement of N(K)
    torus: SimplicialComplex             # N(K) intersected with the exterior
    outer_boundary: SimplicialComplex    # boundary of the original model, inside the exterior
    meridian: Chain
    longitude0: Chain
    subdivisions: list[Subdivision] = field(repr=False, default_factory=list)

    def longitude(self, k: int) -> Chain:
        """The torus curve lambda0 + k * mu, as a cycle."""
        return self.longitude0 + self.meridian * k

    def knot_chain(self) -> Chain:
        return EdgeLoop(self.loop).chain()

    def torus_h1(self) -> GroupPresentation:
        return homology_group(self.torus, None, 1, Ring.Z)

    def intersection_number(self) -> int:
        """Determinant of (meridian, longitude0) in a basis of H_1(torus); +-1 when they form a basis."""
        H = self.torus_h1()
        m = class_of(self.meridian, H).coords
        l = class_of(self.longitude0, H).coords
        return m[0] * l[1] - m[1] * l[0]


def _edge_link_cycle(X: SimplicialComplex, v: int, w: int) -> list[int]:
    star = [t for t in X.vertex_stars()[v] if w in t]
    adj: dict[int, list[int]] = {}
    for t in star:
        c, d = (x for x in t if x not in (v, w))
        adj.setdefault(c, []).append(d)
        adj.setdefault(d, []).append(c)
    if any(len(n) != 2 for n in adj.values()):
        raise ExteriorError(f"link of edge ({v}, {w}) is not a circle")
    start = min(adj)
    cycle = [start]
    prev, cur = None, start
    while True:
        a, b = adj[cur]
        nxt = a if a != prev else b
        if nxt == start:
            break
        cycle.append(nxt)
        prev, cur = cur, nxt
    if len(cycle) != len(adj):
        raise ExteriorError(f"link of edge ({v}, {w}) is not connected")
    return cycle


def _closed_surface_problems(T: SimplicialComplex) -> list[str]:
    out = []
    if T.dim != 2:
        return ["frontier is not 2-dimensional"]
    if any(len(ts) != 2 for ts in T.cofaces(2).values()):
        out.append("frontier has edges not in exactly two triangles")
    if len(T.connected_components()) != 1:
        out.append("frontier is disconnected")
    if T.euler_characteristic() != 0:
        out.append(f"frontier has chi={T.euler_characteristic()}")
    return out


def _neighbourhood_problems(X: SimplicialComplex, loop: list[int]):
    N = star_neighborhood(X, EdgeLoop(loop).as_complex())
    E = complement_closure(X, N)
    T = SimplicialComplex(t for t in N.simplices(2) if t in E)
    problems = _closed_surface_problems(T)
    if not problems:
        HN = homology_group(N, None, 1, Ring.Z)
        HT = homology_group(T, None, 1, Ring.Z)
        if HN.betti != 1 or HN.torsion:
            problems.append("neighbourhood does not have H_1 = Z")
        if HT.betti != 2 or HT.torsion:
            problems.append("frontier does not have H_1 = Z^2")
    return N, E, T, problems


def build_exterior(M: CompactModel3, K: EdgeLoop, max_rounds: int = 3) -> ExteriorData:
    """Exterior of K: a regular neighbourhood N(K) is removed from a subdivided model.

    First every chord of K (a simplex spanned by knot vertices but not in
    K) is starred, which makes K a full subcomplex without touching the
    rest of the model. Then K gets a derived subdivision near it, and the
    closed star of K is a regular neighbourhood. The frontier is checked
    to be a torus with H_1 = Z^2 and H_1(N) = Z; on failure a further
    derived subdivision near K is tried, up to ``max_rounds`` in total.
    """
    K.check(M)
    X = M.complex
    loop = list(K.vertices)
    fund = M.fundamental_chain()
    sds: list[Subdivision] = []

    def apply(sd: Subdivision) -> None:
        nonlocal X, loop, fund
        sds.append(sd)
        loop = sd.subdivide_loop(loop)
        fund = sd.subdivide_chain(fund)
        X = sd.complex

    extra = chords(X, K.as_complex())
    if extra:
        apply(stellar_subdivision(X, extra))
    rounds = 0
    while True:
        apply(derived_subdivision(X, near=loop))
        rounds += 1
        N, E, T, problems = _neighbourhood_problems(X, loop)
        if not problems:
            break
        if rounds >= max_rounds:
            raise ExteriorError(f"no solid-torus neighbourhood after {rounds} derived subdivisions: "
                                + "; ".join(problems))

    orientation = dict(fund.coeffs)
    model = CompactModel3.subdivided(X, orientation)
    outer = M.boundary
    if not outer.is_subcomplex_of(E):
        raise ExteriorError("knot neighbourhood reaches the boundary")
    E_orient = {t: orientation[t] for t in E.simplices(3)}
    # only links of vertices on the frontier torus differ from those in the model
    exterior = CompactModel3(E, E_orient, report=validate(E, T.vertices))

    # meridian: link circle of the first knot edge, right-handed about the knot
    v, w = loop[0], loop[1]
    circle = _edge_link_cycle(X, v, w)
    first = model.tet_orientation((v, w, circle[0], circle[1]))
    if first < 0:
        circle = circle[::-1]
    meridian = EdgeLoop(circle).chain()
    if not meridian.lives_in(T):
        raise ExteriorError("edge-link meridian does not lie on the frontier torus")

    HT = homology_group(T, None, 1, Ring.Z)
    HN = homology_group(N, None, 1, Ring.Z)
    m = class_of(meridian, HT).coords
    if gcd(*m) != 1:
        raise ExteriorError(f"meridian class {m} is not primitive on the torus")
    if not class_of(meridian, HN).is_zero():
        raise ExteriorError("meridian does not bound in the neighbourhood")
    phi = induced_map(HT, HN)
    k_n = class_of(EdgeLoop(loop).chain(), HN).coords[0]
    _, s, t = ext_gcd(m[0], m[1])
    x, y = -t, s  # m0*y - m1*x = 1
    img = phi[0, 0] * x + phi[0, 1] * y
    if img == -k_n:
        x, y = -x, -y
    elif img != k_n:
        raise ExteriorError("could not find a longitude parallel to the knot")
    t1, t2 = HT.basis
    longitude0 = t1 * x + t2 * y
    return ExteriorData(model, loop, N, exterior, T, outer, meridian, longitude0, sds)


# ---------------------------------------------------------------------------
# preferred framings


class OffsetKind(Enum):
    EMPTY = "Empty"
    ALL = "All"
    AFFINE = "Affine"


@dataclass(frozen=True)
class OffsetSolutionSet:
    """A subset of Z of the form {}, Z, {base} (period 0) or base + period*Z."""

    kind: OffsetKind
    base: int = 0
    period: int = 0

    @classmethod
    def empty(cls) -> "OffsetSolutionSet":
        return cls(OffsetKind.EMPTY)

    @classmethod
    def everything(cls) -> "OffsetSolutionSet":
        return cls(OffsetKind.ALL, 0, 1)

    @classmethod
    def affine(cls, base: int, period: int) -> "OffsetSolutionSet":
        if period < 0:
            raise ValueError("period must be nonnegative")
        if period == 1:
            return cls.everything()
        if period:
            base %= period
        return cls(OffsetKind.AFFINE, base, period)

    @property
    def is_empty(self) -> bool:
        return self.kind is OffsetKind.EMPTY

    @property
    def is_unique(self) -> bool:
        return self.kind is OffsetKind.AFFINE and self.period == 0

    def __contains__(self, k: int) -> bool:
        if self.kind is OffsetKind.EMPTY:
            return False
        if self.kind is OffsetKind.ALL:
            return True
        if self.period == 0:
            return k == self.base
        return (k - self.base) % self.period == 0

    def intersect_congruence(self, residue: int, modulus: int) -> "OffsetSolutionSet":
        """Intersect with {k : k = residue (mod modulus)}; modulus 0 means equality."""
        if self.kind is OffsetKind.EMPTY:
            return self
        if modulus == 0:
            return OffsetSolutionSet.affine(residue, 0) if residue in self else OffsetSolutionSet.empty()
        if self.kind is OffsetKind.ALL:
            return OffsetSolutionSet.affine(residue, modulus)
        if self.period == 0:
            return self if (self.base - residue) % modulus == 0 else OffsetSolutionSet.empty()
        # generalized CRT
        p, q = self.period, modulus
        g, s, _ = ext_gcd(p, q)
        diff = residue - self.base
        if diff % g:
            return OffsetSolutionSet.empty()
        lcm = p // g * q
        k = self.base + p * ((diff // g * s) % (q // g))
        return OffsetSolutionSet.affine(k, lcm)

    def representatives(self) -> list[int]:
        """Offsets covering every residue class mod 2 that the set meets."""
        if self.kind is OffsetKind.EMPTY:
            return []
        if self.kind is OffsetKind.ALL:
            return [0, 1]
        if self.period == 0:
            return [self.base]
        return [self.base, self.base + self.period]

    def describe(self) -> str:
        if self.kind is OffsetKind.EMPTY:
            return "Empty"
        if self.kind is OffsetKind.ALL:
            return "All"
        if self.period == 0:
            return f"Unique {{{self.base}}}"
        return f"Affine {self.base} + {self.period}Z"

    def to_json(self) -> dict:
        return {"kind": self.kind.value, "base": self.base, "period": self.period}


def solve_offsets(lon: Sequence[int], mer: Sequence[int], moduli: Sequence[int]) -> OffsetSolutionSet:
    """All k with lon + k*mer = 0 in Z^b + sum Z/d_i (modulus 0 = free coordinate)."""
    out = OffsetSolutionSet.everything()
    for l, m, d in zip(lon, mer, moduli):
        if d == 0:
            if m == 0:
                if l != 0:
                    return OffsetSolutionSet.empty()
                continue
            if (-l) % m:
                return OffsetSolutionSet.empty()
            out = out.intersect_congruence(-l // m, 0)
        else:
            g = gcd(m, d)
            r = -l
            if r % g:
                return OffsetSolutionSet.empty()
            dd = d // g
            if dd == 1:
                continue
            inv = pow((m // g) % dd, -1, dd)
            out = out.intersect_congruence((r // g) * inv % dd, dd)
        if out.is_empty:
            return out
    return out


def relative_exterior_h1(ext: ExteriorData) -> GroupPresentation:
    """H_1 of the open exterior with locally finite chains."""
    return homology_group(ext.exterior.complex, ext.outer_boundary, 1, Ring.Z)


def offsets_from_exterior(ext: ExteriorData) -> OffsetSolutionSet:
    """Offsets k for which lambda0 + k*mu is null in locally finite H_1 of the exterior."""
    G = relative_exterior_h1(ext)
    lon = class_of(ext.longitude0, G).coords
    mer = class_of(ext.meridian, G).coords
    return solve_offsets(lon, mer, G.moduli)


def preferred_offsets(M: CompactModel3, K: EdgeLoop) -> OffsetSolutionSet:
    """Preferred framings of K, as offsets from the exterior's reference longitude."""
    return offsets_from_exterior(build_exterior(M, K))
