"""Compact triangulated 3-manifolds with boundary, modelling tame open manifolds.

The open manifold M is the interior of the compact model. Locally finite
homology of M is computed as homology of the model relative to its
boundary, which is the correct identification for tame ends only.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable

from .homology import GroupPresentation, Ring, homology_group
from .simplicial import Chain, Simplex, SimplicialComplex

__all__ = [
    "ValidationReport",
    "CompactModel3",
    "InvalidModelError",
    "NonOrientableError",
    "validate",
    "orient",
    "locally_finite_h1",
    "face_sign",
]


class InvalidModelError(ValueError):
    def __init__(self, report: "ValidationReport"):
        self.report = report
        super().__init__(report.summary())


class NonOrientableError(ValueError):
    def __init__(self, faces: list[Simplex]):
        self.faces = faces
        super().__init__(f"non-orientable: orientation reverses around the face cycle {faces}")


@dataclass
class ValidationReport:
    is_pseudomanifold: bool
    is_orientable: bool
    vertex_links_ok: bool
    bad_simplices: list[Simplex] = field(default_factory=list)
    vertex_link_failures: list[tuple[int, str]] = field(default_factory=list)
    orientation_obstruction: list[Simplex] = field(default_factory=list)
    components: int = 0
    boundary_triangles: int = 0

    @property
    def is_valid(self) -> bool:
        return self.is_pseudomanifold and self.is_orientable and self.vertex_links_ok

    def summary(self) -> str:
        if self.is_valid:
            return (f"valid oriented 3-manifold model: {self.components} component(s), "
                    f"{self.boundary_triangles} boundary triangles")
        parts = []
        if not self.is_pseudomanifold:
            parts.append(f"not a 3-pseudomanifold (bad simplices: {self.bad_simplices[:5]})")
        if not self.vertex_links_ok:
            parts.append(f"bad vertex links: {self.vertex_link_failures[:5]}")
        if not self.is_orientable:
            parts.append(f"non-orientable (face cycle {self.orientation_obstruction})")
        return "; ".join(parts)


def face_sign(tet: Simplex, face: Simplex) -> int:
    """Sign of ``face`` in the boundary of the increasingly ordered ``tet``."""
    (missing,) = set(tet) - set(face)
    return -1 if tet.index(missing) % 2 else 1


def _check_link(L: SimplicialComplex) -> str | None:
    """Return None when L is a triangulated disk or 2-sphere, else a reason."""
    tris = L.simplices(2)
    if not tris or len(L.facets()) != len(tris):
        return "link is not a pure surface"
    cof = L.cofaces(2)
    boundary_edges = []
    for e, ts in cof.items():
        if len(ts) > 2:
            return f"link edge {e} in {len(ts)} triangles"
        if len(ts) == 1:
            boundary_edges.append(e)
    # every link vertex must see one fan of triangles
    for (w,) in L.simplices(0):
        around = [t for t in tris if w in t]
        parent = {t: t for t in around}

        def find(x):
            while parent[x] != x:
                x = parent[x]
            return x

        for e in L.simplices(1):
            if w in e:
                ts = [t for t in cof[e]]
                for a, b in zip(ts, ts[1:]):
                    parent[find(a)] = find(b)
        if len({find(t) for t in around}) != 1:
            return f"link is pinched at {w}"
    if len(L.connected_components()) != 1:
        return "link is disconnected"
    chi = L.euler_characteristic()
    if boundary_edges:
        return None if chi == 1 else f"link has boundary but chi={chi} (not a disk)"
    return None if chi == 2 else f"closed link with chi={chi} (not a sphere)"


def _orient(X: SimplicialComplex, first_sign: int = 1) -> tuple[dict[Simplex, int], list[Simplex]]:
    tets = X.simplices(3)
    cof = X.cofaces(3)
    sign: dict[Simplex, int] = {}
    parent: dict[Simplex, tuple[Simplex, Simplex] | None] = {}
    for root in tets:
        if root in sign:
            continue
        sign[root] = first_sign
        parent[root] = None
        queue = deque([root])
        while queue:
            t = queue.popleft()
            for face in combinations(t, 3):
                for u in cof[face]:
                    if u == t:
                        continue
                    want = -sign[t] * face_sign(t, face) * face_sign(u, face)
                    if u not in sign:
                        sign[u] = want
                        parent[u] = (t, face)
                        queue.append(u)
                    elif sign[u] != want:
                        return sign, _face_cycle(parent, t, u, face)
    return sign, []


def _face_cycle(parent, t, u, face) -> list[Simplex]:
    def chain_to_root(x):
        out = []
        while parent[x] is not None:
            p, f = parent[x]
            out.append((x, f))
            x = p
        out.append((x, None))
        return out

    pt, pu = chain_to_root(t), chain_to_root(u)
    tets_t = [x for x, _ in pt]
    tets_u = [x for x, _ in pu]
    common = next(x for x in tets_t if x in set(tets_u))
    faces = [f for x, f in pt[: tets_t.index(common)]]
    faces += [f for x, f in pu[: tets_u.index(common)]][::-1]
    return faces + [face]


def validate(X: SimplicialComplex, link_vertices: Iterable[int] | None = None) -> ValidationReport:
    """Check X is an orientable 3-manifold with boundary.

    ``link_vertices`` limits the vertex-link test to those vertices, for
    callers that know the other links are unchanged from a valid model.
    """
    bad: list[Simplex] = []
    pseudo = X.dim == 3
    if X.dim != 3:
        bad.extend(X.facets())
    else:
        bad.extend(f for f in X.facets() if len(f) != 4)
        for face, ts in X.cofaces(3).items():
            if len(ts) > 2:
                bad.append(face)
        pseudo = not bad
    link_fail: list[tuple[int, str]] = []
    if pseudo:
        for v in (X.vertices if link_vertices is None else sorted(link_vertices)):
            reason = _check_link(X.link((v,)))
            if reason:
                link_fail.append((v, reason))
    orientable, obstruction = False, []
    if pseudo:
        _, obstruction = _orient(X)
        orientable = not obstruction
    n_bd = sum(1 for ts in X.cofaces(3).values() if len(ts) == 1) if X.dim == 3 else 0
    return ValidationReport(
        is_pseudomanifold=pseudo,
        is_orientable=orientable,
        vertex_links_ok=pseudo and not link_fail,
        bad_simplices=bad,
        vertex_link_failures=link_fail,
        orientation_obstruction=obstruction,
        components=len(X.connected_components()),
        boundary_triangles=n_bd,
    )


def orient(X: SimplicialComplex, first_sign: int = 1) -> dict[Simplex, int]:
    """Coherent orientation signs per tetrahedron (relative to increasing vertex order).

    The lowest tetrahedron of each component gets ``first_sign``.
    """
    if X.dim != 3 or any(len(ts) > 2 for ts in X.cofaces(3).values()):
        raise ValueError("orientation needs a 3-pseudomanifold")
    sign, obstruction = _orient(X, first_sign)
    if obstruction:
        raise NonOrientableError(obstruction)
    return sign


def is_coherent(X: SimplicialComplex, orientation: dict[Simplex, int]) -> bool:
    for face, ts in X.cofaces(3).items():
        if len(ts) == 2:
            a, b = ts
            if orientation[a] * face_sign(a, face) != -orientation[b] * face_sign(b, face):
                return False
    return True


class CompactModel3:
    """A validated, oriented compact 3-manifold model; M is its interior."""

    def __init__(self, complex: SimplicialComplex, orientation: dict[Simplex, int] | None = None,
                 *, report: ValidationReport | None = None):
        report = report or validate(complex)
        if not report.is_valid:
            raise InvalidModelError(report)
        if orientation is None:
            orientation = orient(complex)
        else:
            orientation = {tuple(sorted(t)): int(s) for t, s in orientation.items()}
            if set(orientation) != set(complex.simplices(3)) or not is_coherent(complex, orientation):
                raise ValueError("supplied orientation is not a coherent sign per tetrahedron")
        self.complex = complex
        self.orientation = orientation
        self.report = report
        self._boundary: SimplicialComplex | None = None

    @classmethod
    def subdivided(cls, complex: SimplicialComplex, orientation: dict[Simplex, int]) -> "CompactModel3":
        """Wrap a subdivision of a valid model, skipping the (unchanged) validity checks."""
        self = cls.__new__(cls)
        self.complex = complex
        self.orientation = orientation
        self.report = ValidationReport(True, True, True, components=len(complex.connected_components()),
                                       boundary_triangles=sum(1 for ts in complex.cofaces(3).values()
                                                              if len(ts) == 1))
        self._boundary = None
        return self

    @property
    def boundary(self) -> SimplicialComplex:
        if self._boundary is None:
            self._boundary = SimplicialComplex(
                f for f, ts in self.complex.cofaces(3).items() if len(ts) == 1)
        return self._boundary

    @property
    def boundary_vertices(self) -> set[int]:
        return set(self.boundary.vertices)

    @property
    def interior_vertices(self) -> list[int]:
        bd = self.boundary_vertices
        return [v for v in self.complex.vertices if v not in bd]

    def fundamental_chain(self) -> Chain:
        return Chain(3, dict(self.orientation))

    def tet_orientation(self, ordered: tuple[int, int, int, int]) -> int:
        """+1 when the ordered vertex tuple agrees with the model orientation."""
        from .simplicial import oriented
        s, sg = oriented(ordered)
        return sg * self.orientation[s]

    def homology(self, k: int, ring: Ring | str = Ring.Z, rel_boundary: bool = False) -> GroupPresentation:
        return homology_group(self.complex, self.boundary if rel_boundary else None, k, ring)

    def __repr__(self) -> str:
        return f"CompactModel3({self.complex.count(3)} tets, {self.complex.vertex_count} vertices)"


def locally_finite_h1(M: CompactModel3, ring: Ring | str = Ring.Z) -> GroupPresentation:
    """H_1 of the open interior with locally finite chains: H_1(model, boundary)."""
    return homology_group(M.complex, M.boundary, 1, ring)
