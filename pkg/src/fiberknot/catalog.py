"""Generators for the test manifolds and their standard knots.

All models are built from small cubical grids cut into six tetrahedra per
cube along the main diagonal (the Freudenthal/Kuhn triangulation), which
is simplicial and coherent across neighbouring cubes and under periodic
identification of an axis with period at least 3.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import permutations
from math import gcd
from typing import Iterable, Sequence

from .knot import EdgeLoop
from .manifold import CompactModel3
from .simplicial import SimplicialComplex, derived_subdivision

__all__ = [
    "CatalogSpec",
    "CatalogModel",
    "FAMILIES",
    "generate",
    "generate_family",
    "parse_knot_selector",
    "expected_homology",
    "expected_verdict",
]

Point = tuple[int, int, int]


@dataclass
class CatalogModel:
    """A generated model with its named knots and expected invariants."""

    family: str
    params: dict
    model: CompactModel3
    knots: dict[str, EdgeLoop]
    expected_h: dict[tuple[int, str], tuple[int, tuple[int, ...]]] = field(default_factory=dict)
    expected_verdicts: dict[str, str] = field(default_factory=dict)


@dataclass(frozen=True)
class CatalogSpec:
    """One catalog entry: a family with parameters plus a knot selector."""

    family: str
    knot: str = "core"
    genus: int = 1
    p: int = 1
    q: int = 1

    def params(self) -> dict:
        if self.family == "handlebody":
            return {"genus": self.genus}
        if self.family == "lens_punctured":
            return {"p": self.p, "q": self.q}
        return {}


# ---------------------------------------------------------------------------
# grid machinery


class _Grid:
    """Freudenthal triangulation of a union of unit cubes, some axes periodic."""

    def __init__(self, cubes: Iterable[Point], periods: tuple[int | None, int | None, int | None]):
        self.periods = periods
        paths = []
        for c in sorted(set(cubes)):
            for perm in permutations(range(3)):
                cur = list(c)
                path = [self._wrap(cur)]
                for ax in perm:
                    cur[ax] += 1
                    path.append(self._wrap(cur))
                paths.append(path)
        points = sorted({p for path in paths for p in path})
        self.label = {p: i for i, p in enumerate(points)}
        self.tets = [tuple(sorted(self.label[p] for p in path)) for path in paths]

    def _wrap(self, p: Sequence[int]) -> Point:
        return tuple(c % n if n else c for c, n in zip(p, self.periods))  # type: ignore[return-value]

    def v(self, p: Sequence[int]) -> int:
        return self.label[self._wrap(p)]

    def loop(self, points: Sequence[Sequence[int]]) -> EdgeLoop:
        return EdgeLoop(self.v(p) for p in points)

    def complex(self) -> SimplicialComplex:
        return SimplicialComplex(self.tets)


def _box(nx: int, ny: int, nz: int) -> list[Point]:
    return [(x, y, z) for x in range(nx) for y in range(ny) for z in range(nz)]


def _model(X: SimplicialComplex) -> CompactModel3:
    return CompactModel3(X)


# ---------------------------------------------------------------------------
# families


def ball() -> CatalogModel:
    g = _Grid(_box(3, 3, 3), (None, None, None))
    knots = {"contractible": g.loop([(1, 1, 1), (2, 1, 1), (2, 2, 1)])}
    return CatalogModel("ball", {}, _model(g.complex()), knots)


SOLID_TORUS_LENGTH = 4


def _core_power_path(n: int, length: int) -> list[Point]:
    """Edge loop winding n > 0 times around the z-circle of a grid solid torus."""
    if n == 1:
        return [(1, 1, z) for z in range(length)]
    pts: list[Point] = []
    for j in range(1, n + 1):
        top = length - 1 if j < n else length - 2
        pts.extend((j, 1, z) for z in range(top + 1))
    # (n,1,L-2) -> (n,2,L-1), then back along y=2 at z=L-1, closing through z=0
    pts.extend((x, 2, length - 1) for x in range(n, 0, -1))
    pts.append((1, 2, 0))
    return pts


def solid_torus(max_power: int = 3) -> CatalogModel:
    w = max(3, max_power + 1)
    L = SOLID_TORUS_LENGTH
    g = _Grid(_box(w, w, L), (None, None, L))
    knots = {"core": g.loop(_core_power_path(1, L)),
             "contractible": g.loop([(1, 1, 0), (2, 1, 0), (2, 2, 0)])}
    for n in range(-max_power, max_power + 1):
        if n == 0:
            continue
        loop = g.loop(_core_power_path(abs(n), L))
        knots[f"core_power:{n}"] = loop if n > 0 else loop.reversed()
    return CatalogModel("solid_torus", {"max_power": max_power}, _model(g.complex()), knots)


def _seven_vertex_torus() -> list[tuple[int, int, int]]:
    tris = set()
    for i in range(7):
        tris.add(tuple(sorted((i, (i + 1) % 7, (i + 3) % 7))))
        tris.add(tuple(sorted((i, (i + 2) % 7, (i + 3) % 7))))
    return sorted(tris)


def thickened_torus(layers: int = 2) -> CatalogModel:
    """Torus x [0, layers] as a staircase prism over the 7-vertex torus."""
    def lab(v: int, level: int) -> int:
        return 7 * level + v

    tets = []
    for a, b, c in _seven_vertex_torus():
        for l in range(layers):
            m = l + 1
            tets.append((lab(a, l), lab(b, l), lab(c, l), lab(c, m)))
            tets.append((lab(a, l), lab(b, l), lab(b, m), lab(c, m)))
            tets.append((lab(a, l), lab(a, m), lab(b, m), lab(c, m)))
    mid = layers // 2
    knots = {"core": EdgeLoop(lab(v, mid) for v in range(7)),
             "contractible": EdgeLoop([lab(0, mid), lab(1, mid), lab(3, mid)])}
    return CatalogModel("thickened_torus", {"layers": layers},
                        _model(SimplicialComplex(tets)), knots)


def handlebody(genus: int) -> CatalogModel:
    """Slab with ``genus`` square holes punched through."""
    if genus < 1:
        raise ValueError("genus must be at least 1")
    width = 3 * genus + 3
    holes = {(3 * i + 3, 2) for i in range(genus)}
    cubes = [c for c in _box(width, 5, 2) if (c[0], c[1]) not in holes]
    g = _Grid(cubes, (None, None, None))
    knots = {"contractible": g.loop([(1, 1, 1), (2, 1, 1), (2, 2, 1)])}
    for i in range(genus):
        x0, x1 = 3 * i + 2, 3 * i + 5
        pts = [(x, 1, 1) for x in range(x0, x1)]
        pts += [(x1, y, 1) for y in range(1, 4)]
        pts += [(x, 4, 1) for x in range(x1, x0, -1)]
        pts += [(x0, y, 1) for y in range(4, 1, -1)]
        knots[f"handle_core:{i}"] = g.loop(pts)
    return CatalogModel("handlebody", {"genus": genus}, _model(g.complex()), knots)


# ---------------------------------------------------------------------------
# solid torus plus a 2-handle: punctured lens spaces and S^1 x S^2


def _perimeter_point(s: int, w: int) -> tuple[int, int]:
    s %= 4 * w
    if s < w:
        return s, 0
    if s < 2 * w:
        return w, s - w
    if s < 3 * w:
        return 3 * w - s, w
    return 0, 4 * w - s


def _boundary_curve(p: int, q: int, w: int, length: int) -> list[Point] | None:
    """Staircase curve on the boundary torus: p turns along z, q around the square.

    Returns None when the staircase is not simple for this grid size.
    """
    P = 4 * w
    total = q * P + p * length
    pts: list[Point] = []
    s = z = 0
    for k in range(1, total + 1):
        x, y = _perimeter_point(s, w)
        pts.append((x, y, z % length))
        if (k * p * length) // total > ((k - 1) * p * length) // total:
            z += 1
        else:
            s += 1
    if len(set(pts)) != len(pts):
        return None
    return pts


def _annulus_around(X: SimplicialComplex, curve: list[int]) -> tuple[SimplicialComplex, list[int],
                                                                     SimplicialComplex]:
    """Subdivide twice near the curve within the boundary; return (complex, curve, annulus)."""
    loop = curve
    for _ in range(2):
        bd = SimplicialComplex(f for f, ts in X.cofaces(3).items() if len(ts) == 1)
        sd = derived_subdivision(X, near=loop, within=bd)
        loop = sd.subdivide_loop(loop)
        X = sd.complex
    bd = SimplicialComplex(f for f, ts in X.cofaces(3).items() if len(ts) == 1)
    lv = set(loop)
    annulus = SimplicialComplex(t for t in bd.simplices(2) if lv.intersection(t))
    return X, loop, annulus


def _boundary_circles(A: SimplicialComplex) -> list[list[int]]:
    edges = [e for e, ts in A.cofaces(2).items() if len(ts) == 1]
    adj: dict[int, list[int]] = {}
    for a, b in edges:
        adj.setdefault(a, []).append(b)
        adj.setdefault(b, []).append(a)
    seen: set[int] = set()
    circles = []
    for start in sorted(adj):
        if start in seen:
            continue
        cyc = [start]
        seen.add(start)
        prev, cur = None, start
        while True:
            a, b = adj[cur]
            nxt = a if a != prev else b
            if nxt == start:
                break
            cyc.append(nxt)
            seen.add(nxt)
            prev, cur = cur, nxt
        circles.append(cyc)
    return circles


def _attach_two_handle(p: int, q: int) -> tuple[SimplicialComplex, _Grid]:
    w = 3
    length = 4
    curve = None
    while curve is None:
        curve = _boundary_curve(p, q, w, length)
        if curve is None:
            length += 1
    g = _Grid(_box(w, w, length), (None, None, length))
    X = g.complex()
    X, _, A = _annulus_around(X, [g.v(pt) for pt in curve])
    circles = _boundary_circles(A)
    if len(circles) != 2:
        raise RuntimeError("neighbourhood of the attaching curve is not an annulus")
    top = max(X.vertices) + 1
    h, cones = top, (top + 1, top + 2)
    sphere = list(A.simplices(2))
    for apex, cyc in zip(cones, circles):
        for i in range(len(cyc)):
            sphere.append((apex, cyc[i], cyc[(i + 1) % len(cyc)]))
    tets = list(X.simplices(3)) + [(h,) + tuple(t) for t in sphere]
    return SimplicialComplex(tuple(sorted(t)) for t in tets), g


def lens_punctured(p: int, q: int) -> CatalogModel:
    """L(p, q) minus an open ball, for p >= 2 and gcd(p, q) = 1."""
    if p < 2 or gcd(p, q) != 1:
        raise ValueError("need p >= 2 and gcd(p, q) = 1")
    # the attaching curve runs p times along the core and q times around a meridian,
    # so it kills p times the core class and H_1 = Z/p
    X, g = _attach_two_handle(p, q)
    L = g.periods[2]
    core = g.loop([(1, 1, z) for z in range(L)])
    knots = {"torsion_generator": core, "core": core,
             "contractible": g.loop([(1, 1, 0), (2, 1, 0), (2, 2, 0)])}
    return CatalogModel("lens_punctured", {"p": p, "q": q}, _model(X), knots)


def s1xs2_punctured() -> CatalogModel:
    X, g = _attach_two_handle(0, 1)
    L = g.periods[2]
    core = g.loop([(1, 1, z) for z in range(L)])
    knots = {"core": core, "contractible": g.loop([(1, 1, 0), (2, 1, 0), (2, 2, 0)])}
    return CatalogModel("s1xs2_punctured", {}, _model(X), knots)


# ---------------------------------------------------------------------------
# registry, expected invariants, selectors

FAMILIES = ("ball", "solid_torus", "thickened_torus", "handlebody", "lens_punctured",
            "s1xs2_punctured")


def parse_knot_selector(selector: str) -> tuple[str, int | None]:
    """'core_power:2' -> ('core_power', 2); 'core' -> ('core', None)."""
    name, sep, arg = selector.partition(":")
    if not sep:
        return name, None
    try:
        return name, int(arg)
    except ValueError:
        raise ValueError(f"bad knot selector {selector!r}") from None


def expected_homology(family: str, params: dict) -> dict[tuple[int, str], tuple[int, tuple[int, ...]]]:
    """Known (betti, torsion) of H_0..H_2 of the compact model, over Z and Z/2."""
    if family == "ball":
        z = [(1, ()), (0, ()), (0, ())]
        z2 = z
    elif family == "solid_torus":
        z = [(1, ()), (1, ()), (0, ())]
        z2 = z
    elif family == "thickened_torus":
        z = [(1, ()), (2, ()), (1, ())]
        z2 = z
    elif family == "handlebody":
        g = params["genus"]
        z = [(1, ()), (g, ()), (0, ())]
        z2 = z
    elif family == "lens_punctured":
        p = params["p"]
        even = 1 if p % 2 == 0 else 0
        z = [(1, ()), (0, (p,)), (0, ())]
        z2 = [(1, ()), (even, ()), (even, ())]
    elif family == "s1xs2_punctured":
        z = [(1, ()), (1, ()), (1, ())]
        z2 = z
    else:
        raise ValueError(f"unknown family {family!r}")
    out = {}
    for k in range(3):
        out[(k, "Z")] = z[k]
        out[(k, "Z2")] = z2[k]
    return out


def expected_verdict(family: str, selector: str) -> str:
    name, arg = parse_knot_selector(selector)
    if name == "contractible":
        return "NotRealizable"
    if family in ("lens_punctured", "s1xs2_punctured"):
        return "PreconditionFailed"
    if family == "solid_torus":
        n = 1 if name == "core" else arg
        return "Realizable" if n % 2 else "NotRealizable"
    return "Realizable"


MAX_GENUS = 4
MAX_P = 7
MAX_POWER = 4


def generate_family(family: str, *, genus: int = 1, p: int = 2, q: int = 1,
                    max_power: int = 3) -> CatalogModel:
    """Build a family member; parameters are limited to genus <= 4, p <= 7, |n| <= 4."""
    if family == "handlebody" and not 1 <= genus <= MAX_GENUS:
        raise ValueError(f"genus must be in 1..{MAX_GENUS}")
    if family == "lens_punctured" and not 2 <= p <= MAX_P:
        raise ValueError(f"p must be in 2..{MAX_P}")
    if family == "solid_torus" and not 1 <= max_power <= MAX_POWER:
        raise ValueError(f"max_power must be in 1..{MAX_POWER}")
    if family == "ball":
        cm = ball()
    elif family == "solid_torus":
        cm = solid_torus(max_power)
    elif family == "thickened_torus":
        cm = thickened_torus()
    elif family == "handlebody":
        cm = handlebody(genus)
    elif family == "lens_punctured":
        cm = lens_punctured(p, q)
    elif family == "s1xs2_punctured":
        cm = s1xs2_punctured()
    else:
        raise ValueError(f"unknown family {family!r}; choose from {', '.join(FAMILIES)}")
    cm.expected_h = expected_homology(cm.family, cm.params)
    cm.expected_verdicts = {name: expected_verdict(cm.family, name) for name in cm.knots}
    return cm


def generate(spec: CatalogSpec) -> tuple[CompactModel3, EdgeLoop]:
    """Model and knot for one catalog entry."""
    name, arg = parse_knot_selector(spec.knot)
    max_power = max(3, abs(arg)) if (spec.family == "solid_torus" and arg is not None) else 3
    cm = generate_family(spec.family, genus=spec.genus, p=spec.p, q=spec.q, max_power=max_power)
    if spec.knot not in cm.knots:
        raise KeyError(f"{spec.family} has no knot {spec.knot!r}; "
                       f"available: {', '.join(sorted(cm.knots))}")
    return cm.model, cm.knots[spec.knot]
