from __future__ import annotations

from math import gcd

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fiberknot.homology import Ring, class_of, homology_group
from fiberknot.knot import (
    EdgeLoop,
    KnotError,
    OffsetKind,
    OffsetSolutionSet,
    is_null_locally_finite,
    knot_class,
    offsets_from_exterior,
    relative_exterior_h1,
    solve_offsets,
)

EXTERIOR_CASES = [
    ("ball", "contractible"),
    ("solid_torus", "core"),
    ("solid_torus", "core_power:2"),
    ("thickened_torus", "core"),
]


def test_loop_problems(cat):
    cm = cat.family("ball")
    M = cm.model
    assert cm.knots["contractible"].problems(M) == []
    bd = sorted(M.boundary_vertices)
    assert any("boundary" in p for p in EdgeLoop([bd[0], bd[1], bd[2]]).problems(M))
    K = cm.knots["contractible"].vertices
    assert any("repeated" in p for p in EdgeLoop(K + K).problems(M))
    assert any("at least 3" in p for p in EdgeLoop(K[:2]).problems(M))
    far = [v for v in M.interior_vertices if (min(v, K[0]), max(v, K[0])) not in M.complex.index(1)]
    assert any("not an edge" in p for p in EdgeLoop([K[0], far[0], K[1]]).problems(M))
    with pytest.raises(KnotError):
        knot_class(M, EdgeLoop([bd[0], bd[1], bd[2]]))


def test_loop_chain_and_reversal():
    K = EdgeLoop([3, 1, 2])
    assert K.chain().coeffs == {(1, 3): -1, (1, 2): 1, (2, 3): 1}
    assert K.reversed().chain() == -K.chain()
    assert K.chain().boundary().is_zero()


def test_knot_classes_in_solid_torus(cat):
    cm = cat.family("solid_torus")
    M = cm.model
    core = knot_class(M, cm.knots["core"])
    assert abs(core.coords[0]) == 1
    assert not knot_class(M, cm.knots["core"], Ring.Z2).is_zero()
    double = knot_class(M, cm.knots["core_power:2"])
    assert double.coords == (2 * core.coords[0],)
    assert knot_class(M, cm.knots["core_power:2"], Ring.Z2).is_zero()
    assert knot_class(M, cm.knots["contractible"]).is_zero()


def test_locally_finite_nullity(cat):
    assert is_null_locally_finite(cat.family("solid_torus").model, cat.family("solid_torus").knots["core"])
    ball = cat.family("ball")
    assert is_null_locally_finite(ball.model, ball.knots["contractible"])
    lens = cat.family("lens_punctured", p=3, q=1)
    assert not is_null_locally_finite(lens.model, lens.knots["torsion_generator"])


@pytest.mark.parametrize("family,knot", EXTERIOR_CASES)
def test_exterior_postconditions(cat, family, knot):
    ext = cat.exterior(family, knot)
    T = ext.torus
    assert T.euler_characteristic() == 0
    assert all(len(ts) == 2 for ts in T.cofaces(2).values())
    HT = homology_group(T, None, 1, Ring.Z)
    assert (HT.betti, HT.torsion) == (2, ())
    HN = homology_group(ext.neighborhood, None, 1, Ring.Z)
    assert (HN.betti, HN.torsion) == (1, ())
    m = class_of(ext.meridian, HT).coords
    l = class_of(ext.longitude0, HT).coords
    assert gcd(*m) == 1 and gcd(*l) == 1
    assert abs(ext.intersection_number()) == 1
    assert class_of(ext.meridian, HN).is_zero()
    assert abs(class_of(ext.longitude0, HN).coords[0]) == 1
    # exterior and neighbourhood tile the subdivided model
    E3, N3 = set(ext.exterior.complex.simplices(3)), set(ext.neighborhood.simplices(3))
    assert not E3 & N3 and E3 | N3 == set(ext.model.complex.simplices(3))


@pytest.mark.parametrize("family,knot", EXTERIOR_CASES)
def test_longitudes_push_forward_to_the_knot_class(cat, family, knot):
    ext = cat.exterior(family, knot)
    G = homology_group(ext.model.complex, None, 1, Ring.Z)
    kappa = class_of(ext.knot_chain(), G)
    for k in (-2, 0, 1, 5):
        assert class_of(ext.longitude(k), G) == kappa


def test_meridian_links_the_knot_positively(cat):
    # the meridian is the boundary of a disk hitting K once; with the model orientation it
    # winds right-handedly, so every tetrahedron (v, w, c_i, c_i+1) along it is positive
    ext = cat.exterior("solid_torus", "core")
    v, w = ext.loop[0], ext.loop[1]
    edges = [tuple(sorted(e)) for e in ext.meridian.coeffs]
    for (a, b) in edges:
        c = ext.meridian.coeffs[(a, b)]
        head, tail = (a, b) if c > 0 else (b, a)
        assert ext.model.tet_orientation((v, w, head, tail)) == 1


def test_exterior_homology_examples(cat):
    ext = cat.exterior("solid_torus", "core")
    H = ext.exterior.homology(1)
    assert (H.betti, H.torsion) == (2, ())  # T^2 x I
    ext = cat.exterior("ball", "contractible")
    H = ext.exterior.homology(1)
    assert (H.betti, H.torsion) == (1, ())  # solid torus, generated by the meridian
    assert abs(class_of(ext.meridian, H).coords[0]) == 1


@pytest.mark.parametrize("family,knot,params,expected", [
    ("solid_torus", "core", {}, OffsetSolutionSet.everything()),
    ("ball", "contractible", {}, "unique"),
    ("solid_torus", "core_power:2", {}, 2),
    ("solid_torus", "core_power:3", {}, 3),
    ("handlebody", "handle_core:0", {"genus": 2}, OffsetSolutionSet.everything()),
    ("lens_punctured", "torsion_generator", {"p": 3, "q": 1}, OffsetSolutionSet.empty()),
])
def test_preferred_offsets(cat, family, knot, params, expected):
    ext = cat.exterior(family, knot, **params)
    got = offsets_from_exterior(ext)
    if expected == "unique":
        assert got.is_unique
    elif isinstance(expected, int):
        assert got.kind is OffsetKind.AFFINE and got.period == expected
    else:
        assert got == expected
    # brute force: test every k in a window directly against the relative group
    G = relative_exterior_h1(ext)
    for k in range(-12, 13):
        assert (k in got) == class_of(ext.longitude(k), G).is_zero(), k


@settings(max_examples=300, deadline=None)
@given(st.integers(0, 2), st.data())
def test_solve_offsets_against_enumeration(betti, data):
    moduli = [0] * betti + data.draw(st.lists(st.integers(2, 12), max_size=3))
    lon = [data.draw(st.integers(-8, 8)) for _ in moduli]
    mer = [data.draw(st.integers(-4, 4)) for _ in moduli]
    got = solve_offsets(lon, mer, moduli)

    def zero(k):
        return all(((l + k * m) % d == 0) if d else (l + k * m == 0) for l, m, d in zip(lon, mer, moduli))

    window = range(-400, 401)
    hits = [k for k in window if zero(k)]
    assert hits == [k for k in window if k in got]
    if got.kind is OffsetKind.AFFINE and got.period:
        assert all(zero(got.base + t * got.period) for t in range(-3, 4))


def test_offset_set_algebra():
    s = OffsetSolutionSet.everything().intersect_congruence(1, 4).intersect_congruence(3, 6)
    assert s == OffsetSolutionSet.affine(9, 12)
    assert OffsetSolutionSet.affine(1, 4).intersect_congruence(0, 2).is_empty
    assert OffsetSolutionSet.affine(5, 0).intersect_congruence(1, 4) == OffsetSolutionSet.affine(5, 0)
    assert OffsetSolutionSet.affine(3, 1) == OffsetSolutionSet.everything()
    assert OffsetSolutionSet.affine(-1, 3).base == 2
    assert OffsetSolutionSet.empty().representatives() == []
    assert OffsetSolutionSet.everything().describe() == "All"
