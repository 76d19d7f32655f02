from __future__ import annotations

from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fiberknot.simplicial import (
    Chain,
    SimplicialComplex,
    barycentric_subdivide,
    boundary_matrix,
    chords,
    complement_closure,
    derived_subdivision,
    oriented,
    permutation_sign,
    star_neighborhood,
    stellar_subdivision,
)

TET = SimplicialComplex([(0, 1, 2, 3)])


def random_complexes(max_vertices: int = 7, max_dim: int = 3):
    def build(n):
        faces = [c for k in range(2, max_dim + 2) for c in combinations(range(n), k)]
        return st.lists(st.sampled_from(faces), min_size=1, max_size=12).map(SimplicialComplex)
    return st.integers(3, max_vertices).flatmap(build)


def test_closure_and_counts():
    assert [TET.count(k) for k in range(4)] == [4, 6, 4, 1]
    assert TET.euler_characteristic() == 1
    assert (1, 3) in TET and (0, 1, 2) in TET and (4,) not in TET


def test_permutation_sign_and_oriented():
    assert permutation_sign([0, 1, 2]) == 1
    assert permutation_sign([1, 0, 2]) == -1
    assert permutation_sign([2, 0, 1]) == 1
    assert oriented((3, 1, 2)) == ((1, 2, 3), 1)
    assert oriented((2, 1, 3)) == ((1, 2, 3), -1)


def test_repeated_vertex_rejected():
    with pytest.raises(ValueError):
        SimplicialComplex([(0, 0, 1)])


@settings(max_examples=80, deadline=None)
@given(random_complexes())
def test_boundary_squared_is_zero(X):
    for k in range(2, X.dim + 1):
        assert (boundary_matrix(X, k - 1) @ boundary_matrix(X, k)).nnz == 0


def test_barycentric_tetrahedron_f_vector():
    Y = barycentric_subdivide(TET).complex
    assert [Y.count(k) for k in range(4)] == [15, 50, 60, 24]
    assert Y.euler_characteristic() == 1


@settings(max_examples=40, deadline=None)
@given(random_complexes(6), st.data())
def test_subdivision_is_a_chain_map(X, data):
    near = data.draw(st.one_of(st.none(), st.sets(st.sampled_from(X.vertices), min_size=1)))
    sd = derived_subdivision(X, near=near)
    assert sd.complex.euler_characteristic() == X.euler_characteristic()
    for k in range(1, X.dim + 1):
        for s in X.simplices(k):
            c = Chain(k, {s: 1})
            assert sd.subdivide_chain(c).boundary() == sd.subdivide_chain(c.boundary())


def test_stellar_subdivision_of_a_face():
    sd = stellar_subdivision(TET, [(0, 1, 2)])
    assert sd.complex.count(3) == 3
    f = sd.subdivide_chain(Chain(3, {(0, 1, 2, 3): 1}))
    assert f.boundary() == sd.subdivide_chain(Chain(3, {(0, 1, 2, 3): 1}).boundary())
    assert sd.carrier((4, 3)) == (0, 1, 2, 3)


def test_stellar_rejects_vanished_simplex():
    with pytest.raises(ValueError):
        stellar_subdivision(TET, [(0, 1), (0, 1, 2)])


def test_chords_and_fullness():
    square = SimplicialComplex([(0, 1, 2), (0, 2, 3)])
    path = SimplicialComplex([(0, 1), (1, 2)])
    # 0 and 2 span an edge not in the path; 0,1,2 span a triangle
    assert set(chords(square, path)) == {(0, 1, 2), (0, 2)}
    sd = stellar_subdivision(square, chords(square, path))
    assert chords(sd.complex, path) == []


def test_subdivide_loop_inserts_midpoints():
    X = SimplicialComplex([(0, 1, 2)])
    sd = derived_subdivision(X, near=None)
    loop = sd.subdivide_loop([0, 1, 2])
    assert len(loop) == 6 and loop[0::2] == [0, 1, 2]


def test_star_and_complement():
    X = SimplicialComplex([(0, 1, 2), (1, 2, 3), (2, 3, 4)])
    N = star_neighborhood(X, SimplicialComplex([(0,)]))
    assert N.facets() == ((0, 1, 2),)
    E = complement_closure(X, N)
    assert set(E.facets()) == {(1, 2, 3), (2, 3, 4)}
    with pytest.raises(ValueError):
        star_neighborhood(X, SimplicialComplex([(0, 4)]))


def test_link_and_components():
    X = SimplicialComplex([(0, 1, 2), (0, 2, 3), (5, 6)])
    assert set(X.link((0,)).facets()) == {(1, 2), (2, 3)}
    assert X.connected_components() == [[0, 1, 2, 3], [5, 6]]


def test_chain_algebra_and_json():
    a = Chain.from_oriented([((1, 0), 1), ((1, 2), 1)])
    assert a.coeffs == {(0, 1): -1, (1, 2): 1}
    assert (a + a - a * 2).is_zero()
    assert a.boundary().coeffs == {(0,): 1, (1,): -2, (2,): 1}
    assert Chain.from_json(1, a.to_json()) == a
    assert (a * 3).mod2().coeffs == {(0, 1): 1, (1, 2): 1}


def test_closed_loop_boundary_vanishes():
    loop = Chain.from_oriented([((0, 1), 1), ((1, 2), 1), ((2, 0), 1)])
    assert loop.boundary().is_zero()


@pytest.mark.parametrize("family,params", [
    ("lens_punctured", {"p": 3, "q": 1}),
    ("lens_punctured", {"p": 4, "q": 1}),
    ("s1xs2_punctured", {}),
])
def test_boundary_squares_to_zero_on_large_barycentric_subdivisions(cat, family, params):
    Y = barycentric_subdivide(cat.family(family, **params).model.complex).complex
    assert Y.count(3) == 24 * cat.family(family, **params).model.complex.count(3)
    for k in (1, 2):
        assert (boundary_matrix(Y, k) @ boundary_matrix(Y, k + 1)).nnz == 0
