from __future__ import annotations

from itertools import combinations
from math import gcd

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fiberknot.homology import (
    HomologyError,
    Ring,
    class_of,
    homology_group,
    induced_map,
    is_cycle,
    mod2_reduce,
)
from fiberknot.linalg import Gf2Matrix, IntMatrix, gf2_rank, snf
from fiberknot.simplicial import Chain, SimplicialComplex, derived_subdivision

CIRCLE = SimplicialComplex([(0, 1), (1, 2), (0, 2)])
TORUS7 = SimplicialComplex(
    sorted({tuple(sorted((i, (i + 1) % 7, (i + 3) % 7))) for i in range(7)}
           | {tuple(sorted((i, (i + 2) % 7, (i + 3) % 7))) for i in range(7)}))
RP2 = SimplicialComplex([(0, 1, 2), (0, 2, 3), (0, 3, 4), (0, 4, 5), (0, 1, 5),
                         (1, 2, 4), (2, 3, 5), (1, 3, 4), (2, 4, 5), (1, 3, 5)])
SPHERE = SimplicialComplex([(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)])


def naive_homology(X, A, k, ring):
    """Betti number and torsion from full boundary matrices (no reduction)."""
    def cells(d):
        if d < 0 or d > X.dim:
            return []
        return [s for s in X.simplices(d) if A is None or s not in A]

    def matrix(d):
        rows, cols = cells(d - 1), cells(d)
        idx = {s: i for i, s in enumerate(rows)}
        ent = {}
        for j, s in enumerate(cols):
            for i in range(len(s)):
                f = s[:i] + s[i + 1:]
                if f in idx:
                    ent[(idx[f], j)] = (-1) ** i
        return IntMatrix(len(rows), len(cols), ent)

    def rank(d):
        if d < 1 or d > X.dim:
            return 0
        M = matrix(d)
        if ring is Ring.Z:
            return snf(M).rank
        dense = [[v % 2 for v in row] for row in M.to_dense()]
        return gf2_rank(Gf2Matrix.from_dense(dense, M.shape[1])) if dense else 0

    betti = len(cells(k)) - rank(k) - rank(k + 1)
    torsion = ()
    if ring is Ring.Z and 1 <= k + 1 <= X.dim:
        torsion = tuple(d for d in snf(matrix(k + 1)).invariants if d > 1)
    return betti, torsion


def random_complexes(max_vertices=7):
    def build(n):
        faces = [c for k in (2, 3, 4) for c in combinations(range(n), k)]
        return st.lists(st.sampled_from(faces), min_size=1, max_size=14).map(SimplicialComplex)
    return st.integers(3, max_vertices).flatmap(build)


@pytest.mark.parametrize("X,expected", [
    (CIRCLE, [(1, ()), (1, ())]),
    (TORUS7, [(1, ()), (2, ()), (1, ())]),
    (RP2, [(1, ()), (0, (2,)), (0, ())]),
    (SPHERE, [(1, ()), (0, ()), (1, ())]),
])
def test_fixture_groups(X, expected):
    for k, (b, t) in enumerate(expected):
        G = homology_group(X, None, k, Ring.Z)
        assert (G.betti, G.torsion) == (b, t)


def test_rp2_mod2_ranks_follow_universal_coefficients():
    assert [homology_group(RP2, None, k, Ring.Z2).betti for k in range(3)] == [1, 1, 1]


@settings(max_examples=80, deadline=None)
@given(random_complexes())
def test_reduction_engine_matches_naive_snf(X):
    for k in range(X.dim + 1):
        for ring in (Ring.Z, Ring.Z2):
            G = homology_group(X, None, k, ring)
            assert (G.betti, G.torsion) == naive_homology(X, None, k, ring)


@settings(max_examples=60, deadline=None)
@given(random_complexes(), st.data())
def test_relative_homology_matches_naive_snf(X, data):
    facets = list(X.facets())
    chosen = data.draw(st.lists(st.sampled_from(facets), max_size=3))
    faces = [f[:-1] for f in chosen if len(f) > 1]
    A = SimplicialComplex(faces) if faces else None
    for k in range(X.dim + 1):
        for ring in (Ring.Z, Ring.Z2):
            G = homology_group(X, A, k, ring)
            assert (G.betti, G.torsion) == naive_homology(X, A, k, ring)


@settings(max_examples=60, deadline=None)
@given(random_complexes())
def test_universal_coefficients_and_euler(X):
    chi_z = chi_2 = 0
    for k in range(X.dim + 1):
        Gz = homology_group(X, None, k, Ring.Z)
        G2 = homology_group(X, None, k, Ring.Z2)
        below = homology_group(X, None, k - 1, Ring.Z) if k else None
        even = sum(1 for t in Gz.torsion if t % 2 == 0)
        even += sum(1 for t in below.torsion if t % 2 == 0) if below else 0
        assert G2.betti == Gz.betti + even
        chi_z += (-1) ** k * Gz.betti
        chi_2 += (-1) ** k * G2.betti
    assert chi_z == chi_2 == X.euler_characteristic()


@settings(max_examples=50, deadline=None)
@given(random_complexes())
def test_basis_cycles_have_unit_coordinates(X):
    for k in range(1, X.dim + 1):
        for ring in (Ring.Z, Ring.Z2):
            G = homology_group(X, None, k, ring)
            for i, z in enumerate(G.basis):
                assert is_cycle(z, X)
                expect = [0] * G.rank
                expect[i] = 1
                assert class_of(z, G).coords == tuple(expect)


def test_class_arithmetic_on_circle():
    G = homology_group(CIRCLE, None, 1, Ring.Z)
    z = Chain.from_oriented([((0, 1), 1), ((1, 2), 1), ((2, 0), 1)])
    c = class_of(z, G)
    assert abs(c.coords[0]) == 1
    assert class_of(z * 2, G).coords == (2 * c.coords[0],)
    assert (c + c - c * 2).is_zero()
    G2 = homology_group(CIRCLE, None, 1, Ring.Z2)
    assert mod2_reduce(c * 2, G2).is_zero()
    assert not mod2_reduce(c * 3, G2).is_zero()


def test_torsion_class_in_rp2():
    G = homology_group(RP2, None, 1, Ring.Z)
    gen = G.basis[0]
    assert class_of(gen, G).coords == (1,)
    assert class_of(gen * 2, G).is_zero()
    assert class_of(gen * 3, G).coords == (1,)
    assert class_of(G.basis[0].boundary(), homology_group(RP2, None, 0, Ring.Z)).coords == (0,)


def test_boundaries_are_null():
    X = SimplicialComplex([(0, 1, 2), (0, 2, 3)])
    G = homology_group(X, None, 1, Ring.Z)
    assert class_of(Chain(2, {(0, 1, 2): 1}).boundary(), G).is_zero()


def test_class_of_rejects_non_cycles():
    G = homology_group(CIRCLE, None, 1, Ring.Z)
    with pytest.raises(HomologyError):
        class_of(Chain(1, {(0, 1): 1}), G)
    with pytest.raises(HomologyError):
        class_of(Chain(1, {(0, 5): 1}), G)


def test_relative_circle_rel_point_and_disk_rel_boundary():
    G = homology_group(CIRCLE, SimplicialComplex([(0,)]), 1, Ring.Z)
    assert G.betti == 1
    disk = SimplicialComplex([(0, 1, 2)])
    H2 = homology_group(disk, CIRCLE, 2, Ring.Z)
    assert H2.betti == 1
    # an arc with endpoints on the boundary is a relative cycle
    assert homology_group(disk, CIRCLE, 1, Ring.Z).rank == 0


def test_induced_map_circle_into_torus():
    H_T = homology_group(TORUS7, None, 1, Ring.Z)
    loop = SimplicialComplex([(v, (v + 1) % 7) for v in range(7)])
    H_L = homology_group(loop, None, 1, Ring.Z)
    phi = induced_map(H_L, H_T)
    # a simple closed curve on a torus is null or primitive; this one is essential
    assert gcd(phi[0, 0], phi[1, 0]) == 1
    assert induced_map(H_T, H_T) == IntMatrix.identity(2)


def test_homology_invariant_under_subdivision():
    for X in (TORUS7, RP2):
        Y = derived_subdivision(X).complex
        for k in range(3):
            a = homology_group(X, None, k, Ring.Z)
            b = homology_group(Y, None, k, Ring.Z)
            assert (a.betti, a.torsion) == (b.betti, b.torsion)


def test_subdivided_cycle_keeps_its_class():
    sd = derived_subdivision(TORUS7)
    G0 = homology_group(TORUS7, None, 1, Ring.Z)
    G1 = homology_group(sd.complex, None, 1, Ring.Z)
    # classes of the subdivided basis cycles must again form a basis (det +-1)
    m = [class_of(sd.subdivide_chain(z), G1).coords for z in G0.basis]
    assert abs(m[0][0] * m[1][1] - m[0][1] * m[1][0]) == 1
