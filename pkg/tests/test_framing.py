from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fiberknot.framing import (
    Gf2Functional,
    SigmaClass,
    brute_force_extension_exists,
    cable_class,
    construct_extension,
    extension_exists,
    twist,
)
from fiberknot.homology import Ring, class_of, homology_group
from fiberknot.simplicial import Chain, SimplicialComplex


@pytest.mark.parametrize("c,n,expected", [(0, 1, 1), (0, 0, 0), (1, 0, 1), (1, 2, 1), (1, 1, 0), (0, -3, 1)])
def test_twist_table(c, n, expected):
    assert twist(SigmaClass(c), n) == SigmaClass(expected)


@given(st.integers(0, 1), st.integers(-50, 50))
def test_twist_is_addition_mod_2(c, n):
    assert twist(c, n).value == (c + n) % 2


def test_cable_class_is_always_the_generator():
    assert cable_class(0) == SigmaClass(1)
    assert cable_class(1) == SigmaClass(1)
    for c in (0, 1):
        assert cable_class(c).value == (2 * c + 1) % 2
        assert cable_class(cable_class(c)) == SigmaClass(1)


def test_sigma_class_rejects_other_values():
    with pytest.raises(ValueError):
        SigmaClass(2)


@settings(max_examples=300, deadline=None)
@given(st.lists(st.integers(0, 1), max_size=12), st.integers(0, 1))
def test_extension_exists_matches_brute_force(kappa, c):
    expected = brute_force_extension_exists(tuple(kappa), c)
    assert extension_exists(tuple(kappa), c) == expected
    assert expected == (c == 0 or any(kappa))


def test_extension_examples():
    assert not extension_exists((0, 0), 1)
    assert extension_exists((0, 0, 0), 0)
    assert extension_exists((), 0) and not extension_exists((), 1)
    assert extension_exists((0, 1), 1)


def test_construct_extension_examples():
    phi = construct_extension((1, 0))
    assert phi((1, 0)) == 1 and phi.coefficients[0] == 1
    phi = construct_extension((1, 1))
    assert phi.coefficients in {(1, 0), (0, 1)}
    with pytest.raises(ValueError):
        construct_extension((0, 0))


@settings(max_examples=200, deadline=None)
@given(st.lists(st.integers(0, 1), min_size=1, max_size=12).filter(any))
def test_construct_extension_satisfies_its_equation(kappa):
    assert construct_extension(tuple(kappa))(tuple(kappa)) == 1


def test_works_on_homology_classes():
    circle = SimplicialComplex([(0, 1), (1, 2), (0, 2)])
    G = homology_group(circle, None, 1, Ring.Z2)
    gen = G.basis[0]
    k2 = class_of(gen, G)
    assert extension_exists(k2, 1)
    assert construct_extension(k2)(k2) == 1
    loop = Chain.from_oriented([((0, 1), 1), ((1, 2), 1), ((2, 0), 1)])
    integral = class_of(loop, homology_group(circle, None, 1, Ring.Z))
    with pytest.raises(ValueError, match="Z/2"):
        extension_exists(integral, 1)


def test_functional_length_check():
    with pytest.raises(ValueError):
        Gf2Functional((1, 0))((1, 0, 1))
