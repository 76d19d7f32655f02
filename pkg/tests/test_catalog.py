from __future__ import annotations

import pytest

from fiberknot import catalog
from fiberknot.catalog import CatalogSpec, expected_homology, generate, parse_knot_selector
from fiberknot.homology import Ring, class_of
from fiberknot.linalg import IntMatrix, determinant
from fiberknot.manifold import is_coherent, validate

FAMILY_CASES = [
    ("ball", {}),
    ("solid_torus", {}),
    ("thickened_torus", {}),
    ("handlebody", {"genus": 1}),
    ("handlebody", {"genus": 2}),
    ("handlebody", {"genus": 3}),
    ("lens_punctured", {"p": 2, "q": 1}),
    ("lens_punctured", {"p": 3, "q": 1}),
    ("lens_punctured", {"p": 4, "q": 1}),
    ("lens_punctured", {"p": 5, "q": 2}),
    ("s1xs2_punctured", {}),
]


@pytest.mark.parametrize("family,params", FAMILY_CASES)
def test_models_are_valid_and_match_expected_homology(cat, family, params):
    cm = cat.family(family, **params)
    M = cm.model
    assert validate(M.complex).is_valid
    assert is_coherent(M.complex, M.orientation)
    for (k, ring), (betti, torsion) in cm.expected_h.items():
        G = M.homology(k, Ring.parse(ring))
        assert (G.betti, G.torsion) == (betti, torsion), (k, ring)


@pytest.mark.parametrize("family,params", FAMILY_CASES)
def test_knots_are_simple_interior_loops(cat, family, params):
    cm = cat.family(family, **params)
    assert cm.knots
    for name, K in cm.knots.items():
        assert K.problems(cm.model) == [], name
        assert name in cm.expected_verdicts


def test_lens_mod2_ranks_follow_parity():
    # H_1(L(p,q) minus a ball) = Z/p, so Z/2 ranks of H_1 and H_2 are 1 exactly for even p
    for p in (2, 3, 4, 5):
        exp = expected_homology("lens_punctured", {"p": p, "q": 1})
        assert exp[(1, "Z")] == (0, (p,))
        assert exp[(1, "Z2")][0] == exp[(2, "Z2")][0] == (1 if p % 2 == 0 else 0)


def test_core_power_winds_n_times(cat):
    cm = cat.family("solid_torus")
    G = cm.model.homology(1)
    core = cm.knots["core"].chain()
    g = class_of(core, G).coords[0]
    for n in (-3, -2, -1, 1, 2, 3):
        assert class_of(cm.knots[f"core_power:{n}"].chain(), G).coords[0] == n * g


def test_handle_cores_form_a_basis(cat):
    cm = cat.family("handlebody", genus=3)
    G = cm.model.homology(1)
    rows = [class_of(cm.knots[f"handle_core:{i}"].chain(), G).coords for i in range(3)]
    assert abs(determinant(IntMatrix.from_dense(rows))) == 1


def test_generate_spec():
    M, K = generate(CatalogSpec("solid_torus", "core_power:4"))
    assert K.problems(M) == []
    with pytest.raises(KeyError):
        generate(CatalogSpec("ball", "core"))


@pytest.mark.parametrize("kwargs", [
    {"family": "handlebody", "genus": 5},
    {"family": "handlebody", "genus": 0},
    {"family": "lens_punctured", "p": 8},
    {"family": "lens_punctured", "p": 4, "q": 2},
    {"family": "solid_torus", "max_power": 5},
    {"family": "klein_bottle"},
])
def test_parameter_limits(kwargs):
    family = kwargs.pop("family")
    with pytest.raises(ValueError):
        catalog.generate_family(family, **kwargs)


def test_selector_parsing():
    assert parse_knot_selector("core") == ("core", None)
    assert parse_knot_selector("core_power:-2") == ("core_power", -2)
    with pytest.raises(ValueError):
        parse_knot_selector("core_power:x")


def test_expected_verdict_table():
    ev = catalog.expected_verdict
    assert ev("ball", "contractible") == "NotRealizable"
    assert ev("solid_torus", "core") == "Realizable"
    assert ev("solid_torus", "core_power:2") == "NotRealizable"
    assert ev("solid_torus", "core_power:-3") == "Realizable"
    assert ev("lens_punctured", "torsion_generator") == "PreconditionFailed"
    assert ev("handlebody", "handle_core:1") == "Realizable"
