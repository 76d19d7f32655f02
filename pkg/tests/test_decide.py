from __future__ import annotations

import dataclasses

import pytest

from fiberknot import catalog
from fiberknot.decide import InconsistencyError, Outcome, cross_check, decide
from fiberknot.homology import Ring, class_of, homology_group
from fiberknot.knot import EdgeLoop
from fiberknot.manifold import CompactModel3
from fiberknot.simplicial import Chain, barycentric_subdivide

CATALOG = [
    ("ball", {}),
    ("solid_torus", {}),
    ("thickened_torus", {}),
    ("handlebody", {"genus": 2}),
    ("lens_punctured", {"p": 3, "q": 1}),
    ("lens_punctured", {"p": 4, "q": 1}),
    ("s1xs2_punctured", {}),
]


@pytest.mark.parametrize("family,params", CATALOG)
def test_verdicts_match_fixtures(cat, family, params):
    cm = cat.family(family, **params)
    for name, K in cm.knots.items():
        v = decide(cm.model, K)
        assert v.outcome.value == cm.expected_verdicts[name], name
        ev = v.evidence
        if v.outcome is Outcome.PRECONDITION_FAILED:
            assert any(ev.lf_class)
        else:
            assert not any(ev.lf_class)
            assert any(ev.kappa2) == (v.outcome is Outcome.REALIZABLE)


@pytest.mark.parametrize("family,params", CATALOG)
def test_reversal_does_not_change_the_verdict(cat, family, params):
    cm = cat.family(family, **params)
    for K in cm.knots.values():
        assert decide(cm.model, K).outcome == decide(cm.model, K.reversed()).outcome


def test_evidence_cycle_reproduces_coordinates(cat):
    cm = cat.family("solid_torus")
    v = decide(cm.model, cm.knots["core_power:3"])
    z = Chain.from_json(1, v.evidence.knot_cycle)
    G = homology_group(cm.model.complex, None, 1, Ring.Z)
    assert class_of(z, G).coords == v.evidence.kappa
    assert abs(v.evidence.kappa[0]) == 3


def test_cross_check_doubled_core(cat):
    cm = cat.family("solid_torus")
    v = decide(cm.model, cm.knots["core_power:2"], check=True)
    assert v.outcome is Outcome.NOT_REALIZABLE
    names = {c.name for c in v.report.checks}
    assert {"preferred framing exists", "preferred longitudes vanish mod 2",
            "no extension sends the zero class to 1"} <= names
    assert v.report.passed and v.evidence.witness is None
    assert v.evidence.offsets.period == 2


def test_cross_check_core(cat):
    cm = cat.family("solid_torus")
    v = decide(cm.model, cm.knots["core"], check=True)
    assert v.outcome is Outcome.REALIZABLE and v.report.passed
    assert "extension with value 1 exists" in {c.name for c in v.report.checks}
    assert v.evidence.witness == (1,)


def test_cross_check_handlebody(cat):
    cm = cat.family("handlebody", genus=2)
    v = decide(cm.model, cm.knots["handle_core:0"], check=True)
    assert v.outcome is Outcome.REALIZABLE and v.report.passed
    assert sum(v.evidence.kappa2) == 1


def test_cross_check_detects_a_wrong_mod2_class(cat):
    cm = cat.family("solid_torus")
    K = cm.knots["core"]
    good = decide(cm.model, K).evidence
    bad = dataclasses.replace(good, kappa2=(0,))
    with pytest.raises(InconsistencyError, match="mod-2 reduction"):
        cross_check(cm.model, K, evidence=bad)
    rep = cross_check(cm.model, K, evidence=bad, strict=False,
                      exterior=cat.exterior("solid_torus", "core"))
    assert not rep.passed


def test_cross_check_needs_the_precondition(cat):
    cm = cat.family("lens_punctured", p=3, q=1)
    with pytest.raises(ValueError):
        cross_check(cm.model, cm.knots["torsion_generator"])


def test_verdict_serialization(cat):
    cm = cat.family("solid_torus")
    v = decide(cm.model, cm.knots["core"], check=True)
    data = v.to_json()
    assert data["verdict"] == "Realizable"
    assert data["evidence"]["offsets"]["kind"] == "All"
    assert all(c["passed"] for c in data["checks"])
    assert v.lines()[0] == "verdict: Realizable"


def test_subdivision_invariance_ball():
    cm = catalog.generate_family("ball")
    K = cm.knots["contractible"]
    sd = barycentric_subdivide(cm.model.complex)
    M2 = CompactModel3(sd.complex)
    K2 = EdgeLoop(sd.subdivide_loop(K.vertices))
    assert decide(M2, K2).outcome == decide(cm.model, K).outcome == Outcome.NOT_REALIZABLE
