"""Deciding whether a knot is the regular fibre of a submersion to the plane.

For a knot K that is null in locally finite H_1(M; Z), K is realizable
exactly when its class in H_1(M; Z/2) is nonzero. ``cross_check``
re-derives the verdict through preferred framings and framing-class
arithmetic, and raises if the two routes disagree.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from .framing import SigmaClass, cable_class, construct_extension, extension_exists
from .homology import Ring, class_of, homology_group, mod2_reduce
from .knot import (
    EdgeLoop,
    ExteriorData,
    OffsetSolutionSet,
    build_exterior,
    knot_class,
    locally_finite_class,
    offsets_from_exterior,
)
from .manifold import CompactModel3

__all__ = ["Outcome", "Evidence", "Verdict", "CheckResult", "CrossCheckReport", "InconsistencyError",
           "decide", "cross_check"]


class Outcome(Enum):
    REALIZABLE = "Realizable"
    NOT_REALIZABLE = "NotRealizable"
    PRECONDITION_FAILED = "PreconditionFailed"

    def __str__(self) -> str:
        return self.value


@dataclass
class Evidence:
    kappa: tuple[int, ...]
    kappa_group: str
    kappa2: tuple[int, ...]
    kappa2_group: str
    lf_class: tuple[int, ...]
    lf_group: str
    knot_cycle: list = field(default_factory=list)
    offsets: OffsetSolutionSet | None = None
    witness: tuple[int, ...] | None = None
    longitude0: list | None = None
    meridian: list | None = None

    def to_json(self) -> dict:
        out = {
            "kappa": list(self.kappa), "kappa_group": self.kappa_group,
            "kappa2": list(self.kappa2), "kappa2_group": self.kappa2_group,
            "lf_class": list(self.lf_class), "lf_group": self.lf_group,
            "knot_cycle": self.knot_cycle,
        }
        if self.offsets is not None:
            out["offsets"] = self.offsets.to_json()
            out["longitude0"] = self.longitude0
            out["meridian"] = self.meridian
        if self.witness is not None:
            out["extension_witness"] = list(self.witness)
        return out


@dataclass
class Verdict:
    outcome: Outcome
    evidence: Evidence
    report: "CrossCheckReport | None" = None

    @property
    def realizable(self) -> bool:
        return self.outcome is Outcome.REALIZABLE

    def lines(self) -> list[str]:
        ev = self.evidence
        out = [f"verdict: {self.outcome}",
               f"H1(M;Z): {ev.kappa_group}",
               f"knot class: {list(ev.kappa)}",
               f"H1(M;Z2): {ev.kappa2_group}",
               f"knot class mod 2: {list(ev.kappa2)}",
               f"locally finite H1: {ev.lf_group}",
               f"locally finite class: {list(ev.lf_class)}"]
        if ev.offsets is not None:
            out.append(f"preferred offsets: {ev.offsets.describe()}")
        if ev.witness is not None:
            out.append(f"extension witness: {list(ev.witness)}")
        if self.report is not None:
            out.extend(f"check {c.name}: {'pass' if c.passed else 'FAIL'} ({c.detail})"
                       for c in self.report.checks)
        return out

    def to_json(self) -> dict:
        out = {"verdict": self.outcome.value, "evidence": self.evidence.to_json()}
        if self.report is not None:
            out["checks"] = [{"name": c.name, "passed": c.passed, "detail": c.detail}
                             for c in self.report.checks]
        return out


class InconsistencyError(AssertionError):
    """Two routes to the same fact disagree; this indicates a bug."""

    def __init__(self, check: "CheckResult"):
        self.check = check
        super().__init__(f"consistency check '{check.name}' failed: {check.detail}")


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str


@dataclass
class CrossCheckReport:
    checks: list[CheckResult]
    exterior: ExteriorData | None = field(default=None, repr=False)
    offsets: OffsetSolutionSet | None = None
    witness: tuple[int, ...] | None = None

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)


def _evidence(M: CompactModel3, K: EdgeLoop) -> Evidence:
    lf = locally_finite_class(M, K)
    kappa = knot_class(M, K, Ring.Z)
    H2 = homology_group(M.complex, None, 1, Ring.Z2)
    kappa2 = mod2_reduce(kappa, H2)
    return Evidence(kappa.coords, kappa.group.describe(), kappa2.coords, H2.describe(),
                    lf.coords, lf.group.describe(), K.chain().to_json())


def decide(M: CompactModel3, K: EdgeLoop, *, check: bool = False) -> Verdict:
    """Verdict for K in the interior of M; with ``check`` also run ``cross_check``."""
    ev = _evidence(M, K)
    if any(ev.lf_class):
        return Verdict(Outcome.PRECONDITION_FAILED, ev)
    outcome = Outcome.REALIZABLE if any(ev.kappa2) else Outcome.NOT_REALIZABLE
    verdict = Verdict(outcome, ev)
    if check:
        rep = cross_check(M, K, evidence=ev)
        verdict.report = rep
        ev.offsets = rep.offsets
        ev.witness = rep.witness
        ev.longitude0 = rep.exterior.longitude0.to_json()
        ev.meridian = rep.exterior.meridian.to_json()
    return verdict


def cross_check(M: CompactModel3, K: EdgeLoop, *, evidence: Evidence | None = None,
                exterior: ExteriorData | None = None, strict: bool = True) -> CrossCheckReport:
    """Re-derive the verdict through preferred framings.

    Checks, each raising ``InconsistencyError`` when ``strict``:
      existence of a preferred framing: the offset set is nonempty;
      mod-2 reduction agrees: reducing the integral class matches the class
        computed with Z/2 coefficients directly;
      when the mod-2 class vanishes, every preferred longitude is zero in
        H_1(exterior; Z/2), and the cable's framing class (always 1) admits no
        extension, for either value of the unknown framing class;
      when it does not vanish, a functional taking the value 1 on it exists.
    """
    ev = evidence or _evidence(M, K)
    if any(ev.lf_class):
        raise ValueError("the knot is not null in locally finite homology; nothing to check")
    checks: list[CheckResult] = []

    def record(name: str, ok: bool, detail: str) -> None:
        res = CheckResult(name, ok, detail)
        checks.append(res)
        if strict and not ok:
            raise InconsistencyError(res)

    direct = knot_class(M, K, Ring.Z2).coords
    record("mod-2 reduction", direct == ev.kappa2,
           f"reduced {list(ev.kappa2)}, direct {list(direct)}")

    ext = exterior or build_exterior(M, K)
    offsets = offsets_from_exterior(ext)
    record("preferred framing exists", not offsets.is_empty, f"offsets {offsets.describe()}")

    witness = None
    if not any(ev.kappa2):
        HE2 = homology_group(ext.exterior.complex, None, 1, Ring.Z2)
        bad = [k for k in offsets.representatives() if not class_of(ext.longitude(k), HE2).is_zero()]
        record("preferred longitudes vanish mod 2", not bad,
               f"checked offsets {offsets.representatives()}" + (f", nonzero at {bad}" if bad else ""))
        forced = [cable_class(SigmaClass(eps)) for eps in (0, 1)]
        record("cable framing class is the generator", all(c.value == 1 for c in forced),
               f"cable classes {[c.value for c in forced]}")
        blocked = not any(extension_exists(ev.kappa2, c) for c in forced)
        record("no extension sends the zero class to 1", blocked,
               "extension_exists(0, 1) = " + str(not blocked).lower())
    else:
        phi = construct_extension(ev.kappa2)
        witness = phi.coefficients
        record("extension with value 1 exists", phi(ev.kappa2) == 1,
               f"functional {list(witness)} on class {list(ev.kappa2)}")
    return CrossCheckReport(checks, ext, offsets, witness)
