"""Line-oriented text format for a triangulated model with named knots.

See docs/FORMAT.md for the grammar. Example::

    fiberknot-tri 1
    vertices 4
    tet 0 1 2 3 +1
    knot k 0 1 2
    meta family ball
    expect H1 Z 0
    expect-verdict k NotRealizable
"""
from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

from .knot import EdgeLoop
from .manifold import CompactModel3
from .simplicial import SimplicialComplex, permutation_sign

__all__ = ["FormatError", "TriangulationFile", "parse", "dumps", "read", "write", "from_model", "from_catalog"]

MAGIC = "fiberknot-tri"
VERSION = 1
VERDICTS = ("Realizable", "NotRealizable", "PreconditionFailed")


class FormatError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line else message)


@dataclass
class TriangulationFile:
    vertices: int
    tets: list[tuple[int, int, int, int]]
    signs: list[int] | None = None
    knots: dict[str, EdgeLoop] = field(default_factory=dict)
    meta: dict[str, str] = field(default_factory=dict)
    expected_h: dict[tuple[int, str], tuple[int, tuple[int, ...]]] = field(default_factory=dict)
    expected_verdicts: dict[str, str] = field(default_factory=dict)

    def complex(self) -> SimplicialComplex:
        return SimplicialComplex(self.tets)

    def model(self) -> CompactModel3:
        """Validated model; raises InvalidModelError / NonOrientableError."""
        X = self.complex()
        if self.signs is None:
            return CompactModel3(X)
        orientation = {}
        for t, s in zip(self.tets, self.signs):
            st = tuple(sorted(t))
            # a sign refers to the vertex order in which the tetrahedron is written
            orientation[st] = s * permutation_sign(t)
        return CompactModel3(X, orientation)

    def knot(self, name: str) -> EdgeLoop:
        try:
            return self.knots[name]
        except KeyError:
            raise KeyError(f"no knot named {name!r}; file has: {', '.join(sorted(self.knots)) or 'none'}") \
                from None


def _ints(tokens: list[str], lineno: int) -> list[int]:
    try:
        return [int(t) for t in tokens]
    except ValueError:
        raise FormatError(f"expected integers, got {' '.join(tokens)!r}", lineno) from None


def parse(text: str) -> TriangulationFile:
    lines = text.splitlines()
    header_seen = False
    nverts: int | None = None
    tets: list[tuple[int, int, int, int]] = []
    signs: list[int | None] = []
    out = TriangulationFile(0, [])
    for lineno, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tok = line.split()
        key = tok[0]
        if not header_seen:
            if key != MAGIC or len(tok) != 2:
                raise FormatError(f"file must start with '{MAGIC} {VERSION}'", lineno)
            if tok[1] != str(VERSION):
                raise FormatError(f"unsupported format version {tok[1]}", lineno)
            header_seen = True
            continue
        if key == "vertices":
            if nverts is not None or len(tok) != 2:
                raise FormatError("'vertices' must appear once with one count", lineno)
            (nverts,) = _ints(tok[1:], lineno)
        elif key == "tet":
            if len(tok) not in (5, 6):
                raise FormatError("'tet' takes four vertices and an optional sign", lineno)
            vs = _ints(tok[1:5], lineno)
            if len(set(vs)) != 4:
                raise FormatError(f"tetrahedron {vs} repeats a vertex", lineno)
            tets.append(tuple(vs))  # type: ignore[arg-type]
            if len(tok) == 6:
                if tok[5] not in ("+1", "-1", "1"):
                    raise FormatError(f"bad orientation sign {tok[5]!r}", lineno)
                signs.append(-1 if tok[5] == "-1" else 1)
            else:
                signs.append(None)
        elif key == "knot":
            if len(tok) < 5:
                raise FormatError("'knot' needs a name and at least three vertices", lineno)
            if tok[1] in out.knots:
                raise FormatError(f"duplicate knot name {tok[1]!r}", lineno)
            out.knots[tok[1]] = EdgeLoop(_ints(tok[2:], lineno))
        elif key == "meta":
            if len(tok) < 3:
                raise FormatError("'meta' needs a key and a value", lineno)
            out.meta[tok[1]] = " ".join(tok[2:])
        elif key == "expect":
            if len(tok) < 4 or not tok[1].startswith("H") or tok[2] not in ("Z", "Z2"):
                raise FormatError("expected 'expect H<k> <Z|Z2> <betti> [torsion...]'", lineno)
            (k,) = _ints([tok[1][1:]], lineno)
            vals = _ints(tok[3:], lineno)
            out.expected_h[(k, tok[2])] = (vals[0], tuple(vals[1:]))
        elif key == "expect-verdict":
            if len(tok) != 3 or tok[2] not in VERDICTS:
                raise FormatError(f"expected 'expect-verdict NAME <{'|'.join(VERDICTS)}>'", lineno)
            out.expected_verdicts[tok[1]] = tok[2]
        else:
            raise FormatError(f"unknown keyword {key!r}", lineno)
    if not header_seen:
        raise FormatError("empty file")
    if nverts is None:
        raise FormatError("missing 'vertices' line")
    bad = sorted({v for t in tets for v in t if not 0 <= v < nverts})
    if bad:
        raise FormatError(f"vertex indices out of range 0..{nverts - 1}: {bad[:5]}")
    for name, K in out.knots.items():
        if any(not 0 <= v < nverts for v in K.vertices):
            raise FormatError(f"knot {name!r} uses a vertex out of range")
    if any(s is None for s in signs) and any(s is not None for s in signs):
        raise FormatError("orientation signs must be given for all tetrahedra or none")
    out.vertices = nverts
    out.tets = tets
    out.signs = None if not signs or signs[0] is None else [int(s) for s in signs]  # type: ignore[arg-type]
    return out


def dumps(f: TriangulationFile) -> str:
    lines = [f"{MAGIC} {VERSION}"]
    for k, v in sorted(f.meta.items()):
        lines.append(f"meta {k} {v}")
    lines.append(f"vertices {f.vertices}")
    for i, t in enumerate(f.tets):
        s = "" if f.signs is None else (" +1" if f.signs[i] > 0 else " -1")
        lines.append("tet " + " ".join(map(str, t)) + s)
    for name in sorted(f.knots):
        lines.append(f"knot {name} " + " ".join(map(str, f.knots[name].vertices)))
    for (k, ring), (betti, tors) in sorted(f.expected_h.items()):
        lines.append(f"expect H{k} {ring} {betti}" + "".join(f" {t}" for t in tors))
    for name in sorted(f.expected_verdicts):
        lines.append(f"expect-verdict {name} {f.expected_verdicts[name]}")
    return "\n".join(lines) + "\n"


def read(path: str | Path) -> TriangulationFile:
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise FormatError(f"cannot read {path}: {e.strerror}") from None
    return parse(text)


def write(f: TriangulationFile, path: str | Path) -> None:
    Path(path).write_text(dumps(f))


def from_model(M: CompactModel3, knots: dict[str, EdgeLoop] | None = None, **extra) -> TriangulationFile:
    """File contents for a model, tetrahedra listed in increasing vertex order with their signs.

    Vertices are relabelled 0..n-1 in increasing order if the labels have gaps.
    """
    labels = M.complex.vertices
    relabel = {v: i for i, v in enumerate(labels)}
    tets = [tuple(relabel[v] for v in t) for t in M.complex.simplices(3)]
    signs = [M.orientation[t] for t in M.complex.simplices(3)]
    ks = {name: EdgeLoop(relabel[v] for v in K.vertices) for name, K in (knots or {}).items()}
    return TriangulationFile(len(labels), tets, signs, ks, **extra)  # type: ignore[arg-type]


def from_catalog(cm, knots: list[str] | None = None) -> TriangulationFile:
    """Serialize a generated catalog model with (a selection of) its knots and expectations."""
    names = sorted(cm.knots) if not knots else knots
    missing = [n for n in names if n not in cm.knots]
    if missing:
        raise KeyError(f"{cm.family} has no knot(s) {missing}; available: {', '.join(sorted(cm.knots))}")
    meta = {"family": cm.family}
    meta.update({k: str(v) for k, v in sorted(cm.params.items())})
    return from_model(cm.model, {n: cm.knots[n] for n in names}, meta=meta,
                      expected_h=dict(cm.expected_h),
                      expected_verdicts={n: cm.expected_verdicts[n] for n in names})
