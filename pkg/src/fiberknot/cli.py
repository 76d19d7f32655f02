"""Command-line interface: ``fiberknot <command> ...`` (or ``python -m fiberknot``).

Exit status: 0 success, 1 the model or knot fails validation (or an
expectation check fails), 2 the file cannot be read or parsed.
"""
from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

from . import catalog
from .decide import InconsistencyError, decide
from .fileformat import FormatError, TriangulationFile, from_catalog, read, write
from .framing import SigmaClass, cable_class, construct_extension, extension_exists, twist
from .homology import Ring
from .knot import (
    EdgeLoop,
    ExteriorError,
    KnotError,
    build_exterior,
    is_null_locally_finite,
    offsets_from_exterior,
    relative_exterior_h1,
)
from .manifold import CompactModel3, InvalidModelError, NonOrientableError, validate

EXIT_OK, EXIT_INVALID, EXIT_PARSE = 0, 1, 2


class _Fail(Exception):
    def __init__(self, code: int, message: str):
        self.code = code
        super().__init__(message)


def _load(path: str) -> TriangulationFile:
    try:
        return read(path)
    except FormatError as e:
        raise _Fail(EXIT_PARSE, f"{path}: {e}") from None


def _model(f: TriangulationFile) -> CompactModel3:
    try:
        return f.model()
    except (InvalidModelError, NonOrientableError, ValueError) as e:
        raise _Fail(EXIT_INVALID, f"invalid model: {e}") from None


def _knot(f: TriangulationFile, M: CompactModel3, name: str) -> EdgeLoop:
    try:
        K = f.knot(name)
    except KeyError as e:
        raise _Fail(EXIT_PARSE, str(e.args[0])) from None
    probs = K.problems(M)
    if probs:
        raise _Fail(EXIT_INVALID, f"invalid knot {name!r}: {'; '.join(probs)}")
    return K


def _emit(lines: list[str], payload: dict | None, as_json: bool) -> None:
    if as_json and payload is not None:
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        print("\n".join(lines))


# ---------------------------------------------------------------------------
# commands


def cmd_validate(args) -> int:
    f = _load(args.file)
    X = f.complex()
    rep = validate(X)
    lines = [f"file: {args.file}",
             f"vertices: {X.vertex_count}", f"tetrahedra: {X.count(3)}",
             f"pseudomanifold: {str(rep.is_pseudomanifold).lower()}",
             f"vertex links: {'ok' if rep.vertex_links_ok else 'bad'}",
             f"orientable: {str(rep.is_orientable).lower()}",
             f"boundary triangles: {rep.boundary_triangles}",
             f"components: {rep.components}"]
    code = EXIT_OK
    if not rep.is_valid:
        lines.append(f"status: invalid ({rep.summary()})")
        code = EXIT_INVALID
    else:
        M = CompactModel3(X, None, report=rep) if f.signs is None else _model(f)
        for name in sorted(f.knots):
            probs = f.knots[name].problems(M)
            lines.append(f"knot {name}: " + ("ok" if not probs else "invalid (" + "; ".join(probs) + ")"))
            if probs:
                code = EXIT_INVALID
        lines.append("status: " + ("valid" if code == EXIT_OK else "invalid"))
    print("\n".join(lines))
    return code


def cmd_homology(args) -> int:
    f = _load(args.file)
    M = _model(f)
    ring = Ring.Z2 if args.mod2 else Ring.Z
    degrees = [args.k] if args.k is not None else list(range(0, 4))
    code = EXIT_OK
    label = "rel boundary " if args.rel_boundary else ""
    for k in degrees:
        G = M.homology(k, ring, rel_boundary=args.rel_boundary)
        line = f"H{k}({label}{ring}): {G.describe()}"
        key = (k, str(ring))
        if args.check and not args.rel_boundary and key in f.expected_h:
            exp = f.expected_h[key]
            ok = (G.betti, G.torsion) == (exp[0], exp[1]) if ring is Ring.Z else G.betti == exp[0]
            line += "  [expected: match]" if ok else f"  [expected: MISMATCH, file says {exp}]"
            if not ok:
                code = EXIT_INVALID
        print(line)
    return code


def cmd_decide(args) -> int:
    f = _load(args.file)
    M = _model(f)
    K = _knot(f, M, args.knot)
    try:
        v = decide(M, K, check=args.cross_check and is_null_locally_finite(M, K))
    except InconsistencyError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INVALID
    except ExteriorError as e:
        raise _Fail(EXIT_INVALID, f"exterior construction failed: {e}") from None
    payload = v.to_json()
    payload["knot"] = args.knot
    _emit([f"knot: {args.knot}"] + v.lines(), payload, args.json)
    if args.check and args.knot in f.expected_verdicts:
        if f.expected_verdicts[args.knot] != v.outcome.value:
            print(f"expected verdict {f.expected_verdicts[args.knot]}, got {v.outcome}", file=sys.stderr)
            return EXIT_INVALID
    return EXIT_OK


def cmd_exterior(args) -> int:
    f = _load(args.file)
    M = _model(f)
    K = _knot(f, M, args.knot)
    try:
        ext = build_exterior(M, K)
    except ExteriorError as e:
        raise _Fail(EXIT_INVALID, f"exterior construction failed: {e}") from None
    E = ext.exterior.complex
    HE = ext.exterior.homology(1, Ring.Z)
    HR = relative_exterior_h1(ext)
    offsets = offsets_from_exterior(ext)
    lines = [f"knot: {args.knot}",
             f"subdivided model: {ext.model.complex.count(3)} tetrahedra",
             f"neighbourhood: {ext.neighborhood.count(3)} tetrahedra",
             f"exterior: {E.count(3)} tetrahedra, {E.vertex_count} vertices",
             f"torus: {ext.torus.count(2)} triangles, chi {ext.torus.euler_characteristic()}",
             f"H1(exterior;Z): {HE.describe()}",
             f"H1(exterior rel outer boundary;Z): {HR.describe()}",
             f"meridian: {len(ext.meridian.coeffs)} edges",
             f"longitude0: {len(ext.longitude0.coeffs)} edges",
             f"meridian-longitude determinant: {ext.intersection_number()}",
             f"preferred offsets: {offsets.describe()}"]
    payload = {"knot": args.knot, "exterior_tets": E.count(3), "torus_triangles": ext.torus.count(2),
               "h1_exterior": HE.describe(), "h1_relative": HR.describe(),
               "meridian": ext.meridian.to_json(), "longitude0": ext.longitude0.to_json(),
               "intersection": ext.intersection_number(), "offsets": offsets.to_json()}
    _emit(lines, payload, args.json)
    return EXIT_OK


def cmd_generate(args) -> int:
    try:
        cm = catalog.generate_family(args.family, genus=args.genus, p=args.p, q=args.q,
                                     max_power=args.max_power)
        tf = from_catalog(cm, args.knot or None)
    except (ValueError, KeyError) as e:
        raise _Fail(EXIT_PARSE, str(e.args[0] if e.args else e)) from None
    if args.output == "-":
        from .fileformat import dumps
        sys.stdout.write(dumps(tf))
    else:
        write(tf, args.output)
        print(f"wrote {args.output}: {len(tf.tets)} tetrahedra, knots {', '.join(sorted(tf.knots))}")
    return EXIT_OK


def _parse_bits(text: str) -> tuple[int, ...]:
    text = text.strip()
    if not text:
        return ()
    try:
        bits = tuple(int(t) for t in text.replace(",", " ").split())
    except ValueError:
        raise _Fail(EXIT_PARSE, f"bad bit vector {text!r}") from None
    if any(b not in (0, 1) for b in bits):
        raise _Fail(EXIT_PARSE, f"bit vector entries must be 0 or 1: {text!r}")
    return bits


def cmd_framing(args) -> int:
    if args.op == "twist":
        print(f"twist({args.c}, {args.n}) = {twist(args.c, args.n).value}")
    elif args.op == "cable":
        print(f"cable_class({args.c}) = {cable_class(args.c).value}")
    else:
        kappa = _parse_bits(args.kappa)
        ok = extension_exists(kappa, args.c)
        print(f"extension_exists({list(kappa)}, {args.c}) = {str(ok).lower()}")
        if any(kappa):
            print(f"witness: {list(construct_extension(kappa).coefficients)}")
    return EXIT_OK


def _bit(text: str) -> int:
    v = int(text)
    if v not in (0, 1):
        raise argparse.ArgumentTypeError("framing class must be 0 or 1")
    return SigmaClass(v).value


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="fiberknot",
                                description="Decide whether knots in open 3-manifolds are regular fibres "
                                            "of submersions to the plane.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("validate", help="check a triangulation file")
    s.add_argument("file")
    s.set_defaults(func=cmd_validate)

    s = sub.add_parser("homology", help="homology groups of the model")
    s.add_argument("file")
    s.add_argument("--rel-boundary", action="store_true", help="relative to the boundary")
    s.add_argument("--mod2", action="store_true", help="Z/2 coefficients")
    s.add_argument("-k", type=int, choices=range(0, 4), help="only this degree")
    s.add_argument("--check", action="store_true", help="compare with the file's expectations")
    s.set_defaults(func=cmd_homology)

    s = sub.add_parser("decide", help="decide realizability of a named knot")
    s.add_argument("file")
    s.add_argument("--knot", required=True)
    s.add_argument("--cross-check", action="store_true", help="also verify via preferred framings")
    s.add_argument("--json", action="store_true", help="machine-readable output")
    s.add_argument("--check", action="store_true", help="compare with the file's expected verdict")
    s.set_defaults(func=cmd_decide)

    s = sub.add_parser("exterior", help="knot exterior, meridian, longitude and preferred offsets")
    s.add_argument("file")
    s.add_argument("--knot", required=True)
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_exterior)

    s = sub.add_parser("generate", help="write a catalog model")
    s.add_argument("family", choices=catalog.FAMILIES)
    s.add_argument("--genus", type=int, default=2)
    s.add_argument("--p", type=int, default=3)
    s.add_argument("--q", type=int, default=1)
    s.add_argument("--max-power", type=int, default=3, help="largest |n| for core_power:n knots")
    s.add_argument("--knot", action="append", help="knot to include (repeatable; default all)")
    s.add_argument("-o", "--output", required=True, help="output path, or - for stdout")
    s.set_defaults(func=cmd_generate)

    s = sub.add_parser("framing", help="framing-class arithmetic")
    fs = s.add_subparsers(dest="op", required=True)
    t = fs.add_parser("twist")
    t.add_argument("c", type=_bit)
    t.add_argument("n", type=int)
    t = fs.add_parser("cable")
    t.add_argument("c", type=_bit)
    t = fs.add_parser("extend")
    t.add_argument("--kappa", required=True, help="mod-2 class as bits, e.g. '1,0,1' (empty for dim 0)")
    t.add_argument("--c", type=_bit, default=1)
    s.set_defaults(func=cmd_framing)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_PARSE if e.code else EXIT_OK
    try:
        return args.func(args)
    except _Fail as e:
        print(f"error: {e}", file=sys.stderr)
        return e.code
    except KnotError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
