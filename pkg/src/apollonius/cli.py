"""Command-line interface: ``apollonius <command> [options]``.

Exit codes: 0 success, 1 verification failure, 2 usage or input error.
JSON goes to stdout, diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import sys
from typing import List, Optional

from . import meshout
from .errors import ApolloniusError
from .geom import Tolerances, make_ellipse, make_ellipsoid
from .normals2d import normal_feet_2d
from .normals3d import normal_feet_3d
from .structure import classify
from .verify import SUITES

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _floats(text: str, name: str, sizes=(2, 3)) -> List[float]:
    try:
        vals = [float(v) for v in text.split(",")]
    except ValueError:
        raise UsageError(f"--{name} expects comma-separated numbers, got {text!r}") from None
    if len(vals) not in sizes:
        raise UsageError(f"--{name} expects {' or '.join(map(str, sizes))} values, got {len(vals)}")
    return vals


def _res(text: str):
    try:
        u, v = (int(s) for s in text.lower().split("x"))
    except ValueError:
        raise UsageError(f"--res expects NxM, got {text!r}") from None
    return u, v


def _tol(args) -> Tolerances:
    return Tolerances.from_env().with_overrides(eps_root=args.tol_root, eps_mult=args.tol_mult)


def _frame(E) -> dict:
    if hasattr(E, "permutation"):
        return {"canonical_axes": list(E.axes), "permutation": list(E.permutation)}
    return {"canonical_axes": list(E.axes), "permutation": [1, 0] if E.swapped else [0, 1]}


def _ellipsoid(args):
    return make_ellipsoid(*_floats(args.axes, "axes", (3,)))


def cmd_normals(args) -> int:
    axes = _floats(args.axes, "axes")
    point = _floats(args.point, "point")
    if len(axes) != len(point):
        raise UsageError(f"{len(axes)} axes need a point with {len(axes)} coordinates")
    tol = _tol(args)
    if len(axes) == 2:
        E = make_ellipse(*axes)
        fan = normal_feet_2d(E, E.to_canonical(point), tol)
    else:
        E = make_ellipsoid(*axes)
        fan = normal_feet_3d(E, E.to_canonical(point), tol)
    # feet stay in the canonical frame; "permutation" maps them back
    extra = _frame(E)
    extra["point_canonical"] = list(E.to_canonical(point))
    _output(meshout.json_text(meshout.fan_dict(fan, extra)), args.json_out)
    return EXIT_OK


def cmd_classify(args) -> int:
    E = _ellipsoid(args)
    tc = classify(E)
    out = {"class": tc.theorem2_class, "case": tc.fig11_case, "predicates": tc.predicates}
    out.update(_frame(E))
    _output(meshout.json_text(out), args.json_out)
    return EXIT_OK


def cmd_mesh(args) -> int:
    E = _ellipsoid(args)
    u, v = _res(args.res)
    mesh = meshout.sample_caustic_mesh(E, args.sheet, u, v, _tol(args))
    if args.out:
        meshout.write_obj(mesh, args.out)
        summary = {"out": args.out, "vertices": len(mesh.vertices),
                   "triangles": len(mesh.triangles), "sheet": mesh.sheet.value}
        summary.update(_frame(E))
        sys.stdout.write(meshout.json_text(summary))
    else:
        meshout.write_obj(mesh, sys.stdout)
    return EXIT_OK


def cmd_curve(args) -> int:
    E = _ellipsoid(args)
    poly = meshout.sample_curve(E, args.curve, args.samples, _tol(args))
    if args.out:
        meshout.write_csv(poly, args.out)
        summary = {"out": args.out, "curve": poly.curve_id, "samples": len(poly.points)}
        summary.update(_frame(E))
        sys.stdout.write(meshout.json_text(summary))
    else:
        meshout.write_csv(poly, sys.stdout)
    return EXIT_OK


def cmd_verify(args) -> int:
    names = list(SUITES) if args.suite == "all" else [args.suite]
    tol = _tol(args)
    ok = True
    reports = []
    for name in names:
        fn, default_n = SUITES[name]
        rep = fn(args.n if args.n is not None else default_n, args.seed, tol)
        print(f"{rep.name}: {rep.passed}/{rep.total} pass ({rep.seconds:.2f} s)", file=sys.stderr)
        reports.append(rep.to_json())
        ok &= rep.ok
    _output(meshout.json_text({"reports": reports, "ok": ok}), args.json_out)
    return EXIT_OK if ok else EXIT_FAIL


def _output(text: str, path: Optional[str]):
    if path:
        meshout.write_text(text, path)
    else:
        sys.stdout.write(text)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="apollonius",
                                description="Normals to ellipses and ellipsoids, caustics and their intersections.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, point=False):
        sp.add_argument("--axes", required=True, help="semi-axes, comma separated, any order")
        if point:
            sp.add_argument("--point", required=True, help="query point, comma separated")
        sp.add_argument("--tol-root", type=float, default=None, help="root tolerance override")
        sp.add_argument("--tol-mult", type=float, default=None, help="multiplicity tolerance override")

    sp = sub.add_parser("normals", help="feet of the normals through a point")
    common(sp, point=True)
    sp.add_argument("--json-out", help="write JSON here instead of stdout")
    sp.set_defaults(func=cmd_normals)

    sp = sub.add_parser("classify", help="topology case of ellipsoid versus caustic")
    common(sp)
    sp.add_argument("--json-out")
    sp.set_defaults(func=cmd_classify)

    sp = sub.add_parser("mesh", help="OBJ mesh of one caustic sheet")
    common(sp)
    sp.add_argument("--sheet", choices=("min", "max"), default="max")
    sp.add_argument("--res", default="64x32", help="grid resolution NxM")
    sp.add_argument("--out", help="OBJ path (stdout if omitted)")
    sp.set_defaults(func=cmd_mesh)

    sp = sub.add_parser("curve", help="CSV polyline of a named curve")
    common(sp)
    sp.add_argument("--curve", required=True, help="lemma2:1..9, nodal, intersection:min|max")
    sp.add_argument("--samples", type=int, default=128)
    sp.add_argument("--out", help="CSV path (stdout if omitted)")
    sp.set_defaults(func=cmd_curve)

    sp = sub.add_parser("verify", help="run seeded oracle suites")
    sp.add_argument("--suite", choices=tuple(SUITES) + ("all",), default="all")
    sp.add_argument("--n", type=int, default=None, help="cases per suite")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--tol-root", type=float, default=None)
    sp.add_argument("--tol-mult", type=float, default=None)
    sp.add_argument("--json-out")
    sp.set_defaults(func=cmd_verify)
    return p


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, ApolloniusError, ValueError) as exc:
        print(f"apollonius {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
