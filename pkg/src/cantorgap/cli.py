"""Command line interface.

Exit codes: 0 success or certified, 1 I/O or parse error, 2 computation
error (budget, tail bound, lost containment), 3 certification negative.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import jsonschema

from . import errors
from .gap import CERTIFIED, RobustVerdict, intersect_constructive, intersect_oracle, robust_check
from .invariants import InvariantReport, thickness, well_balanced
from .render import render_svg
from .specfile import (CERTIFICATE_SCHEMA, REPORT_SCHEMA, grid_spec, load_spec, spec_to_json,
                       thickness_drift)

EXIT_OK, EXIT_IO, EXIT_COMPUTE, EXIT_NEGATIVE = 0, 1, 2, 3


def _write(text: str, out) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def _dump(obj: dict, schema: dict, out) -> None:
    jsonschema.validate(obj, schema)
    _write(json.dumps(obj, indent=1) + "\n", out)


def _report(spec, args) -> InvariantReport:
    return thickness(spec, depth=args.depth, h=args.grid)


def _print_report(rep: InvariantReport) -> None:
    for name in InvariantReport.FIELDS:
        iv = getattr(rep, "lambda_" if name == "lambda" else name)
        print(f"{name:10s} [{iv.lo:.12g}, {iv.hi:.12g}]")
    print(f"depth_used {rep.depth_used}")
    print(f"grid_used  {rep.grid_used:.6g}")


def cmd_grid_example(args) -> int:
    spec = grid_spec(args.n, args.r)
    _write(json.dumps(spec_to_json(spec), indent=1) + "\n", args.out)
    return EXIT_OK


def cmd_report(args) -> int:
    rep = _report(load_spec(args.spec), args)
    _print_report(rep)
    if args.json:
        _dump(rep.to_json(), REPORT_SCHEMA, args.json)
    return EXIT_OK


def cmd_check(args) -> int:
    K, L = load_spec(args.spec_k), load_spec(args.spec_l)
    rK = _report(K, args)
    rL = rK if args.spec_k == args.spec_l else _report(L, args)
    wb = well_balanced(rK, rL)
    prod = rK.thickness * rL.thickness
    verdict = robust_check(K, L, (rK, rL))
    print(f"well_balanced {wb.value}")
    print(f"t(K)*t(L)     [{prod.lo:.12g}, {prod.hi:.12g}]")
    print(f"robust        {verdict.value}")
    return EXIT_OK if verdict is RobustVerdict.ROBUST else EXIT_NEGATIVE


def cmd_intersect(args) -> int:
    K, L = load_spec(args.spec_k), load_spec(args.spec_l)
    if args.method == "oracle":
        cert = intersect_oracle(K, L, args.depth)
    else:
        rK = _report(K, argparse.Namespace(depth=1, grid=args.grid))
        rL = rK if args.spec_k == args.spec_l else _report(L, argparse.Namespace(depth=1, grid=args.grid))
        try:
            cert = intersect_constructive(K, L, (rK, rL), args.depth)
        except errors.HypothesisViolated as e:
            print(f"hypothesis not satisfied: {e}", file=sys.stderr)
            return EXIT_NEGATIVE
    print(f"{cert.method}: {cert.verdict} at depth {cert.depth}, final diameter {cert.final_diameter:.6g}")
    if args.out:
        _dump(cert.to_json(), CERTIFICATE_SCHEMA, args.out)
    return EXIT_OK if cert.verdict == CERTIFIED else EXIT_NEGATIVE


def cmd_perturb(args) -> int:
    spec = load_spec(args.spec)
    s = thickness_drift(spec, args.eta, args.samples, args.seed, depth=args.depth, h=args.grid)
    summary = {"eta": s.eta, "samples": s.samples, "drift_mid": s.drift_mid,
               "drift_endpoints": s.drift_endpoints, "rejected": s.rejected}
    if args.json:
        _write(json.dumps(summary, indent=1) + "\n", args.json)
    print(f"eta={s.eta:g} samples={s.samples} rejected={s.rejected}")
    print(f"max |t'.mid - t.mid|  {s.drift_mid:.6g}")
    print(f"max endpoint drift    {s.drift_endpoints:.6g}")
    return EXIT_OK


def cmd_render(args) -> int:
    _write(render_svg(load_spec(args.spec), args.depth), args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="cantorgap", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, depth=3):
        sp.add_argument("--depth", type=int, default=depth)
        sp.add_argument("--grid", type=float, default=None,
                        help="grid pitch for gap enclosures (default: inscribed diameter / 512)")

    g = sub.add_parser("grid-example", help="write the regular n x n grid system")
    g.add_argument("n", type=int)
    g.add_argument("r", type=float)
    g.add_argument("-o", "--out")
    g.set_defaults(func=cmd_grid_example)

    r = sub.add_parser("report", help="certified invariants of one system")
    r.add_argument("spec")
    common(r)
    r.add_argument("--json", help="also write the report as JSON")
    r.set_defaults(func=cmd_report)

    c = sub.add_parser("check", help="well-balanced and robust-intersection test")
    c.add_argument("spec_k")
    c.add_argument("spec_l")
    common(c, depth=1)
    c.set_defaults(func=cmd_check)

    i = sub.add_parser("intersect", help="certificate that the two limit sets meet")
    i.add_argument("spec_k")
    i.add_argument("spec_l")
    common(i, depth=10)
    i.add_argument("--method", choices=("constructive", "oracle"), default="constructive")
    i.add_argument("-o", "--out")
    i.set_defaults(func=cmd_intersect)

    t = sub.add_parser("perturb", help="thickness drift under random perturbations")
    t.add_argument("spec")
    t.add_argument("--eta", type=float, required=True)
    t.add_argument("--samples", type=int, default=20)
    t.add_argument("--seed", type=int, default=0)
    common(t, depth=1)
    t.add_argument("--json")
    t.set_defaults(func=cmd_perturb)

    v = sub.add_parser("render", help="SVG of the depth-n pieces")
    v.add_argument("spec")
    v.add_argument("--depth", type=int, default=1)
    v.add_argument("-o", "--out")
    v.set_defaults(func=cmd_render)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (OSError, json.JSONDecodeError, errors.InvalidSpec, errors.InvalidParams,
            errors.DegenerateInput) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_IO
    except errors.CantorGapError as e:
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_COMPUTE


if __name__ == "__main__":
    sys.exit(main())
