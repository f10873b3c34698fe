"""Command-line front end.

Exit codes: 0 success, 1 verification failure, 2 invalid input,
3 parameters the scheme does not support (no cross intersection number).
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from crdcache import baselines
from crdcache.construct import ConstructionParams, construct, design_json, predicted_params
from crdcache.design import check_maximal_point_count, crd_profile, dumps, find_resolution, load_json
from crdcache.errors import AccessDegreeUnsupportedError, CrdError, InvalidParamsError
from crdcache.scheme import (
    build_topology,
    generate_plan,
    place,
    plan_from_json,
    plan_to_json,
    sample_demands,
)
from crdcache.verify import payload_trial, verify_plan

EXIT_OK, EXIT_FAILED, EXIT_INVALID, EXIT_UNSUPPORTED = 0, 1, 2, 3


class UsageError(Exception):
    pass


def parse_int_list(text: str) -> list[int]:
    """``"2..5,8"`` -> ``[2, 3, 4, 5, 8]`` (ranges inclusive)."""
    out = []
    try:
        for part in text.split(","):
            part = part.strip()
            if ".." in part:
                lo, hi = part.split("..", 1)
                lo, hi = int(lo), int(hi)
                if hi < lo:
                    raise argparse.ArgumentTypeError(f"empty range {part!r}")
                out.extend(range(lo, hi + 1))
            else:
                out.append(int(part))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected integers, ranges a..b or comma lists, got {text!r}") from None
    return out


def _read_json(path: str) -> dict:
    try:
        text = sys.stdin.read() if path == "-" else Path(path).read_text(encoding="utf-8")
        doc = json.loads(text)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read {path}: {exc}") from None
    if not isinstance(doc, dict):
        raise UsageError(f"{path}: expected a JSON object")
    return doc


def _emit(args, text: str) -> None:
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _require_json(args) -> None:
    if args.format != "json":
        raise UsageError(f"{args.command} only writes JSON")


def _resolution_from_args(args):
    if args.design:
        design, res = load_json(_read_json(args.design))
        if res is None:
            res = find_resolution(design)
            if res is None:
                raise InvalidParamsError("design is not resolvable")
        return res
    if args.q is None or args.m is None:
        raise UsageError("give --design FILE or --q and --m")
    _, res = construct(ConstructionParams(args.q, args.m, args.t))
    return res


def cmd_construct(args) -> int:
    _require_json(args)
    params = ConstructionParams(args.q, args.m, args.t)
    _, res = construct(params)
    _emit(args, dumps(design_json(params, res)))
    return EXIT_OK


def cmd_profile(args) -> int:
    _require_json(args)
    doc = _read_json(args.design_file)
    design, res = load_json(doc)
    source = "given"
    if res is None:
        res = find_resolution(design)
        source = "found"
    out = {"v": design.v, "b": design.b, "k": design.k}
    if res is None:
        out.update(resolvable=False, is_crd=False, is_maximal=False, mu={})
    else:
        profile = crd_profile(res)
        out.update(
            resolvable=True,
            resolution_source=source,
            r=res.r,
            b_r=res.b_r,
            classes=[list(c) for c in res.classes],
            mu={str(i): val for i, val in profile.mu.items()},
            is_crd=profile.is_crd,
            is_maximal=profile.is_maximal,
            max_point_count_check=check_maximal_point_count(res, profile),
            note="profile describes this resolution only; other resolutions may differ",
        )
    if doc.get("family") == "qary" and all(isinstance(doc.get(key), int) for key in "qmt"):
        pred = predicted_params(ConstructionParams(doc["q"], doc["m"], doc["t"]))
        out["predicted_mu"] = None if pred.mu is None else {str(i): val for i, val in pred.mu.items()}
    _emit(args, dumps(out))
    return EXIT_OK


def _fresh_plan(args):
    res = _resolution_from_args(args)
    topology = build_topology(res, args.z)
    demands = sample_demands(topology.K, args.N, args.seed)
    plan = generate_plan(topology, demands)
    return plan, topology, demands


def _frac(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def _summary(plan, topology, demands) -> dict:
    design = topology.res.design
    R = plan.rate
    per_user = R / topology.K
    return {
        "K": topology.K,
        "caches": design.b,
        "M_over_N": _frac(Fraction(design.k, design.v)),
        "z": topology.z,
        "F": design.v,
        "R": _frac(R),
        "R_per_K": _frac(per_user),
        "gain": 2**topology.z,
        "transmissions": len(plan.transmissions),
        "distinct_demands": demands.distinct,
    }


def cmd_scheme(args) -> int:
    _require_json(args)
    plan, topology, demands = _fresh_plan(args)
    doc = plan_to_json(plan, topology, demands)
    summary = _summary(plan, topology, demands)
    doc = {"summary": summary, **doc}
    _emit(args, dumps(doc))
    if args.out:
        print(json.dumps(summary), file=sys.stderr)
    return EXIT_OK


def cmd_verify(args) -> int:
    _require_json(args)
    if args.plan_file:
        plan, topology, demands = plan_from_json(_read_json(args.plan_file))
    else:
        plan, topology, demands = _fresh_plan(args)
    placement = place(topology, demands.n_files)
    report = verify_plan(plan, placement, topology, demands)
    out = report.to_json()
    ok = report.all_decodable
    if args.payload:
        payload_ok = payload_trial(plan, placement, topology, demands, seed=args.seed)
        out["payload"] = {"seed": args.seed, "all_decodable": payload_ok, "agrees": payload_ok == ok}
        ok = ok and payload_ok
    _emit(args, dumps(out))
    return EXIT_OK if ok else EXIT_FAILED


def cmd_compare(args) -> int:
    schemes = [s.strip() for s in args.schemes.split(",") if s.strip()]
    unknown = [s for s in schemes if s not in baselines.SCHEMES]
    if unknown:
        raise UsageError(f"unknown schemes {unknown}; choose from {', '.join(baselines.SCHEMES)}")
    req = baselines.SweepRequest(schemes, q=args.q or [2], m=args.m, z=args.z, mprime=args.mprime, n=args.n)
    rows = baselines.comparison_table(req)
    if args.format == "json":
        _emit(args, dumps({"rows": [baselines.row_record(r) for r in rows]}))
    else:
        _emit(args, baselines.to_csv(rows))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="output path (default: stdout)")
    common.add_argument("--format", choices=["json", "csv"], default=None)
    common.add_argument("--seed", type=int, default=0, help="seed for demand sampling and payloads")

    parser = argparse.ArgumentParser(prog="crdcache", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("construct", parents=[common], help="build the q-ary design")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--t", type=int, default=1)
    p.set_defaults(func=cmd_construct, default_format="json")

    p = sub.add_parser("profile", parents=[common], help="resolution, cross intersection numbers, CRD flags")
    p.add_argument("design_file", help="design JSON ('-' for stdin)")
    p.set_defaults(func=cmd_profile, default_format="json")

    def scheme_inputs(p):
        p.add_argument("--design", help="design JSON file instead of --q/--m/--t")
        p.add_argument("--q", type=int)
        p.add_argument("--m", type=int)
        p.add_argument("--t", type=int, default=1)
        p.add_argument("--z", type=int)
        p.add_argument("--N", type=int, default=None, help="number of files (default: K)")

    p = sub.add_parser("scheme", parents=[common], help="placement and XOR delivery plan")
    scheme_inputs(p)
    p.set_defaults(func=cmd_scheme, default_format="json")

    p = sub.add_parser("verify", parents=[common], help="decode every user; exit 0 iff all decode")
    p.add_argument("plan_file", nargs="?", help="plan JSON from 'scheme' (omit to build one inline)")
    scheme_inputs(p)
    p.add_argument("--payload", action="store_true", help="also replay with random 64-bit payloads")
    p.set_defaults(func=cmd_verify, default_format="json")

    p = sub.add_parser("compare", parents=[common], help="closed-form comparison sweep")
    p.add_argument("--schemes", required=True, help=f"comma list from: {', '.join(baselines.SCHEMES)}")
    p.add_argument("--q", type=parse_int_list)
    p.add_argument("--m", type=parse_int_list)
    p.add_argument("--z", type=parse_int_list)
    p.add_argument("--mprime", type=parse_int_list)
    p.add_argument("--n", type=parse_int_list, help="Hadamard order parameter")
    p.set_defaults(func=cmd_compare, default_format="csv")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INVALID if exc.code else EXIT_OK
    if args.format is None:
        args.format = args.default_format
    if args.command in ("scheme", "verify") and not getattr(args, "plan_file", None) and args.z is None:
        print("error: --z is required", file=sys.stderr)
        return EXIT_INVALID
    try:
        return args.func(args)
    except AccessDegreeUnsupportedError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_UNSUPPORTED
    except (CrdError, UsageError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
