"""Batch front end: scenario ingestion, computation commands, invariant runner.

Exit codes: 0 success, 1 assertion/property failure, 2 invalid input.
Reports are deterministic; with --json they include the canonical scenario
echo and its digest, so re-running on the echo reproduces the report byte
for byte.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from fractions import Fraction

from . import __version__
from .characters import artin_conductor, pair
from .conductors import conductor, module_character, weil_restriction
from .errors import CheckFailure, InputError
from .exact import CycloNum
from .groups import conjugacy_classes
from .ramification import (
    artin_character,
    bisection,
    disc_valuation,
    i_gamma,
    restrict_ramdata,
)
from .scenario import (
    load_scenario,
    parse_rational,
    parse_series_expression,
    scenario_digest,
)
from .series import (
    SeriesRingSpec,
    dilatation_member,
    endo_apply,
    endo_to_scalar,
    gauss_valuation,
    mult_endo,
    weierstrass_divide,
)
from .verify import run_catalog_suites, run_random_bisection


def _decimal(value, digits):
    z = value.approx() if isinstance(value, CycloNum) else complex(float(value))
    return f"{z.real:.{digits}f}{z.imag:+.{digits}f}i"


def _exact(value):
    if isinstance(value, CycloNum):
        ok, q = value.rational_part()
        return str(q) if ok else str(value)
    return str(value)


def _report(command, scenario=None):
    report = {"tool_version": __version__, "command": command}
    if scenario is not None:
        report["scenario"] = scenario.canonical
        report["scenario_digest"] = scenario_digest(scenario.canonical)
    report["tables"] = {}
    report["checks"] = []
    return report


def _emit(report, args):
    if args.json:
        print(json.dumps(report, sort_keys=True, indent=2, ensure_ascii=False))
    else:
        for name, table in report["tables"].items():
            if not table:
                continue
            print(f"[{name}]")
            headers = []
            for row in table:
                for key in row:
                    if key not in headers:
                        headers.append(key)
            widths = [
                max(len(h), *(len(str(row.get(h, ""))) for row in table))
                for h in headers
            ]
            print("  " + "  ".join(h.ljust(w) for h, w in zip(headers, widths)))
            for row in table:
                print(
                    "  "
                    + "  ".join(
                        str(row.get(h, "")).ljust(w) for h, w in zip(headers, widths)
                    )
                )
        for check in report["checks"]:
            status = "pass" if check["status"] == "pass" else "FAIL"
            extra = ""
            if check.get("lhs") is not None:
                extra = f"  lhs={check['lhs']}"
                if check.get("rhs") is not None:
                    extra += f" rhs={check['rhs']}"
            print(f"check {check['name']}: {status}{extra}")
    if args.csv:
        tables = [t for t in report["tables"].values() if t]
        if tables:
            headers = []
            for row in tables[0]:
                for key in row:
                    if key not in headers:
                        headers.append(key)
            with open(args.csv, "w", newline="", encoding="utf-8") as fh:
                writer = csv.DictWriter(fh, fieldnames=headers, restval="")
                writer.writeheader()
                for row in tables[0]:
                    writer.writerow(row)


def _check(report, name, ok, lhs=None, rhs=None):
    report["checks"].append(
        {
            "name": name,
            "status": "pass" if ok else "fail",
            "lhs": lhs,
            "rhs": rhs,
        }
    )
    return ok


def cmd_bisect(args):
    scenario = load_scenario(args.file)
    rd = scenario.ramdata
    report = _report("bisect", scenario)
    ba = bisection(rd)
    a = artin_character(rd)
    class_of = {}
    for cls in conjugacy_classes(rd.group):
        for s in cls:
            class_of[s] = cls[0]
    rows = []
    for s in range(rd.group.order):
        rows.append(
            {
                "element": s,
                "class": class_of[s],
                "i_gamma": i_gamma(rd, s) if s else None,
                "artin": _exact(a.values[s]),
                "bA": _exact(ba.values[s]),
                "bA_decimal": _decimal(ba.values[s], args.decimal_digits),
                "provenance": "bisection",
            }
        )
    report["tables"]["bisection"] = rows
    identity_ok = ba.values[0] + ba.values[0].conjugate() == a.values[0]
    _check(report, "bisection-identity-at-identity", identity_ok)
    all_ok = all(
        ba.values[s] + ba.values[s].conjugate() == a.values[s]
        for s in range(rd.group.order)
    )
    _check(report, "bisection-identity", all_ok)
    _emit(report, args)
    return 0 if all_ok else 1


def cmd_conduct(args):
    scenario = load_scenario(args.file)
    rd = scenario.ramdata
    report = _report("conduct", scenario)
    rows = []
    failed = False
    ba = bisection(rd)
    for name, module in scenario.modules.items():
        chi = module_character(module)
        raw = pair(ba, chi)
        try:
            c = conductor(module, rd)
            value = str(c.value)
            ok = True
        except CheckFailure as exc:
            value = f"invalid ({exc})"
            ok = False
            failed = True
        artin = artin_conductor(rd, chi)
        rows.append(
            {
                "module": name,
                "rank": module.rank,
                "conductor": value,
                "artin_conductor": _exact(artin),
                "provenance": "pairing",
            }
        )
        _check(report, f"conductor-rational[{name}]", ok, lhs=_exact(raw))
    report["tables"]["conductors"] = rows
    _emit(report, args)
    return 1 if failed else 0


def cmd_weil(args):
    scenario = load_scenario(args.file)
    rd = scenario.ramdata
    report = _report("weil", scenario)
    rows = []
    all_ok = True
    for module, sub, name in scenario.weil:
        induced = weil_restriction(module, sub)
        direct = conductor(induced, rd)
        sub_rd = restrict_ramdata(rd, sub)
        inner = conductor(module, sub_rd)
        v = disc_valuation(rd, sub)
        formula = inner.value + Fraction(v * module.rank, 2)
        ok = direct.value == formula
        all_ok = all_ok and ok
        rows.append(
            {
                "module": name,
                "subgroup": ",".join(map(str, sub.elements)),
                "rank": module.rank,
                "disc_valuation": v,
                "direct": str(direct.value),
                "induction": str(formula),
                "match": ok,
                "provenance": "pairing/induction",
            }
        )
        _check(
            report,
            f"induction-consistency[{name}|{','.join(map(str, sub.elements))}]",
            ok,
            lhs=str(direct.value),
            rhs=str(formula),
        )
    report["tables"]["weil"] = rows
    _emit(report, args)
    return 0 if all_ok else 1


def cmd_verify(args):
    report = _report("verify")
    results = []
    if args.random:
        seed, count = args.random
        results += run_random_bisection(int(seed), int(count))
    if args.catalog or not args.random:
        results = run_catalog_suites() + results
    passed = sum(1 for _, ok, _ in results if ok)
    failed = len(results) - passed
    for name, ok, detail in results:
        if not ok:
            _check(report, name, False, lhs=detail or None)
    report["tables"]["summary"] = [
        {"checks": len(results), "passed": passed, "failed": failed}
    ]
    _emit(report, args)
    if not args.json:
        print(f"verify: {passed}/{len(results)} checks passed")
    return 0 if failed == 0 else 1


def cmd_series(args):
    report = _report("series")
    rows = []
    code = 0
    if args.sub == "gauss":
        f = parse_series_expression(args.expr, args.p, args.degree_cap)
        v = gauss_valuation(f)
        rows.append(
            {
                "op": "gauss",
                "input": args.expr,
                "valuation": "inf" if v == float("inf") else v,
                "provenance": "gauss-norm",
            }
        )
    elif args.sub == "wdiv":
        f = parse_series_expression(args.f, args.p, args.degree_cap)
        ring = f.ring
        g = parse_series_expression(args.g, args.p, args.degree_cap, ring=ring)
        q, r, certified = weierstrass_divide(g, f, args.z, val_bound=args.val_bound)
        rows.append(
            {
                "op": "wdiv",
                "q": str(q),
                "r": str(r),
                "certified_valuation": "exact"
                if certified == float("inf")
                else certified,
                "provenance": "weierstrass-division",
            }
        )
    elif args.sub == "endo":
        ring = SeriesRingSpec(args.p, s_vars=("T",), degree_cap=args.degree_cap)
        scalars = [parse_rational(s) for s in args.scalars]
        if args.mode == "eval":
            for r in scalars:
                rows.append(
                    {
                        "op": "endo-eval",
                        "scalar": str(r),
                        "series": str(mult_endo(r, ring)),
                        "provenance": "formal-multiplicative-group",
                    }
                )
        else:
            series = mult_endo(scalars[-1], ring)
            for r in reversed(scalars[:-1]):
                series = endo_apply(r, series)
            scalar = endo_to_scalar(series)
            rows.append(
                {
                    "op": "endo-compose",
                    "scalars": "*".join(map(str, scalars)),
                    "scalar": str(scalar),
                    "provenance": "formal-multiplicative-group",
                }
            )
    elif args.sub == "dilate":
        f = parse_series_expression(args.expr, args.p, args.degree_cap)
        member = dilatation_member(f, args.n)
        rows.append(
            {
                "op": "dilate",
                "input": args.expr,
                "n": args.n,
                "member": member,
                "provenance": "dilatation-lattice",
            }
        )
    elif args.sub == "run":
        scenario = load_scenario(args.file)
        report = _report("series", scenario)
        cap = scenario.degree_cap
        for req in scenario.series:
            if req["op"] == "gauss":
                f = parse_series_expression(req["expr"], scenario.prime, cap)
                v = gauss_valuation(f)
                rows.append(
                    {
                        "op": "gauss",
                        "input": req["expr"],
                        "valuation": "inf" if v == float("inf") else v,
                        "provenance": "gauss-norm",
                    }
                )
            elif req["op"] == "wdiv":
                f = parse_series_expression(req["f"], scenario.prime, cap)
                g = parse_series_expression(req["g"], scenario.prime, cap, ring=f.ring)
                z = req.get("z", "Z")
                q, r, certified = weierstrass_divide(g, f, z)
                rows.append(
                    {
                        "op": "wdiv",
                        "q": str(q),
                        "r": str(r),
                        "certified_valuation": "exact"
                        if certified == float("inf")
                        else certified,
                        "provenance": "weierstrass-division",
                    }
                )
            elif req["op"] == "dilate":
                f = parse_series_expression(req["expr"], scenario.prime, cap)
                rows.append(
                    {
                        "op": "dilate",
                        "input": req["expr"],
                        "n": req["n"],
                        "member": dilatation_member(f, req["n"]),
                        "provenance": "dilatation-lattice",
                    }
                )
            elif req["op"] == "endo":
                ring = SeriesRingSpec(scenario.prime, s_vars=("T",), degree_cap=cap)
                scalars = [parse_rational(s) for s in req["scalars"]]
                series = mult_endo(scalars[-1], ring)
                for r in reversed(scalars[:-1]):
                    series = endo_apply(r, series)
                rows.append(
                    {
                        "op": "endo-compose",
                        "scalars": "*".join(map(str, scalars)),
                        "scalar": str(endo_to_scalar(series)),
                        "provenance": "formal-multiplicative-group",
                    }
                )
    report["tables"]["series"] = rows
    _emit(report, args)
    return code


def build_parser():
    parser = argparse.ArgumentParser(
        prog="ramcond",
        description="Exact ramification invariants and base change conductors.",
    )
    parser.add_argument("--json", action="store_true", help="machine-readable output")
    parser.add_argument(
        "--decimal-digits", type=int, default=6, help="digits for display decimals"
    )
    parser.add_argument(
        "--degree-cap", type=int, default=16, help="series truncation degree"
    )
    parser.add_argument("--csv", help="write the first table as CSV to this path")
    sub = parser.add_subparsers(dest="command", required=True)

    for name, fn in (("bisect", cmd_bisect), ("conduct", cmd_conduct), ("weil", cmd_weil)):
        p = sub.add_parser(name, help=f"run {name} on a scenario file")
        p.add_argument("file")
        p.set_defaults(fn=fn)

    pv = sub.add_parser("verify", help="run the invariant suites")
    pv.add_argument("--catalog", action="store_true", help="run the built-in catalog")
    pv.add_argument(
        "--random",
        nargs=2,
        metavar=("SEED", "N"),
        help="run N randomized bisection checks",
    )
    pv.set_defaults(fn=cmd_verify)

    ps = sub.add_parser("series", help="series kernel operations")
    ss = ps.add_subparsers(dest="sub", required=True)
    g = ss.add_parser("gauss")
    g.add_argument("expr")
    g.add_argument("--p", type=int, required=True)
    w = ss.add_parser("wdiv")
    w.add_argument("--g", required=True)
    w.add_argument("--f", required=True)
    w.add_argument("--z", default="Z")
    w.add_argument("--p", type=int, required=True)
    w.add_argument("--val-bound", type=int, default=32, dest="val_bound")
    e = ss.add_parser("endo")
    e.add_argument("mode", choices=["compose", "eval"])
    e.add_argument("scalars", nargs="+")
    e.add_argument("--p", type=int, required=True)
    d = ss.add_parser("dilate")
    d.add_argument("expr")
    d.add_argument("n", type=int)
    d.add_argument("--p", type=int, required=True)
    r = ss.add_parser("run")
    r.add_argument("file")
    for q in (g, w, e, d, r):
        q.set_defaults(fn=cmd_series)
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        return args.fn(args)
    except InputError as exc:
        print(f"error: invalid input: {exc}", file=sys.stderr)
        return 2
    except CheckFailure as exc:
        print(f"error: check failed: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
