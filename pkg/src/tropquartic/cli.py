"""Command-line entry point.

Exit codes: 0 success, 2 a theorem-level check failed, 3 bad input or a
resource limit.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .bitangent import TheoremViolation
from .census import (RunConfig, run_census, summarize, summary_table, work_units)
from .hyperelliptic import HyperellipticCurveFound
from .lattice import (InvalidDegree, NonRegularTriangulation, ParseError, ResourceLimit,
                      enumerate_unimodular_triangulations, generic_heights, parse_heights,
                      parse_triangulation, regular_heights, s3_orbits)
from .render import render_svg
from .report import curve_report
from .theta import ThetaContractError

EXIT_OK, EXIT_VIOLATION, EXIT_INPUT = 0, 2, 3


class CliError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on usage errors; 2 is reserved for violations here
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w") as f:
            f.write(text)


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=1) + "\n"


def cmd_enumerate(args) -> int:
    ts = enumerate_unimodular_triangulations(args.degree)
    orbits = s3_orbits(ts)
    result = {"schema": "tropquartic.enumeration/1", "degree": args.degree,
              "triangulations": len(ts), "orbits": len(orbits)}
    if args.checks == "all":
        regular = {}
        for t in ts:
            try:
                regular_heights(t)
                regular[t.key()] = True
            except NonRegularTriangulation:
                regular[t.key()] = False
        result["regular"] = sum(regular.values())
        result["regular_orbits"] = sum(regular[o.representative.key()] for o in orbits)
        result["non_regular"] = [t.serialize() for t in ts if not regular[t.key()]]
    if args.out:
        _emit("".join(t.serialize() + "\n" for t in ts), args.out)
    if args.format == "json":
        sys.stdout.write(_dump(result))
    else:
        line = f"{result['triangulations']} unimodular triangulations"
        if "regular" in result:
            line += f" ({result['regular']} regular)"
        line += f", {result['orbits']} orbits"
        if "regular_orbits" in result:
            line += f" ({result['regular_orbits']} regular)"
        sys.stdout.write(line + "\n")
    return EXIT_OK


def _config(args) -> RunConfig:
    return RunConfig(degree=args.degree, heights=args.heights, seed=args.seed, jobs=args.jobs,
                     out=args.out, checks=args.checks, scope=args.scope, limit=args.limit)


def cmd_census(args) -> int:
    config = _config(args)
    units = work_units(config)
    records = []
    sink = None
    if config.out:
        os.makedirs(config.out, exist_ok=True)
        sink = open(os.path.join(config.out, "records.jsonl"), "w")
    try:
        for r in run_census(config, units):
            records.append(r)
            line = r.dumps() + "\n"
            if sink is not None:
                sink.write(line)
            elif args.format == "json":
                sys.stdout.write(line)
    finally:
        if sink is not None:
            sink.close()
    s = summarize(records, config)
    if config.out:
        with open(os.path.join(config.out, "summary.json"), "w") as f:
            f.write(_dump(s.to_json()))
    if args.format == "json":
        sys.stdout.write(s.dumps() + "\n")
    else:
        sys.stdout.write(summary_table(s))
    return EXIT_VIOLATION if s.violations else EXIT_OK


def _read(path: str) -> str:
    with open(path) as f:
        return f.read()


def cmd_analyze(args) -> int:
    try:
        t = parse_triangulation(_read(args.triangulation))
    except ParseError as exc:
        raise CliError(f"{args.triangulation}: {exc}") from None
    if args.heights_file:
        try:
            h = parse_heights(_read(args.heights_file))
        except ParseError as exc:
            raise CliError(f"{args.heights_file}: {exc}") from None
    elif args.heights == "generic":
        h = generic_heights(t, args.seed)
    else:
        h = regular_heights(t)
    report = curve_report(t, h, families=args.checks == "all")
    if args.format == "svg":
        _emit(render_svg(report), args.out)
    elif args.format == "table":
        _emit(_report_table(report), args.out)
    else:
        _emit(_dump(report), args.out)
    return EXIT_OK


def _report_table(report: dict) -> str:
    rows = [f"type: {report['combinatorial_type']}"]
    for th in report["theta"]["characteristics"]:
        rows.append(f"theta {th['index']}: {th['category']:<8} flow {th['flow']}")
    for b in report["bitangents"]["classes"]:
        fam = " infinite" if b["infinite"] else ""
        rows.append(f"bitangent theta {b['theta']}: vertex ({b['vertex'][0]}, {b['vertex'][1]}) "
                    f"profile {tuple(b['profile'])} via {b['method']}{fam}")
    v = report["hyperelliptic"]["verdict"]
    rows.append(f"hyperelliptic: {v['hyperelliptic']} ({v['reason']})")
    return "\n".join(rows) + "\n"


def cmd_render(args) -> int:
    try:
        report = json.loads(_read(args.report))
    except json.JSONDecodeError as exc:
        raise CliError(f"{args.report}: line {exc.lineno}: {exc.msg}") from None
    if report.get("schema") != "tropquartic.report/1":
        raise CliError(f"{args.report}: not a curve report")
    _emit(render_svg(report, triangulation=not args.no_triangulation), args.out)
    return EXIT_OK


def _common(p: argparse.ArgumentParser, fmt: str = "table") -> None:
    p.add_argument("--degree", type=int, default=4)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out", default=None)
    p.add_argument("--checks", choices=("all", "fast"), default="all")
    p.add_argument("--format", choices=("json", "table", "svg"), default=fmt)


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="tropquartic",
                 description="Smooth tropical plane quartics: census and analysis.")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("enumerate", help="enumerate unimodular triangulations")
    _common(p)
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("census", help="full pipeline over S3 orbits or all triangulations")
    _common(p)
    p.add_argument("--scope", choices=("orbits", "all"), default="orbits")
    p.add_argument("--heights", choices=("canonical", "generic"), default="canonical")
    p.add_argument("--limit", type=int, default=None)
    p.set_defaults(func=cmd_census)

    p = sub.add_parser("analyze", help="deep report for one triangulation")
    _common(p, fmt="json")
    p.add_argument("triangulation")
    p.add_argument("--heights-file", default=None)
    p.add_argument("--heights", choices=("canonical", "generic"), default="canonical")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("render", help="SVG from an analyze report")
    _common(p, fmt="svg")
    p.add_argument("report")
    p.add_argument("--no-triangulation", action="store_true")
    p.set_defaults(func=cmd_render)
    return ap


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:  # usage errors and --help
        return exc.code if isinstance(exc.code, int) else EXIT_INPUT
    if args.jobs < 1:
        print("error: --jobs must be positive", file=sys.stderr)
        return EXIT_INPUT
    if args.command == "render" and args.format != "svg":
        print("error: render only produces svg", file=sys.stderr)
        return EXIT_INPUT
    try:
        return args.func(args)
    except (TheoremViolation, ThetaContractError, HyperellipticCurveFound) as exc:
        print(f"theorem violation: {exc}", file=sys.stderr)
        return EXIT_VIOLATION
    except (CliError, ParseError, InvalidDegree, ResourceLimit, NonRegularTriangulation,
            OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
