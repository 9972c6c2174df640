"""Command-line driver: ``polygraph3 {check,normalize,match,verify} FILE ...``."""
from __future__ import annotations

import argparse
import sys
from typing import Optional, Sequence

from .checker import CheckError, check_polygraph, parse_mode
from .circuit import CircuitError, to_dot
from .formats import PolyError, PolyFile, parse, parse_term, read_poly, render_circuit
from .interpretation import InterpretationError
from .rewrite import RewriteError, find_matches, normalize


class UsageError(Exception):
    pass


def _load(path: str) -> PolyFile:
    text, _ = read_poly(path)
    return parse(text)


def _occurrence_line(i: int, occ) -> str:
    return (f"#{i} p={occ.left_wires} q={occ.right_wires} "
            f"above: {render_circuit(occ.context_above)}  "
            f"below: {render_circuit(occ.context_below)}")


def cmd_check(args) -> int:
    pf = _load(args.file)
    interp = "none"
    if pf.interps:
        missing = [g.name for g in pf.signature if g.name not in pf.assignment()]
        interp = "total" if not missing else f"partial (missing {', '.join(missing)})"
    print(f"{args.file}: ok")
    print(f"  generators: {len(pf.signature)}")
    print(f"  rules: {len(pf.rules)}")
    print(f"  interpretation: {interp}")
    if pf.currents_min is not None:
        print(f"  currents min: {pf.currents_min}")
    for w in pf.warnings:
        print(f"  warning: {w}")
    return 0


def cmd_normalize(args) -> int:
    pf = _load(args.file)
    f = parse_term(args.term, pf.signature)
    trace = normalize(f, pf.polygraph(), args.budget)
    print(f"start: {render_circuit(trace.start)}")
    for i, step in enumerate(trace.steps, 1):
        occ = step.occurrence
        print(f"step {i}: {step.rule} at p={occ.left_wires} q={occ.right_wires} "
              f"-> {render_circuit(step.result)}")
    print(f"status: {trace.status.value} after {len(trace.steps)} step(s)")
    if args.emit_dot:
        sys.stdout.write(to_dot(trace.final))
    return 0


def cmd_match(args) -> int:
    pf = _load(args.file)
    f = parse_term(args.term, pf.signature)
    rule = pf.polygraph().rule(args.rule)
    occs = find_matches(f, rule)
    print(f"{len(occs)} occurrence(s) of {rule.name} in {render_circuit(f)}")
    for i, occ in enumerate(occs):
        print(_occurrence_line(i, occ))
    return 0


def cmd_verify(args) -> int:
    pf = _load(args.file)
    mode = parse_mode(args.mode)
    if args.jobs < 1:
        raise UsageError("--jobs must be at least 1")
    report = check_polygraph(pf.polygraph(), pf.assignment(), mode, jobs=args.jobs)
    if args.format == "records":
        sys.stdout.write(report.render_records())
    else:
        sys.stdout.write(report.render_text())
    return 0 if report.ok else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="polygraph3",
        description="Rewrite circuits modulo isotopy and check termination "
                    "certificates given by current/heat interpretations.")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("check", help="parse a .poly file and report what it contains")
    c.add_argument("file")
    c.set_defaults(run=cmd_check)

    n = sub.add_parser("normalize", help="rewrite a circuit until no rule applies")
    n.add_argument("file")
    n.add_argument("--term", required=True, help="circuit term, e.g. '(mu * id:1) ; mu'")
    n.add_argument("--budget", type=int, default=1000, help="maximum number of steps")
    n.add_argument("--emit-dot", action="store_true", help="also print the normal form as dot")
    n.set_defaults(run=cmd_normalize)

    m = sub.add_parser("match", help="list the occurrences of a rule in a circuit")
    m.add_argument("file")
    m.add_argument("--term", required=True)
    m.add_argument("--rule", required=True)
    m.set_defaults(run=cmd_match)

    v = sub.add_parser("verify", help="check every rule against the interpretation")
    v.add_argument("file")
    v.add_argument("--mode", default="grid:4", help="grid:B, affine or affine:B")
    v.add_argument("--format", choices=("text", "records"), default="text")
    v.add_argument("--jobs", type=int, default=1, help="worker processes for grid scans")
    v.set_defaults(run=cmd_verify)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if getattr(args, "budget", 0) < 0:
            raise UsageError("--budget must be a natural")
        return args.run(args)
    except (PolyError, CircuitError, RewriteError, InterpretationError, CheckError,
            UsageError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
