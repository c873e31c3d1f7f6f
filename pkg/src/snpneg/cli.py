"""Command line front end: ``snpneg check|negate|compile|trace|fuzz``.

Exit status: 0 success, 1 usage or input error, 2 engine disagreement,
3 SLD budget exhausted.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import compiler
from .engines import MODES, EngineModeError, run_engines
from .generate import kb_stream
from .kb import DeductiveDatabase, Interpretation, KBError, ParseError, parse_kb
from .semantics import naf_set
from .sld import BudgetExhausted
from .snp import validate

EXIT_OK, EXIT_USAGE, EXIT_DISAGREE, EXIT_BUDGET = 0, 1, 2, 3


class _Fail(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _load(path: str) -> DeductiveDatabase:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise _Fail(EXIT_USAGE, f"{path}: {exc.strerror}") from None
    try:
        return parse_kb(text)
    except ParseError as exc:
        raise _Fail(EXIT_USAGE, f"{path}: {exc}") from None


def _emit(args, text: str) -> None:
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_check(args) -> int:
    try:
        with open(args.path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise _Fail(EXIT_USAGE, f"{args.path}: {exc.strerror}") from None
    try:
        db = parse_kb(text)
    except ParseError as exc:
        definite = "no" if "negative" in exc.message or "negated" in exc.message else "unknown"
        _emit(args, f"{args.path}: {exc}\ndefinite: {definite}\n")
        return EXIT_USAGE
    if db.n == 0 and db.k == 0:
        print(f"warning: {args.path} defines an empty database", file=sys.stderr)
    system, _ = compiler.compile_kb(db)
    problems = validate(system)
    lines = [f"{db.n} variables, {db.k} rules, definite: yes"]
    lines += [f"compiled system: {p}" for p in problems]
    _emit(args, "\n".join(lines) + "\n")
    return EXIT_OK if not problems else EXIT_USAGE


def cmd_negate(args) -> int:
    db = _load(args.path)
    try:
        report = run_engines(db, args.mode, args.engine, args.budget)
    except EngineModeError as exc:
        raise _Fail(EXIT_USAGE, str(exc)) from None
    except BudgetExhausted as exc:
        raise _Fail(EXIT_BUDGET, str(exc)) from None
    if args.format == "json":
        _emit(args, json.dumps(report.to_dict(db), indent=2) + "\n")
    else:
        _emit(args, report.format(db, timings=args.timings))
    return EXIT_OK if report.agreement else EXIT_DISAGREE


def cmd_compile(args) -> int:
    db = _load(args.path)
    try:
        interp = Interpretation.from_string(args.interp) if args.interp else Interpretation.bottom(db.n)
        system, layout = compiler.compile_kb(db, interp, strict_paper=args.strict_paper)
    except KBError as exc:
        raise _Fail(EXIT_USAGE, str(exc)) from None
    if args.emit == "dot":
        _emit(args, system.to_dot(compiler.role_colors(layout)))
    else:
        doc = {
            "database": db.render(),
            "interpretation": str(interp),
            "strict_paper": args.strict_paper,
            "degree": system.m,
            "layout": layout.to_dict(db),
            "system": system.to_dict(),
        }
        _emit(args, json.dumps(doc, indent=2, ensure_ascii=False) + "\n")
    return EXIT_OK


def cmd_trace(args) -> int:
    db = _load(args.path)
    try:
        table = compiler.trace_table(db, args.direction, strict_paper=args.strict_paper, steps=args.steps)
    except compiler.CompileError as exc:
        raise _Fail(EXIT_USAGE, str(exc)) from None
    if args.format == "doc":
        _emit(args, json.dumps(table.to_dict(db), indent=2, ensure_ascii=False) + "\n")
    else:
        _emit(args, table.to_tsv(marks=not args.no_marks))
    return EXIT_OK


def cmd_fuzz(args) -> int:
    if args.n_max < 1 or args.k_max < 1 or args.count < 1:
        raise _Fail(EXIT_USAGE, "bounds must be >= 1")
    out = []
    for idx, db in enumerate(kb_stream(args.seed, args.count, args.n_max, args.k_max)):
        verdicts = []
        try:
            reports = [run_engines(db, mode, "all", args.budget) for mode in MODES]
        except BudgetExhausted as exc:
            out.append(f"#{idx}: {exc}\n{db.render()}")
            _emit(args, "".join(out))
            return EXIT_BUDGET
        for rep in reports:
            verdicts.append(rep.agreement)
        subset = naf_set(db) <= reports[0].results["operator"]
        if not (all(verdicts) and subset):
            out.append(f"#{idx}: DISAGREEMENT n={db.n} k={db.k}\n")
            out += [rep.format(db) for rep in reports]
            out.append(db.render())
            _emit(args, "".join(out))
            return EXIT_DISAGREE
        out.append(f"#{idx}: n={db.n} k={db.k} agree\n")
    out.append(f"{args.count} databases, all engines agree\n")
    _emit(args, "".join(out))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="snpneg", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--out", help="write output to FILE instead of stdout")

    c = sub.add_parser("check", help="parse and validate a database file")
    c.add_argument("path")
    common(c)
    c.set_defaults(func=cmd_check)

    n = sub.add_parser("negate", help="compute CWA or NAF negations")
    n.add_argument("path")
    n.add_argument("--mode", choices=MODES, default="naf")
    n.add_argument("--engine", choices=("operator", "sld", "snp", "all"), default="all")
    n.add_argument("--budget", type=int, default=None, help="SLD node budget")
    n.add_argument("--format", choices=("text", "json"), default="text")
    n.add_argument("--timings", action="store_true", help="print per-engine wall time")
    common(n)
    n.set_defaults(func=cmd_negate)

    k = sub.add_parser("compile", help="compile a database to an SN P system")
    k.add_argument("path")
    k.add_argument("--emit", choices=("doc", "dot"), default="doc")
    k.add_argument("--interp", help="initial interpretation as a bit string (default all zeros)")
    k.add_argument("--strict-paper", action="store_true", help="omit the sub-threshold forgetting rules")
    common(k)
    k.set_defaults(func=cmd_compile)

    t = sub.add_parser("trace", help="spike table of the compiled system")
    t.add_argument("path")
    t.add_argument("--direction", choices=("down", "up"), default="down")
    t.add_argument("--format", choices=("tsv", "doc"), default="tsv")
    t.add_argument("--steps", type=int, default=None, help="fixed number of steps instead of stopping at the limit")
    t.add_argument("--strict-paper", action="store_true")
    t.add_argument("--no-marks", action="store_true", help="omit '*' on output readings")
    common(t)
    t.set_defaults(func=cmd_trace)

    f = sub.add_parser("fuzz", help="cross-check engines on random databases")
    f.add_argument("--seed", type=int, default=1)
    f.add_argument("--count", type=int, default=100)
    f.add_argument("--n-max", type=int, default=6)
    f.add_argument("--k-max", type=int, default=10)
    f.add_argument("--budget", type=int, default=None)
    common(f)
    f.set_defaults(func=cmd_fuzz)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args)
    except _Fail as exc:
        print(f"snpneg: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
