"""Command line: ``cohoma run``, ``cohoma nf``, ``cohoma preset``."""
from __future__ import annotations

import argparse
import sys

from . import words
from .dsl import parse_expr
from .errors import CohomaError, ScriptError
from .session import Session, execute, render_json, render_text


def _run(args) -> int:
    try:
        with open(args.file, encoding="utf-8") as fh:
            text = fh.read()
    except (OSError, UnicodeDecodeError) as e:
        print(f"error: cannot read {args.file}: {e}", file=sys.stderr)
        return 2
    reports, code = execute(text)
    render = render_json if args.json else render_text
    sys.stdout.write(render(reports, deterministic=args.deterministic))
    return code


def _nf(args) -> int:
    try:
        nf = words.reduce(args.word, args.n)
    except Exception as e:  # malformed word
        print(f"error: {e}", file=sys.stderr)
        return 2
    print(nf.render())
    return 0


def _preset(args) -> int:
    sess = Session()
    try:
        ctx = sess.preset_of(parse_expr(args.name))
    except (CohomaError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    print(f"{ctx.name}: {len(ctx.alg.gens)} generators, convention {ctx.alg.convention}")
    if args.list_generators:
        for line in ctx.list_generators():
            print(f"  {line}")
    if ctx.ders:
        print("derivations: " + ", ".join(f"{k} {tuple(D.degree)}" for k, D in ctx.ders.items()))
    if ctx.polys:
        print("polynomials: " + ", ".join(ctx.polys))
    if ctx.suites:
        print("suites: " + ", ".join(ctx.suites))
    return 0


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(prog="cohoma", description="exact bigraded algebra checks")
    sub = ap.add_subparsers(dest="cmd", required=True)
    r = sub.add_parser("run", help="run a .cohoma script")
    r.add_argument("file")
    r.add_argument("--json", action="store_true", help="JSON report (schema 1)")
    r.add_argument("--deterministic", action="store_true", help="omit timings")
    r.set_defaults(fn=_run)
    n = sub.add_parser("nf", help="QK normal form of a word expression")
    n.add_argument("word")
    n.add_argument("--n", type=int, default=None, help="truncate with K^(n+1) = 0")
    n.set_defaults(fn=_nf)
    p = sub.add_parser("preset", help="describe a preset, e.g. 'weil(su2)'")
    p.add_argument("name")
    p.add_argument("--list-generators", action="store_true")
    p.set_defaults(fn=_preset)
    args = ap.parse_args(argv)
    try:
        return args.fn(args)
    except ScriptError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
