"""Command-line front end.

Exit codes: 0 clean, 1 warnings, 2 errors, 64 usage error, 66 unreadable input.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from typing import Optional

from . import horn
from . import syntax as S
from .driver import (
    CheckConfig, Diagnostic, SYNTAX_ERROR, TYPE_ERROR,
    check_program, exit_status, load_prelude, run_match,
)
from .search import DEFAULT_FUEL, PatternTypeError, SplitPolicy
from .tycore import DeclError, Trail, build_env

EX_USAGE = 64
EX_NOINPUT = 66


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise _UsageError(message)


def _positive(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return value


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="gadtcheck", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    common = _Parser(add_help=False)
    common.add_argument("--prelude", help="declarations loaded before FILE "
                                          "(default: the bundled prelude)")

    c = sub.add_parser("check", parents=[common], help="report match diagnostics")
    c.add_argument("file")
    c.add_argument("--split", choices=[s.value for s in SplitPolicy], default="never",
                   help="splitting for the exhaustiveness check of multi-arm matches")
    c.add_argument("--fuel", type=_positive, default=DEFAULT_FUEL)
    c.add_argument("--oracle-check", action="store_true",
                   help="verify every emptiness verdict with the Horn-clause oracle")
    c.add_argument("--oracle-depth", type=_positive, default=6)
    c.add_argument("--ocaml-compat-messages", action="store_true")
    c.add_argument("--output", choices=["human", "machine"], default="human")

    cl = sub.add_parser("clauses", parents=[common], help="print declarations as Horn clauses")
    cl.add_argument("file")
    cl.add_argument("--decl", action="append", default=None, metavar="NAME",
                    help="only this declaration (repeatable)")
    cl.add_argument("--with-prelude", action="store_true")

    o = sub.add_parser("oracle", parents=[common], help="search for an inhabitant of a type")
    o.add_argument("file")
    o.add_argument("--type", required=True, dest="type_")
    o.add_argument("--depth", type=_positive, default=6)
    o.add_argument("--pattern", default=None)

    b = sub.add_parser("bench", parents=[common], help="time each check")
    b.add_argument("file")
    b.add_argument("--split", choices=[s.value for s in SplitPolicy], default="never")
    b.add_argument("--fuel", type=_positive, default=DEFAULT_FUEL)
    return p


def _read(path: str) -> str:
    with open(path, encoding="utf-8") as f:
        return f.read()


def _format_human(path: str, d: Diagnostic, compat: bool) -> str:
    return f"{path}:{d.line}:{d.col}: {d.severity}: {d.message(compat)}"


def _format_machine(path: str, d: Diagnostic) -> str:
    rec = {"file": path}
    rec.update(d.to_record())
    return json.dumps(rec)


def _load(args):
    text = _read(args.file)
    prelude = load_prelude(_read(args.prelude) if args.prelude else None)
    return S.parse_program(text), prelude


def _cmd_check(args, out) -> int:
    prog, prelude = _load(args)
    config = CheckConfig(split_policy=SplitPolicy(args.split), fuel=args.fuel,
                         oracle_depth=args.oracle_depth, oracle_check=args.oracle_check)
    result = check_program(prog, config, prelude)
    for d in result.diagnostics:
        if args.output == "machine":
            print(_format_machine(args.file, d), file=out)
        else:
            print(_format_human(args.file, d, args.ocaml_compat_messages), file=out)
    return exit_status(result.diagnostics)


def _cmd_clauses(args, out) -> int:
    prog, prelude = _load(args)
    env = build_env(prog, prelude)
    if args.decl:
        unknown = [n for n in args.decl if n not in env.decls]
        if unknown:
            raise DeclError(f"unknown declaration {unknown[0]}")
        names = args.decl
    elif args.with_prelude:
        names = None
    else:
        names = list(env.own_decls)
    out.write(horn.format_clauses(horn.encode(env, names)))
    return 0


def _cmd_oracle(args, out) -> int:
    prog, prelude = _load(args)
    env = build_env(prog, prelude)
    ty = env.convert(S.parse_type(args.type_), {}, Trail())
    pattern = S.parse_pattern(args.pattern) if args.pattern else None
    res = horn.sld_inhabited(ty, args.depth, horn.program_clauses(env), pattern=pattern)
    print(format_resolution(res), file=out)
    return 0


def format_resolution(res) -> str:
    if isinstance(res, horn.Witness):
        return f"witness (size {res.size}): {S.print_pattern(res.value)}"
    if isinstance(res, horn.NoProofWithinDepth):
        scope = "resolution tree exhausted" if res.complete else "depth bound reached"
        return f"no proof within depth {res.depth} ({scope})"
    return f"depth exhausted at bound {res.depth} after {res.steps} steps"


def _cmd_bench(args, out) -> int:
    prog, prelude = _load(args)
    env = build_env(prog, prelude)
    config = CheckConfig(split_policy=SplitPolicy(args.split), fuel=args.fuel)
    for i, c in enumerate(prog.checks, 1):
        start = time.perf_counter()
        report = run_match(c, env, config, i)
        elapsed = time.perf_counter() - start
        kinds = ",".join(d.kind for d in report.diagnostics) or "clean"
        print(f"check {i} (line {c.line}): {elapsed * 1000:.1f} ms, "
              f"leaves={report.stats.leaves} splits={report.stats.splits} [{kinds}]", file=out)
    return 0


def main(argv: Optional[list] = None, out=None) -> int:
    out = out if out is not None else sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError:
        return EX_USAGE
    handler = {"check": _cmd_check, "clauses": _cmd_clauses,
               "oracle": _cmd_oracle, "bench": _cmd_bench}[args.command]
    try:
        return handler(args, out)
    except OSError as e:
        print(f"gadtcheck: {e}", file=sys.stderr)
        return EX_NOINPUT
    except S.ParseError as e:
        d = Diagnostic(SYNTAX_ERROR, e.line, e.col, detail=str(e))
        _print_error(args, d, out)
        return 2
    except (DeclError, PatternTypeError) as e:
        d = Diagnostic(TYPE_ERROR, getattr(e, "line", 0), getattr(e, "col", 0), detail=str(e))
        _print_error(args, d, out)
        return 2


def _print_error(args, d: Diagnostic, out) -> None:
    if getattr(args, "output", "human") == "machine":
        print(_format_machine(args.file, d), file=out)
    else:
        print(f"{args.file}:{d.line}:{d.col}: error: {d.message()}", file=out)


def main_exit() -> None:
    sys.exit(main())


if __name__ == "__main__":
    main_exit()
