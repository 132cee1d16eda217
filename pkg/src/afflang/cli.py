"""Command-line entry point: ``afflang COMMAND [options]``.

Exit codes:

    0   success
    1   type error, or a failing verify suite
    2   BOTTOM (denote) or OUT_OF_FUEL (run, trace)
    64  usage error
    65  parse error
    66  input file not found
"""
from __future__ import annotations

import argparse
import json
import sys

from . import __version__
from .denotation import BOTTOM, UNITS, denote_term, sem_elems
from .interpreter import (
    DEFAULT_FUEL, Configuration, OutOfFuel, Stuck, Terminated, format_configuration, run,
    trace, trace_records,
)
from .library import find_corpus_file
from .oracle import SUITES, GenConfig, run_suites
from .parser import ParseError, SourceProgram, parse_program, parse_type
from .printer import print_type, print_value
from .syntax import context_problem, format_context
from .typecheck import StoreMismatch, TypingError, check_configuration, check_term, value_problem

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_UNDEFINED = 2
EXIT_USAGE = 64
EXIT_PARSE = 65
EXIT_NOINPUT = 66

DEFAULT_SIZE_BOUND = 12


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--fuel", type=int, default=DEFAULT_FUEL, help="step budget (default %(default)s)")
    common.add_argument("--seed", type=int, default=0, help="random seed for verify (default 0)")
    common.add_argument("--size-bound", type=int, default=DEFAULT_SIZE_BOUND,
                        help="largest value size, in nodes (default %(default)s)")
    common.add_argument("--format", choices=("text", "records"), default="text",
                        help="plain text or one JSON record per line")

    p = _Parser(prog="afflang", description="Affine first-order language toolkit.")
    p.add_argument("--version", action="version", version=f"afflang {__version__}")
    sub = p.add_subparsers(dest="command", metavar="COMMAND", parser_class=_Parser)
    sub.required = True

    def command(name, help_text):
        return sub.add_parser(name, parents=[common], help=help_text, description=help_text)

    command("check", "typecheck a program").add_argument("file", help="source file, or - for stdin")
    command("run", "execute a program").add_argument("file")
    command("trace", "print every configuration of an execution").add_argument("file")
    den = command("denote", "evaluate the denotation of a program")
    den.add_argument("file")
    den.add_argument("--unit", choices=UNITS, default="steps",
                     help="what one unit of fuel pays for (default %(default)s)")
    ver = command("verify", "run property suites")
    ver.add_argument("--suite", action="append", choices=sorted(SUITES), metavar="NAME",
                     help="suite to run, repeatable (default: all); one of " + ", ".join(SUITES))
    ver.add_argument("--instances", type=int, help="override the instance count of every suite")
    enum = command("enumerate", "list the values of a closed type")
    enum.add_argument("type", help="type expression, e.g. 'mu X. I + X'")
    enum.add_argument("--file", help="take type and atom declarations from this program")
    return p


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, encoding="utf-8") as f:
            return f.read()
    except FileNotFoundError:
        bundled = find_corpus_file(path)
        if bundled is None:
            raise
        return bundled


def _load(path: str) -> SourceProgram:
    text = _read(path)
    try:
        return parse_program(text)
    except ParseError as e:
        e.filename = path
        raise


def _configuration(p: SourceProgram):
    """Output context of the configuration, or a TypingError."""
    missing = [x for x in p.context if x not in p.store]
    if missing:
        raise StoreMismatch(f"input {', '.join(missing)} has no value")
    _, sigma = check_configuration(p.term, p.store, p.context, p.atoms)
    return sigma


def _print_store(store, sigma, p: SourceProgram, fmt: str, extra=None) -> None:
    # printed in output-context order so run and denote agree line for line
    abbrevs = p.nullary_abbreviations()
    names = [x for x in sigma if x in store]
    if fmt == "records":
        rec = {"store": {x: print_value(store[x], abbrevs) for x in names}}
        rec.update(extra or {})
        print(json.dumps(rec))
        return
    if not names:
        print("{}")
    for x in names:
        print(f"{x} = {print_value(store[x], abbrevs)}")


def cmd_check(args) -> int:
    p = _load(args.file)
    why = context_problem(p.context, p.atoms)
    if why is not None:
        raise StoreMismatch(f"ill-formed input declaration {why}")
    for x, v in p.store.items():
        why = value_problem(v, p.context[x], p.atoms)
        if why is not None:
            raise StoreMismatch(f"input {x}: {why}")
    sigma = check_term(p.context, p.term, p.atoms)
    if args.format == "records":
        print(json.dumps({"ok": True, "input": {x: print_type(a) for x, a in p.context.items()},
                          "output": {x: print_type(a) for x, a in sigma.items()}}))
    else:
        print(f"ok: {format_context(p.context)} -> {format_context(sigma)}")
    return EXIT_OK


def cmd_run(args) -> int:
    p = _load(args.file)
    sigma = _configuration(p)
    r = run(Configuration(p.term, p.store), args.fuel)
    if isinstance(r, Terminated):
        _print_store(r.store, sigma, p, args.format, {"status": "terminated", "steps": r.steps})
        return EXIT_OK
    if isinstance(r, OutOfFuel):
        print(json.dumps({"status": "OUT_OF_FUEL", "steps": r.steps}) if args.format == "records"
              else "OUT_OF_FUEL")
        return EXIT_UNDEFINED
    assert isinstance(r, Stuck)
    print(f"stuck after {r.steps} steps: {r.reason}", file=sys.stderr)
    return EXIT_FAILED


def cmd_trace(args) -> int:
    p = _load(args.file)
    _configuration(p)
    configs = trace(Configuration(p.term, p.store), args.fuel)
    abbrevs = p.nullary_abbreviations()
    if args.format == "records":
        for line in trace_records(configs, abbrevs):
            print(line)
    else:
        for c in configs:
            print(format_configuration(c, abbrevs))
    return EXIT_OK if configs[-1].is_terminal() else EXIT_UNDEFINED


def cmd_denote(args) -> int:
    p = _load(args.file)
    sigma = _configuration(p)
    den = denote_term(p.context, p.term, p.atoms)
    out = den(p.store, args.fuel, args.unit)
    if out is BOTTOM:
        print(json.dumps({"status": "BOTTOM"}) if args.format == "records" else "BOTTOM")
        return EXIT_UNDEFINED
    _print_store(out, sigma, p, args.format, {"status": "defined"})
    return EXIT_OK


def cmd_verify(args) -> int:
    instances = {}
    if args.instances is not None:
        if args.instances < 1:
            raise UsageError("--instances must be positive")
        instances = {name: args.instances for name in SUITES}
    try:
        cfg = GenConfig(seed=args.seed, size_bound=args.size_bound, fuel=args.fuel, instances=instances)
    except ValueError as e:
        raise UsageError(str(e))
    reports = run_suites(args.suite, cfg)
    for r in reports:
        if args.format == "records":
            for line in r.json_lines():
                print(line)
            print(json.dumps({"summary": r.summary()}, sort_keys=True))
        else:
            print(r.text())
    failed = [r.name for r in reports if not r.passed]
    if args.format == "text":
        print(f"{len(reports) - len(failed)}/{len(reports)} suites passed")
    return EXIT_FAILED if failed else EXIT_OK


def cmd_enumerate(args) -> int:
    abbrevs, atoms = {}, {}
    if args.file:
        p = _load(args.file)
        abbrevs, atoms = p.abbreviations, p.atoms
    try:
        a = parse_type(args.type, abbrevs, atoms)
    except ParseError as e:
        e.filename = "<type>"
        raise
    if a.free_vars:
        raise UsageError(f"type {a} is not closed")
    if args.size_bound < 1:
        raise UsageError("--size-bound must be positive")
    names = {n: ab.body for n, ab in abbrevs.items() if not ab.params}
    for v in sem_elems(a, args.size_bound, atoms):
        text = print_value(v, names)
        print(json.dumps({"type": print_type(a, names), "value": text}) if args.format == "records" else text)
    return EXIT_OK


COMMANDS = {
    "check": cmd_check,
    "run": cmd_run,
    "trace": cmd_trace,
    "denote": cmd_denote,
    "verify": cmd_verify,
    "enumerate": cmd_enumerate,
}


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        if args.fuel < 0:
            raise UsageError("--fuel must be non-negative")
        return COMMANDS[args.command](args)
    except SystemExit as e:  # --help and --version
        return e.code or EXIT_OK
    except UsageError as e:
        print(e, file=sys.stderr)
        return EXIT_USAGE
    except ParseError as e:
        print(f"{getattr(e, 'filename', '<input>')}:{e}", file=sys.stderr)
        return EXIT_PARSE
    except TypingError as e:
        where = getattr(args, "file", None) or "<input>"
        sep = ":" if e.pos is not None else ": "
        print(f"{where}{sep}{e}", file=sys.stderr)
        return EXIT_FAILED
    except FileNotFoundError as e:
        print(f"afflang: {e.filename}: no such file", file=sys.stderr)
        return EXIT_NOINPUT


if __name__ == "__main__":
    sys.exit(main())
