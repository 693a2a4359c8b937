"""Command-line interpreter and REPL.

Exit status: 0 for a normal form, 1 for lexical/parse/scope/sort errors,
2 when the step budget ran out, 3 when --oracle-check found a mismatch.
Results go to stdout (pretty text, or the JSON tree with --format json);
step counts, classifications and diagnostics go to stderr.
"""

from __future__ import annotations

import argparse
import json
import sys

from .engine import DEFAULT_BUDGET, DEFAULT_STRATEGY, NormalResult, classify, format_trace, normalize
from .gates import prelude_env
from .oracle import check
from .printer import pretty, to_json
from .surface import LangError, load_program
from .terms import Term

EXIT_OK = 0
EXIT_FRONTEND = 1
EXIT_BUDGET = 2
EXIT_ORACLE = 3


def _build_argparser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="linlam",
        description="Normalize terms of the linear-algebraic lambda calculus.",
    )
    mode = ap.add_mutually_exclusive_group()
    mode.add_argument("--eval", metavar="TERM", help="evaluate one term and exit")
    mode.add_argument("--file", metavar="PATH", help="load a .lal file; evaluate its bare term if present")
    ap.add_argument("--trace", action="store_true", help="print every rewrite step")
    ap.add_argument("--max-steps", type=int, default=DEFAULT_BUDGET, metavar="N")
    ap.add_argument(
        "--strategy",
        default=DEFAULT_STRATEGY,
        metavar="S",
        help="innermost (default), outermost, or random:<seed>",
    )
    ap.add_argument("--format", choices=("text", "json"), default="text")
    ap.add_argument("--oracle-check", action="store_true", help="cross-check the result against the dense semantics")
    ap.add_argument("--no-prelude", action="store_true", help="start without the built-in gate definitions")
    return ap


def _print_result(result: NormalResult, fmt: str) -> None:
    if fmt == "json":
        print(json.dumps(to_json(result.term)))
    else:
        print(pretty(result.term))


def _describe(result: NormalResult) -> str:
    shape = classify(result.term, check_normal=False) if result.is_normal else None
    kind = shape.kind if shape else "budget exceeded"
    return f"[{result.steps} steps, {kind}]"


def _evaluate(term: Term, args) -> int:
    result = normalize(term, strategy=args.strategy, budget=args.max_steps, trace=args.trace)
    if args.trace:
        text = format_trace(result)
        if text:
            print(text)
    _print_result(result, args.format)
    print(_describe(result), file=sys.stderr)
    if not result.is_normal:
        return EXIT_BUDGET
    if args.oracle_check:
        verdict = check(term, result.term)
        print(f"[oracle: {verdict.status}{' - ' + verdict.reason if verdict.reason else ''}]", file=sys.stderr)
        if verdict.status == "fail":
            return EXIT_ORACLE
    return EXIT_OK


def _repl(env: dict[str, Term], args) -> int:
    print("linlam repl; :quit to leave, :trace on/off to toggle tracing", file=sys.stderr)
    trace = args.trace
    while True:
        try:
            line = input("> ")
        except (EOFError, KeyboardInterrupt):
            print(file=sys.stderr)
            return EXIT_OK
        stripped = line.strip()
        if not stripped:
            continue
        if stripped == ":quit":
            return EXIT_OK
        if stripped.startswith(":trace"):
            word = stripped.removeprefix(":trace").strip()
            if word in ("on", "off"):
                trace = word == "on"
            else:
                print("usage: :trace on|off", file=sys.stderr)
            continue
        try:
            env, main = load_program(line, env)
        except LangError as exc:
            print(f"error: {exc}", file=sys.stderr)
            continue
        if main is None:
            continue
        try:
            local = argparse.Namespace(**{**vars(args), "trace": trace})
            _evaluate(main, local)
        except ValueError as exc:
            print(f"error: {exc}", file=sys.stderr)


def main(argv: list[str] | None = None) -> int:
    args = _build_argparser().parse_args(argv)
    if args.max_steps < 1:
        print("error: --max-steps must be at least 1", file=sys.stderr)
        return EXIT_FRONTEND
    env: dict[str, Term] = {} if args.no_prelude else prelude_env()
    try:
        if args.eval is not None:
            _, main_term = load_program(args.eval, env)
            if main_term is None:
                print("error: nothing to evaluate", file=sys.stderr)
                return EXIT_FRONTEND
            return _evaluate(main_term, args)
        if args.file is not None:
            with open(args.file, encoding="utf-8") as fh:
                text = fh.read()
            _, main_term = load_program(text, env)
            if main_term is None:
                print(f"loaded {args.file}", file=sys.stderr)
                return EXIT_OK
            return _evaluate(main_term, args)
    except LangError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FRONTEND
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FRONTEND
    return _repl(env, args)


if __name__ == "__main__":
    sys.exit(main())
