"""Command line entry points: repl, check, auto, serve."""

from __future__ import annotations

import argparse
import sys

from . import gentzen, kernel, shell
from .environment import TheoremStore


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(prog="ndkernel", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_repl = sub.add_parser("repl", help="interactive proof shell")
    p_repl.add_argument("--env", help="theorem file to load on startup")

    p_check = sub.add_parser("check", help="replay every theorem log in a theory directory")
    p_check.add_argument("theory_dir", help="directory of theorem files")
    p_check.add_argument("names", nargs="*", help="theorem names (default: all files with a log)")

    p_auto = sub.add_parser("auto", help="prove an intuitionistic propositional formula")
    p_auto.add_argument("formula")

    p_serve = sub.add_parser("serve", help="run the JSON session service")
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--port", type=int, default=8457)
    p_serve.add_argument("--store", help="writable theory directory", default=None)

    args = parser.parse_args(argv)

    if args.command == "repl":
        shell.repl(env_file=args.env)
        return 0

    if args.command == "check":
        return cmd_check(args.theory_dir, args.names)

    if args.command == "auto":
        return cmd_auto(args.formula)

    if args.command == "serve":
        from .service import serve

        store = shell.default_store([args.store]) if args.store else None
        serve(args.host, args.port, store)
        return 0

    return 2


def cmd_check(theory_dir: str, names: list[str]) -> int:
    store = TheoremStore([theory_dir])
    if not names:
        names = [n for n in store.names() if store.read(n).get("log")]
    report = kernel.check_theory(store, names)
    for item in report.items:
        detail = f" ({item.detail})" if item.detail else ""
        print(f"{item.name}: {item.status}{detail}")
    print("PASS" if report.ok else "FAIL")
    return 0 if report.ok else 1


def cmd_auto(formula: str) -> int:
    from .syntax import LexError, ParseError

    try:
        result = gentzen.auto(formula)
    except (gentzen.GentzenError, ParseError, LexError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if not result.proved:
        print("no intuitionistic proof")
        return 1
    for i, step in enumerate(result.history_strings()):
        print(f"{i + 1}. {step}")
    print()
    for line in gentzen.format_reconstruction(gentzen.reconstruct(result.history, result.goal)):
        print(line)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
