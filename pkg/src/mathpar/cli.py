"""Command line entry point: REPL by default, --eval for batch, --serve for HTTP."""

import argparse
import json
import sys

from . import runtime
from .errors import MathparError


def _print_outcome(outcome, session, dump_plots=False):
    for result in outcome.results:
        print(result.plain)
    if outcome.transcript:
        print(outcome.transcript)
    for ref in outcome.plot_refs:
        if dump_plots:
            print(json.dumps(session.plots[ref]))
        else:
            print(f"[{ref}]")
    if outcome.error:
        print(f"error at statement {outcome.error['statement']}: "
              f"{outcome.error['message']}", file=sys.stderr)
        return 1
    return 0


def repl(session):
    print("mathpar (blank line or Ctrl-D to quit)")
    while True:
        try:
            line = input("> ")
        except EOFError:
            print()
            return 0
        if not line.strip():
            return 0
        if not line.rstrip().endswith((";", "}")):
            line += ";"
        try:
            outcome = runtime.evaluate(session, line)
        except MathparError as exc:
            print(f"error: {exc}", file=sys.stderr)
            continue
        _print_outcome(outcome, session)


def main(argv=None):
    parser = argparse.ArgumentParser(prog="mathpar",
                                     description="Mathpar language kernel")
    parser.add_argument("--eval", metavar="FILE",
                        help="run a source file and print its results")
    parser.add_argument("--serve", metavar="PORT", type=int,
                        help="start the HTTP service on the given port")
    parser.add_argument("--dump-plot", action="store_true",
                        help="print plot documents as JSON in batch mode")
    parser.add_argument("--files-dir", metavar="DIR",
                        help="directory backing fromFile/toFile in batch mode")
    args = parser.parse_args(argv)

    if args.serve is not None:
        import uvicorn
        from .service import create_app
        uvicorn.run(create_app(), host="127.0.0.1", port=args.serve)
        return 0

    session = runtime.Session(files_dir=args.files_dir)
    if args.eval is not None:
        try:
            source = open(args.eval, encoding="utf-8").read()
        except OSError as exc:
            print(f"cannot read {args.eval}: {exc}", file=sys.stderr)
            return 2
        try:
            outcome = runtime.evaluate(session, source)
        except MathparError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 1
        return _print_outcome(outcome, session, dump_plots=args.dump_plot)

    return repl(session)


if __name__ == "__main__":
    sys.exit(main())
