import argparse

from app.commands.spec_input import read_matroid
from app.services.report_engine import decompose, render_dot


def register(subparsers, common: argparse.ArgumentParser) -> None:
    parser = subparsers.add_parser("decompose", parents=[common], help="canonical tree-decomposition")
    parser.add_argument("spec", nargs="?", default="-", help="JSON spec file, or - for stdin")
    parser.add_argument("--format", choices=("json", "dot"), default="json")
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace) -> int:
    report = decompose(read_matroid(args.spec))
    if args.format == "dot":
        print(render_dot(report), end="")
    else:
        print(report.model_dump_json(indent=2))
    return 0
