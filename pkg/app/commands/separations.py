import argparse

from pydantic import TypeAdapter

from app.commands.spec_input import read_matroid
from app.models import SeparationOut
from app.services.report_engine import separations_report

_list_adapter = TypeAdapter(list[SeparationOut])


def register(subparsers, common: argparse.ArgumentParser) -> None:
    parser = subparsers.add_parser("separations", parents=[common], help="list the exact k-separations")
    parser.add_argument("spec", nargs="?", default="-", help="JSON spec file, or - for stdin")
    parser.add_argument("--k", type=int, default=2, help="separation order (default 2)")
    parser.add_argument("--good-only", action="store_true", help="only separations nested with every other")
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace) -> int:
    report = separations_report(read_matroid(args.spec), args.k, args.good_only)
    print(_list_adapter.dump_json(report, indent=2).decode("utf-8"))
    return 0
