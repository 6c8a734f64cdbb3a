import argparse
import logging

from app.commands.spec_input import read_matroid
from app.errors import Disconnected
from app.services.report_engine import info_report

logger = logging.getLogger(__name__)


def register(subparsers, common: argparse.ArgumentParser) -> None:
    parser = subparsers.add_parser("info", parents=[common], help="size, rank, circuits and connectivity")
    parser.add_argument("spec", nargs="?", default="-", help="JSON spec file, or - for stdin")
    parser.add_argument("--format", choices=("text", "json"), default="text")
    parser.set_defaults(handler=run)


def _flag(value: bool) -> str:
    return "true" if value else "false"


def run(args: argparse.Namespace) -> int:
    report = info_report(read_matroid(args.spec))
    if args.format == "json":
        print(report.model_dump_json(indent=2))
    else:
        print(f"elements: {report.elements}")
        print(f"rank: {report.rank}")
        print(f"circuits: {report.circuits}")
        print(f"connected: {_flag(report.connected)}")
        print(f"3-connected: {_flag(report.three_connected)}")
    if not report.connected:
        logger.warning("the matroid is not connected")
        return Disconnected.exit_code
    return 0
