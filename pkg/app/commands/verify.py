import argparse
import logging

from app.commands.spec_input import read_matroid
from app.errors import LemmaFailure
from app.services.lemma_suite import SUITES, SuiteReport, run_corpus, run_suite

logger = logging.getLogger(__name__)


def register(subparsers, common: argparse.ArgumentParser) -> None:
    parser = subparsers.add_parser("verify", parents=[common], help="run the verification suites")
    parser.add_argument("spec", nargs="?", default="-", help="JSON spec file, or - for stdin")
    parser.add_argument("--suite", choices=SUITES, default="all")
    parser.add_argument("--corpus", action="store_true", help="run over the built-in fixture corpus instead")
    parser.set_defaults(handler=run)


def _print_report(report: SuiteReport) -> None:
    for result in report.results:
        if result.skipped:
            print(f"SKIP {report.fixture} / {result.name}: {result.skipped}")
        elif result.passed:
            print(f"PASS {report.fixture} / {result.name} ({result.checked})")
        else:
            for failure in result.failures:
                print(f"FAIL {report.fixture} / {result.name}: {failure}")


def run(args: argparse.Namespace) -> int:
    if args.corpus:
        reports = run_corpus(args.suite)
    else:
        reports = [run_suite(read_matroid(args.spec), args.suite)]
    for report in reports:
        _print_report(report)
    failed = [report.fixture for report in reports if not report.passed]
    print(f"{len(reports) - len(failed)} of {len(reports)} passed")
    if failed:
        logger.error("verification failed for %s", ", ".join(failed))
        return LemmaFailure.exit_code
    return 0
