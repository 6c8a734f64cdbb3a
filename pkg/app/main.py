"""Command-line entry point: ``python -m app.main <command> [spec]``.

Exit codes: 0 ok, 1 verification failure, 2 parse or axiom error,
3 disconnected, 4 too small, 5 over the ground-set cap.
"""
import argparse
import logging
import sys

from app.commands import decompose, info, separations, verify
from app.config import settings
from app.errors import MatroidError
from app.services.matroid_kernel import ValidationLevel

logger = logging.getLogger("app")

COMMANDS = (info, separations, decompose, verify)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--cap", type=int, help="largest ground set accepted by exhaustive operations")
    common.add_argument("--validate", choices=[level.value for level in ValidationLevel], help="axiom checks on ingestion")
    common.add_argument("--seed", type=int, help="seed for randomized verifiers")
    common.add_argument("--log-level", help="DEBUG, INFO, WARNING or ERROR")

    parser = argparse.ArgumentParser(prog="matroid-decomp", description="Canonical 2-separation decompositions of finite matroids.")
    subparsers = parser.add_subparsers(dest="command", required=True)
    for command in COMMANDS:
        command.register(subparsers, common)
    return parser


def apply_overrides(args: argparse.Namespace) -> None:
    if args.cap is not None:
        settings.GROUND_SET_CAP = args.cap
    if args.validate is not None:
        settings.CLI_VALIDATION = args.validate
    if args.seed is not None:
        settings.RANDOM_SEED = args.seed
    if args.log_level is not None:
        settings.LOG_LEVEL = args.log_level.upper()


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    apply_overrides(args)
    logging.basicConfig(stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s")
    logging.getLogger("app").setLevel(settings.LOG_LEVEL)
    try:
        return args.handler(args)
    except MatroidError as exc:
        logger.debug("command %s failed", args.command, exc_info=True)
        print(f"error: {type(exc).__name__}: {exc.detail}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
