"""Command line front end: ``python main.py <command> [flags]``.

Each command prints a short human summary followed by a single JSON line.
"""
import argparse
import json
import logging
import sys
from typing import List, Optional

from pydantic import ValidationError

from app.commands import bvp_commands, special_commands
from app.config import configure_logging
from app.utils.errors import KPrabhakarError

logger = logging.getLogger("app.main")


class CommandParser(argparse.ArgumentParser):
    """Usage errors exit with status 1."""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def build_parser() -> CommandParser:
    parser = CommandParser(
        prog="kprab",
        description="k-Prabhakar calculus, Green's function and Hartman-Wintner type bounds",
    )
    parser.add_argument(
        "--log-level",
        default=None,
        choices=["DEBUG", "INFO", "WARNING", "ERROR"],
        help="override KPRAB_LOG_LEVEL",
    )
    subparsers = parser.add_subparsers(dest="command", required=True, parser_class=CommandParser)

    # Include command groups
    special_commands.register(subparsers)
    bvp_commands.register(subparsers)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    configure_logging(args.log_level)
    try:
        return args.handler(args)
    except KPrabhakarError as exc:
        print(f"error: {exc.detail}", file=sys.stderr)
        return exc.exit_code
    except ValidationError as exc:
        print(f"error: invalid input\n{exc}", file=sys.stderr)
        return 1
    except (OSError, json.JSONDecodeError, OverflowError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
