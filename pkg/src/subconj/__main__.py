"""Main entry point."""

from __future__ import annotations

import sys
from typing import TYPE_CHECKING

from pydantic import ValidationError

from subconj.cli import build_parser, request_from_args, run
from subconj.logger import setup_logging
from subconj.util_classes import ExitStatus, InvalidInputError, UnsupportedError

if TYPE_CHECKING:
    from collections.abc import Sequence


def main(argv: Sequence[str] | None = None) -> int:
    """Run the command line.

    Args:
        argv: Arguments without the program name; ``sys.argv`` if omitted.

    Returns:
        The exit status.

    """
    args = build_parser().parse_args(argv)
    try:
        request = request_from_args(args)
    except ValidationError as e:
        sys.stderr.write(f"error: invalid option: {e.errors()[0]['msg']}\n")
        return ExitStatus.INVALID_INPUT
    setup_logging(request.settings.log_level, args.log_file)
    try:
        status, output = run(request)
    except InvalidInputError as e:
        sys.stderr.write(f"error: {e}\n")
        return ExitStatus.INVALID_INPUT
    except UnsupportedError as e:
        sys.stderr.write(f"unsupported: {e}\n")
        return ExitStatus.UNSUPPORTED
    sys.stdout.write(output + "\n")
    return status


if __name__ == "__main__":
    sys.exit(main())
