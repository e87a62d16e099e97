import json
import sys
from typing import List, Optional

from logbook import DEBUG, INFO
from pydantic import ValidationError

from .commands import COMMANDS
from .errors import EigenIdError
from .modules.logger import Log, stderr_handler
from .utils.cli import Cli

log = Log("eigenid")

EXIT_USAGE = 2


def main(argv: Optional[List[str]] = None) -> int:
    """
    Exit codes: 0 success, 1 residual failure, 2 I/O or parse error,
    3 not Hermitian / not unitary, 4 no convergence.
    """
    args = Cli().parse_arguments(argv)
    with stderr_handler(DEBUG if args.verbose else INFO).applicationbound():
        try:
            return COMMANDS[args.command](args)
        except EigenIdError as error:
            log.failed(str(error))
            return error.exit_code
        except (OSError, json.JSONDecodeError, ValidationError, ValueError) as error:
            log.failed(f"{type(error).__name__}: {error}")
            return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
