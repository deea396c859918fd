"""CLI commands for sensor-evidence.

Exit status: 0 success, 1 verification found corrupt or unreachable
readouts (or a queried digest is not stored), 2 usage, config or format
errors.
"""

import argparse
import sys

from ..common.errors import ConfigMismatchError, EvidenceError, FormatError
from ._common import EXIT_USAGE, fail
from .anchor_query import add_anchor_query_parser, cmd_anchor_query
from .keygen import add_keygen_parser, cmd_keygen
from .lose import add_lose_parser, cmd_lose
from .record import add_record_parser, cmd_record
from .simulate import add_simulate_parser, cmd_simulate
from .tamper import add_tamper_parser, cmd_tamper
from .verify import add_verify_parser, cmd_verify


def main(args=None) -> int:
    """Main CLI entry point."""
    from .. import __version__

    parser = argparse.ArgumentParser(
        prog="sensor-evidence",
        description="Tamper-evident sensor readout chains with anchored checkpoints",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    subparsers = parser.add_subparsers(dest="command", required=True)

    # Register commands
    add_keygen_parser(subparsers)
    add_record_parser(subparsers)
    add_lose_parser(subparsers)
    add_tamper_parser(subparsers)
    add_verify_parser(subparsers)
    add_anchor_query_parser(subparsers)
    add_simulate_parser(subparsers)

    # Parse and execute
    parsed_args = parser.parse_args(args)
    try:
        return parsed_args.func(parsed_args)
    except ConfigMismatchError as e:
        where = f" (readout {e.index})" if e.index is not None else ""
        return fail(f"Config mismatch{where}: {e.message}")
    except FormatError as e:
        at = f" at byte {e.offset}" if e.offset is not None else ""
        src = f"{e.path}: " if e.path else ""
        return fail(f"{src}{e.message}{at}")
    except EvidenceError as e:
        return fail(e.message)
    except (ValueError, OSError) as e:
        return fail(str(e))


__all__ = [
    "main",
    "cmd_anchor_query",
    "cmd_keygen",
    "cmd_lose",
    "cmd_record",
    "cmd_simulate",
    "cmd_tamper",
    "cmd_verify",
    "EXIT_USAGE",
]


if __name__ == "__main__":
    sys.exit(main())
