"""Verify command for sensor-evidence CLI."""

import json

from ..common.config import ChainConfig
from ..persistence.anchor_file import read_anchor
from ..persistence.log_file import read_log
from ..persistence.reports import REPORT_FORMATS, write_report
from ..verification.reachability import Status
from ..verification.verifier import check_trail, verify_log, verify_single
from ._common import EXIT_FAILED_VERIFICATION, EXIT_OK, add_common_flags, pick


def cmd_verify(args) -> int:
    """Classify every readout of a log.

    Exit status 0 when nothing is corrupt or unreachable, 1 otherwise.
    """
    log_file = read_log(args.log)
    store = read_anchor(args.anchor)
    config = ChainConfig(a=pick(args.a, log_file.config.a), s=pick(args.s, log_file.config.s))
    available = log_file.available()

    if args.index is not None:
        single = verify_single(available, store, args.index, config)
        out = {"index": single.index, "status": single.status.value}
        if single.trail is not None:
            out["trail"] = single.trail.to_json()
            out["trail_valid"] = check_trail(single.trail, available, store, config)
        print(json.dumps(out, indent=2))
        return EXIT_OK if single.status is Status.VERIFIABLE else EXIT_FAILED_VERIFICATION

    report = verify_log(available, store, config)
    if args.out:
        write_report(report, args.out, args.format)
    if not args.quiet or not args.out:
        print(report.dumps(args.format or "table"))
    return EXIT_OK if report.ok else EXIT_FAILED_VERIFICATION


def add_verify_parser(subparsers):
    """Add the verify subcommand parser."""
    verify_parser = subparsers.add_parser(
        "verify",
        help="Verify a log against an anchor store",
    )
    verify_parser.add_argument("log", help="Log file (.jsonl)")
    verify_parser.add_argument("anchor", help="Anchor store file (.json)")
    verify_parser.add_argument(
        "--format",
        choices=REPORT_FORMATS,
        default=None,
        help="Report format (default: table on stdout, by suffix for --out)",
    )
    verify_parser.add_argument("--out", "-o", default=None, help="Also write the report here")
    verify_parser.add_argument(
        "--index",
        type=int,
        default=None,
        help="Verify one readout and print its evidence trail",
    )
    verify_parser.add_argument(
        "--a",
        type=int,
        default=None,
        help="Expected a-past offset (default: from the log header)",
    )
    verify_parser.add_argument(
        "--s",
        type=int,
        default=None,
        help="Expected checkpoint interval (default: from the log header)",
    )
    add_common_flags(verify_parser, config=False)
    verify_parser.set_defaults(func=cmd_verify)
