"""Lose command for sensor-evidence CLI (loss fixtures)."""

import numpy as np

from ..persistence.log_file import read_log, write_log
from ._common import EXIT_OK, add_common_flags, fail


def cmd_lose(args) -> int:
    """Write a copy of a log with some records removed."""
    log_file = read_log(args.log)
    present = log_file.indices

    if args.random is not None:
        if args.indices:
            return fail("Give either explicit indices or --random, not both")
        if not 0.0 <= args.random <= 1.0:
            return fail(f"--random must be in [0, 1], got {args.random}")
        uniforms = np.random.default_rng(args.seed).random(log_file.length)
        drop = [j for j in present if uniforms[j] < args.random]
    else:
        if not args.indices:
            return fail("Nothing to remove: give indices or --random P")
        bad = [j for j in args.indices if not 0 <= j < log_file.length]
        if bad:
            return fail(f"Index out of range 0..{log_file.length - 1}: {bad}")
        drop = sorted(set(args.indices))

    write_log(log_file.without(drop), args.out)
    if not args.quiet:
        print(f"removed {len(drop)} record(s): {drop}")
        print(f"remaining: {len(present) - len(set(drop) & set(present))}")
    return EXIT_OK


def add_lose_parser(subparsers):
    """Add the lose subcommand parser."""
    lose_parser = subparsers.add_parser(
        "lose",
        help="Remove records from a log to simulate losses",
    )
    lose_parser.add_argument("log", help="Log file to read")
    lose_parser.add_argument(
        "indices",
        nargs="*",
        type=int,
        help="Readout indices to remove",
    )
    lose_parser.add_argument(
        "--random",
        type=float,
        default=None,
        metavar="P",
        help="Remove each record independently with probability P",
    )
    lose_parser.add_argument(
        "--seed",
        type=int,
        default=0,
        help="Seed for --random",
    )
    lose_parser.add_argument("--out", "-o", required=True, help="Log file to write")
    add_common_flags(lose_parser, config=False)
    lose_parser.set_defaults(func=cmd_lose)
