"""Tamper command for sensor-evidence CLI (adversary fixtures).

Modes:
  flip          XOR one random byte of a record's canonical bytes
  substitute    replace a record's content with a validly signed forgery
  drop-receipt  remove a checkpoint's anchor receipt
  reorder       swap the segments of two records and re-sign both
"""

from pathlib import Path

import numpy as np

from ..crypto.primitives import KeyPair, read_key_file
from ..model.readout import Segment, resign
from ..persistence.log_file import LogFile, read_log, record_for, write_log
from ._common import EXIT_OK, add_common_flags, fail

TAMPER_MODES = ("flip", "substitute", "drop-receipt", "reorder")


def flip_byte(log_file: LogFile, index: int, rng: np.random.Generator) -> int:
    """Flip one byte of record `index`; returns the byte offset in its canonical form."""
    record = record_for(log_file.readouts[index], log_file.receipts.get(index))
    blob = bytearray(bytes.fromhex(record["canonical"]))
    offset = int(rng.integers(len(blob)))
    blob[offset] ^= int(rng.integers(1, 256))
    record["canonical"] = blob.hex()
    del log_file.readouts[index]
    log_file.receipts.pop(index, None)
    log_file.corrupt[index] = record
    return offset


def _forger(args) -> KeyPair:
    """The sensor's own key when given (insider), else a fresh foreign key."""
    return read_key_file(args.key) if args.key else KeyPair.generate()


def cmd_tamper(args) -> int:
    """Write a tampered copy of a log."""
    log_file = read_log(args.log)
    rng = np.random.default_rng(args.seed)
    intact = sorted(log_file.readouts)
    if not intact:
        return fail("Log has no intact records to tamper with")

    index = args.index if args.index is not None else int(intact[rng.integers(len(intact))])
    if index not in log_file.readouts:
        return fail(f"Index {index} is not an intact record in {args.log}")

    if args.mode == "flip":
        offset = flip_byte(log_file, index, rng)
        detail = f"flipped byte {offset} of record {index}"
    elif args.mode == "substitute":
        r = log_file.readouts[index]
        forged = tuple(Segment(seg.label, b"forged:" + seg.body) for seg in r.segments)
        log_file.readouts[index] = resign(_forger(args), r, segments=forged)
        detail = f"substituted record {index}"
    elif args.mode == "drop-receipt":
        if log_file.receipts.pop(index, None) is None:
            return fail(f"Record {index} has no receipt")
        detail = f"dropped receipt of checkpoint {index}"
    else:
        other = args.other
        if other is None or other not in log_file.readouts or other == index:
            return fail("reorder needs --other: a second, distinct intact record index")
        key = _forger(args)
        first, second = log_file.readouts[index], log_file.readouts[other]
        log_file.readouts[index] = resign(key, first, segments=second.segments)
        log_file.readouts[other] = resign(key, second, segments=first.segments)
        detail = f"swapped segments of records {index} and {other}"

    write_log(log_file, args.out)
    if not args.quiet:
        print(detail)
    return EXIT_OK


def add_tamper_parser(subparsers):
    """Add the tamper subcommand parser."""
    tamper_parser = subparsers.add_parser(
        "tamper",
        help="Write a tampered copy of a log (test fixtures)",
    )
    tamper_parser.add_argument("log", help="Log file to read")
    tamper_parser.add_argument(
        "--mode",
        choices=TAMPER_MODES,
        default="flip",
        help="Kind of tampering (default: flip)",
    )
    tamper_parser.add_argument(
        "--index",
        type=int,
        default=None,
        help="Record to tamper with (default: random intact record)",
    )
    tamper_parser.add_argument(
        "--other",
        type=int,
        default=None,
        help="Second record for --mode reorder",
    )
    tamper_parser.add_argument(
        "--key",
        type=Path,
        default=None,
        help="Key used to re-sign forgeries (default: a fresh foreign key)",
    )
    tamper_parser.add_argument("--seed", type=int, default=0, help="Seed for random choices")
    tamper_parser.add_argument("--out", "-o", required=True, help="Log file to write")
    add_common_flags(tamper_parser, config=False)
    tamper_parser.set_defaults(func=cmd_tamper)
