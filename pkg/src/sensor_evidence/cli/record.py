"""Record command for sensor-evidence CLI.

Turns data bodies into a signed chain: one readout per input line (or per
file when the input is a directory), checkpoints anchored as they occur.
"""

import sys
from pathlib import Path
from typing import List, Optional

from ..chain.builder import ChainRecorder
from ..common.config import AnchorConfig, ChainConfig
from ..crypto.primitives import read_key_file
from ..evidence.anchor import FaultPolicy
from ..model.readout import Location, Segment
from ..persistence.anchor_file import read_anchor, write_anchor
from ..persistence.log_file import LogFile, write_log
from ..settings import ENV_KEY_PATH, default_key_path
from ._common import EXIT_OK, add_common_flags, fail, logger, pick, project_config

DEFAULT_INTERVAL_US = 1_000_000


def read_bodies(source: str) -> List[bytes]:
    """Bodies from a file (one per non-empty line), a directory, or '-' for stdin."""
    if source == "-":
        data = sys.stdin.buffer.read()
        return [line for line in data.splitlines() if line]
    path = Path(source)
    if path.is_dir():
        return [p.read_bytes() for p in sorted(path.iterdir()) if p.is_file()]
    return [line for line in path.read_bytes().splitlines() if line]


def split_segments(body: bytes, separator: Optional[str]) -> List[Segment]:
    if not separator:
        return [Segment("body", body)]
    parts = body.split(separator.encode("utf-8"))
    return [Segment(f"part{i}", part) for i, part in enumerate(parts)]


def parse_location(text: Optional[str]) -> Optional[Location]:
    if not text:
        return None
    lat, lon = (float(x) for x in text.split(","))
    return Location(latitude=lat, longitude=lon)


def cmd_record(args) -> int:
    """Record bodies into a log and anchor checkpoints."""
    log = logger(args)
    project = project_config(args)
    chain = ChainConfig(a=pick(args.a, project.chain.a), s=pick(args.s, project.chain.s))
    anchor_cfg = AnchorConfig(
        batch_size=pick(args.batch_size, project.anchor.batch_size),
        fail_probability=pick(args.fail_anchor_prob, project.anchor.fail_probability),
        fail_next=project.anchor.fail_next,
        fault_seed=pick(args.seed, project.anchor.fault_seed),
    )

    key_path = args.key or default_key_path()
    if key_path is None:
        return fail(f"No signing key: pass --key or set {ENV_KEY_PATH}")
    key = read_key_file(key_path)

    try:
        bodies = read_bodies(args.input)
    except OSError as e:
        return fail(f"Cannot read input: {e}")
    if not bodies:
        return fail(f"No data bodies in {args.input}")
    if args.interval < 0 or args.start_time < 0:
        return fail("--start-time and --interval must be >= 0")
    location = parse_location(args.location)

    store = read_anchor(args.anchor)
    store.faults = FaultPolicy.from_config(anchor_cfg)
    blocks_before = store.current_block

    recorder = ChainRecorder(chain, key, store, batch_size=anchor_cfg.batch_size, log=log)
    for i, body in enumerate(bodies):
        recorder.record(
            timestamp=args.start_time + i * args.interval,
            segments=split_segments(body, args.split),
            location=location,
        )
    receipts = recorder.finish()

    log_file = LogFile(
        config=chain,
        public_key=key.public_key,
        length=len(recorder.readouts),
        readouts={r.index: r for r in recorder.readouts},
        receipts=receipts,
    )
    write_log(log_file, args.out)
    write_anchor(store, args.anchor)

    summary = recorder.summary()
    print(f"readouts: {summary['readouts']}")
    print(f"checkpoints: {summary['checkpoints']}")
    print(f"anchored checkpoints: {summary['anchored_checkpoints']}")
    print(f"anchored roots: {summary['anchored_roots']}")
    if summary["failed_checkpoints"]:
        print(f"failed checkpoints: {summary['failed_checkpoints']}")
    print(f"blocks: {blocks_before}..{store.current_block - 1}")
    return EXIT_OK


def add_record_parser(subparsers):
    """Add the record subcommand parser."""
    record_parser = subparsers.add_parser(
        "record",
        help="Sign data bodies into a readout chain and anchor its checkpoints",
    )
    record_parser.add_argument(
        "input",
        help="File with one data body per line, a directory of files, or '-' for stdin",
    )
    record_parser.add_argument(
        "--key",
        type=Path,
        default=None,
        help=f"Sensor key file (default: ${ENV_KEY_PATH})",
    )
    record_parser.add_argument("--a", type=int, default=None, help="a-past offset (>= 1)")
    record_parser.add_argument("--s", type=int, default=None, help="Checkpoint interval (>= 1)")
    record_parser.add_argument(
        "--batch-size",
        type=int,
        default=None,
        help="Final digests per anchored Merkle root",
    )
    record_parser.add_argument(
        "--fail-anchor-prob",
        type=float,
        default=None,
        help="Probability that an evidence submission fails (fault injection)",
    )
    record_parser.add_argument(
        "--seed",
        type=int,
        default=None,
        help="Seed for injected anchor faults",
    )
    record_parser.add_argument(
        "--start-time",
        type=int,
        default=0,
        help="Timestamp of the first readout, microseconds since epoch",
    )
    record_parser.add_argument(
        "--interval",
        type=int,
        default=DEFAULT_INTERVAL_US,
        help="Microseconds between readouts",
    )
    record_parser.add_argument(
        "--location",
        default=None,
        metavar="LAT,LON",
        help="Fixed sensor location in degrees",
    )
    record_parser.add_argument(
        "--split",
        default=None,
        metavar="SEP",
        help="Split each body on SEP into segments part0, part1, ...",
    )
    record_parser.add_argument("--out", "-o", required=True, help="Log file to write (.jsonl)")
    record_parser.add_argument(
        "--anchor",
        required=True,
        help="Anchor store file (read if present, then rewritten)",
    )
    add_common_flags(record_parser)
    record_parser.set_defaults(func=cmd_record)
