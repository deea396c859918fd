"""Anchor-query command for sensor-evidence CLI."""

from ..common.errors import FormatError
from ..crypto.primitives import Digest
from ..persistence.anchor_file import read_anchor
from ._common import EXIT_FAILED_VERIFICATION, EXIT_OK, add_common_flags


def cmd_anchor_query(args) -> int:
    """Look digests up in an anchor store (getStored), or list the store."""
    store = read_anchor(args.anchor)
    if not args.digests:
        print(f"current block: {store.current_block}")
        for digest, block in store.items():
            print(f"{block:>8}  {digest.hex()}")
        return EXIT_OK

    missing = 0
    for text in args.digests:
        try:
            digest = Digest.from_hex(text)
        except ValueError as e:
            raise FormatError(f"Not a 32-byte hex digest: {text!r} ({e})")
        block = store.get_stored(digest)
        if block:
            print(f"{digest.hex()}  block {block}")
        else:
            missing += 1
            print(f"{digest.hex()}  not stored")
    return EXIT_FAILED_VERIFICATION if missing else EXIT_OK


def add_anchor_query_parser(subparsers):
    """Add the anchor-query subcommand parser."""
    query_parser = subparsers.add_parser(
        "anchor-query",
        help="Query an anchor store for digests",
    )
    query_parser.add_argument("anchor", help="Anchor store file (.json)")
    query_parser.add_argument(
        "digests",
        nargs="*",
        help="Hex digests to look up (none: list the whole store)",
    )
    add_common_flags(query_parser, config=False)
    query_parser.set_defaults(func=cmd_anchor_query)
