"""Keygen command for sensor-evidence CLI."""

from pathlib import Path

from ..crypto.primitives import KeyPair, write_key_file
from ._common import EXIT_OK, fail


def cmd_keygen(args) -> int:
    """Create a sensor signing key (PKCS8 PEM) and print its public key."""
    out = Path(args.out)
    if out.exists() and not args.force:
        return fail(f"{out} exists (use --force to overwrite)")
    key = KeyPair.generate()
    write_key_file(key, out)
    print(f"key: {out}")
    print(f"public key: {key.public_key.hex()}")
    return EXIT_OK


def add_keygen_parser(subparsers):
    """Add the keygen subcommand parser."""
    keygen_parser = subparsers.add_parser(
        "keygen",
        help="Generate an Ed25519 sensor key",
    )
    keygen_parser.add_argument(
        "--out", "-o",
        required=True,
        help="Private key file to write",
    )
    keygen_parser.add_argument(
        "--force",
        action="store_true",
        help="Overwrite an existing key file",
    )
    keygen_parser.set_defaults(func=cmd_keygen)
