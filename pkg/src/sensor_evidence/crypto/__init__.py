"""Hashing, signing and canonical serialization."""

from .primitives import (
    DIGEST_SIZE,
    Digest,
    KeyPair,
    Signature,
    hash_bytes,
    sign,
    verify_signature,
    read_key_file,
    write_key_file,
)
from .canonical import Encoder, Decoder, canonical_bytes, parse_canonical

__all__ = [
    "DIGEST_SIZE",
    "Digest",
    "KeyPair",
    "Signature",
    "hash_bytes",
    "sign",
    "verify_signature",
    "read_key_file",
    "write_key_file",
    "Encoder",
    "Decoder",
    "canonical_bytes",
    "parse_canonical",
]
