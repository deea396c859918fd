"""Readout data structure, digests and selective disclosure."""

from .readout import (
    BlindingPair,
    ChainLink,
    Location,
    Readout,
    Segment,
    WitnessSection,
    build_readout,
    commitment_bytes,
    final_digest,
    signature_valid,
    witness_matches,
)
from .redaction import HiddenSegment, RedactedReadout, redact, verify_redacted

__all__ = [
    "BlindingPair",
    "ChainLink",
    "Location",
    "Readout",
    "Segment",
    "WitnessSection",
    "build_readout",
    "commitment_bytes",
    "final_digest",
    "signature_valid",
    "witness_matches",
    "HiddenSegment",
    "RedactedReadout",
    "redact",
    "verify_redacted",
]
