"""Selective disclosure of witnessed readouts.

A redacted readout keeps the signature, the witness and every metadata field,
discloses some segments in the clear and replaces the rest by their digests.
It is a separate type from Readout so it can never be chained from.
"""

from dataclasses import dataclass
from typing import AbstractSet, Optional, Tuple, Union

from ..common.errors import EvidenceError, RedactionError
from ..crypto.canonical import Decoder, Encoder, parse_canonical
from ..crypto.primitives import Digest, Signature, verify_signature
from .readout import (
    ChainLink,
    Location,
    Readout,
    Segment,
    WitnessSection,
    digest_with_signature,
    encode_commitment,
)

REDACTED_TAG = b"SEVD"

_DISCLOSED = 0
_HIDDEN = 1


@dataclass(frozen=True)
class HiddenSegment:
    """Placeholder for a withheld segment: only its digest is revealed."""

    digest: Digest


SegmentEntry = Union[Segment, HiddenSegment]


@dataclass(frozen=True)
class RedactedReadout:
    """A readout with some segments replaced by their digests."""

    index: int
    sensor_public_key: bytes
    timestamp: int
    location: Optional[Location]
    segments: Tuple[SegmentEntry, ...]
    chain_link: Optional[ChainLink]
    witness: WitnessSection
    is_checkpoint: bool
    signature: Signature

    @property
    def disclosed_labels(self) -> Tuple[str, ...]:
        return tuple(e.label for e in self.segments if isinstance(e, Segment))

    def encode_into(self, enc: Encoder) -> None:
        enc.raw(REDACTED_TAG)
        enc.u64(self.index).blob(self.sensor_public_key).u64(self.timestamp)
        enc.boolean(self.location is not None)
        if self.location is not None:
            self.location.encode_into(enc)
        enc.u32(len(self.segments))
        for entry in self.segments:
            if isinstance(entry, HiddenSegment):
                enc.u8(_HIDDEN).digest(entry.digest)
            else:
                enc.u8(_DISCLOSED)
                entry.encode_into(enc)
        enc.boolean(self.chain_link is not None)
        if self.chain_link is not None:
            self.chain_link.encode_into(enc)
        self.witness.encode_into(enc)
        enc.boolean(self.is_checkpoint)
        enc.blob(self.signature.value)

    @classmethod
    def decode_from(cls, dec: Decoder) -> "RedactedReadout":
        dec.expect(REDACTED_TAG)
        index = dec.u64()
        public_key = dec.blob()
        timestamp = dec.u64()
        location = Location.decode_from(dec) if dec.boolean() else None
        entries = []
        for _ in range(dec.u32()):
            at = dec.pos
            kind = dec.u8()
            if kind == _HIDDEN:
                entries.append(HiddenSegment(dec.digest()))
            elif kind == _DISCLOSED:
                entries.append(Segment.decode_from(dec))
            else:
                raise RedactionError(f"Unknown segment entry kind {kind} at offset {at}")
        chain_link = ChainLink.decode_from(dec) if dec.boolean() else None
        witness = WitnessSection.decode_from(dec)
        is_checkpoint = dec.boolean()
        signature = Signature(value=dec.blob(), signer=public_key)
        return cls(index=index, sensor_public_key=public_key, timestamp=timestamp,
                   location=location, segments=tuple(entries), chain_link=chain_link,
                   witness=witness, is_checkpoint=is_checkpoint, signature=signature)


def redact(r: Readout, keep_labels: AbstractSet[str]) -> RedactedReadout:
    """Disclose the segments named in `keep_labels`; hide the rest.

    Raises:
        RedactionError: If `r` has no witness section or a label is unknown.
    """
    if r.witness is None:
        raise RedactionError(
            f"Readout {r.index} has no witness section",
            "Selective disclosure is only defined for witnessed readouts (checkpoints)")
    unknown = sorted(set(keep_labels) - set(r.labels))
    if unknown:
        raise RedactionError(f"Unknown segment label(s): {', '.join(unknown)}",
                             f"Readout {r.index} has: {', '.join(r.labels)}")
    entries = tuple(
        seg if seg.label in keep_labels else HiddenSegment(seg.digest())
        for seg in r.segments
    )
    return RedactedReadout(
        index=r.index,
        sensor_public_key=r.sensor_public_key,
        timestamp=r.timestamp,
        location=r.location,
        segments=entries,
        chain_link=r.chain_link,
        witness=r.witness,
        is_checkpoint=r.is_checkpoint,
        signature=r.signature,
    )


def verify_redacted(rr: RedactedReadout, expected_final: Digest) -> bool:
    """True iff the redacted readout reproduces `expected_final` under a valid signature.

    Segment digests are rebuilt from disclosed bodies and hidden digests in
    order; they must equal the witness, and the rebuilt commitment must carry
    the sensor's signature. Adversarial input returns False.
    """
    try:
        rebuilt = tuple(
            e.digest if isinstance(e, HiddenSegment) else e.digest()
            for e in rr.segments
        )
        if rebuilt != rr.witness.segment_digests:
            return False
        commitment = encode_commitment(
            rr.index, rr.sensor_public_key, rr.timestamp, rr.location,
            rebuilt, rr.witness.blinding_digests,
            rr.chain_link, rr.witness, rr.is_checkpoint,
        )
        if not verify_signature(rr.signature, rr.sensor_public_key, commitment):
            return False
        return digest_with_signature(commitment, rr.signature) == expected_final
    except (EvidenceError, ValueError, TypeError, AttributeError):
        return False


def parse_redacted(data: bytes) -> RedactedReadout:
    """Parse the canonical form of a redacted readout."""
    return parse_canonical(RedactedReadout, data)
