"""Readouts: segmented sensor emissions with chain links, witness and signature.

Two byte forms exist for every readout:

- the storage form (`canonical_bytes(readout)`), which carries raw segment
  bodies and blinding pairs and round-trips through `parse_canonical`;
- the commitment form (`commitment_bytes(readout)`), in which every segment
  and blinding pair is replaced by its digest. The signature is taken over
  the commitment form and the final digest hashes it together with the
  signature, so a readout whose segments are partly hidden still verifies.
"""

import math
import secrets
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence, Tuple

from ..common.errors import ReadoutError
from ..crypto.canonical import Decoder, Encoder, canonical_bytes
from ..crypto.primitives import (
    Digest,
    KeyPair,
    Signature,
    hash_bytes,
    sign,
    verify_signature,
)

STORAGE_TAG = b"SEVR"
COMMITMENT_TAG = b"SEVC"
FORMAT_VERSION = 1


@dataclass(frozen=True)
class Segment:
    """One labelled section of a readout body."""

    label: str
    body: bytes

    def encode_into(self, enc: Encoder) -> None:
        enc.text(self.label).blob(self.body)

    @classmethod
    def decode_from(cls, dec: Decoder) -> "Segment":
        return cls(label=dec.text(), body=dec.blob())

    def digest(self) -> Digest:
        return hash_bytes(canonical_bytes(self))


@dataclass(frozen=True)
class BlindingPair:
    """<random number, search key> pair used to anonymize traceability.

    The random number is always generated, never derived from content.
    """

    random_number: bytes
    search_key: bytes

    def __post_init__(self):
        if len(self.random_number) != 32:
            raise ReadoutError(
                f"Blinding random number must be 32 bytes, got {len(self.random_number)}")

    @classmethod
    def generate(cls, search_key: bytes) -> "BlindingPair":
        return cls(random_number=secrets.token_bytes(32), search_key=bytes(search_key))

    def encode_into(self, enc: Encoder) -> None:
        enc.blob(self.random_number).blob(self.search_key)

    @classmethod
    def decode_from(cls, dec: Decoder) -> "BlindingPair":
        return cls(random_number=dec.blob(), search_key=dec.blob())

    def digest(self) -> Digest:
        return hash_bytes(canonical_bytes(self))


@dataclass(frozen=True)
class WitnessSection:
    """Segment digests and blinding digests, collectively signed."""

    segment_digests: Tuple[Digest, ...]
    blinding_digests: Tuple[Digest, ...] = ()

    @classmethod
    def for_content(cls, segments: Iterable[Segment],
                    blinding_pairs: Iterable[BlindingPair] = ()) -> "WitnessSection":
        return cls(
            segment_digests=tuple(seg.digest() for seg in segments),
            blinding_digests=tuple(pair.digest() for pair in blinding_pairs),
        )

    def encode_into(self, enc: Encoder) -> None:
        enc.u32(len(self.segment_digests))
        for d in self.segment_digests:
            enc.digest(d)
        enc.u32(len(self.blinding_digests))
        for d in self.blinding_digests:
            enc.digest(d)

    @classmethod
    def decode_from(cls, dec: Decoder) -> "WitnessSection":
        segment_digests = tuple(dec.digest() for _ in range(dec.u32()))
        blinding_digests = tuple(dec.digest() for _ in range(dec.u32()))
        return cls(segment_digests=segment_digests, blinding_digests=blinding_digests)


@dataclass(frozen=True)
class ChainLink:
    """Backward digests: previous readout and the a-past readout.

    `apast_offset` always records the chain's a, even while `apast_digest`
    is absent (index < a, or a == 1), so a verifier can detect a config
    mismatch from any linked readout.
    """

    prev_digest: Digest
    apast_digest: Optional[Digest]
    apast_offset: int
    prev_offset: int = 1

    def __post_init__(self):
        if self.prev_offset != 1:
            raise ReadoutError(f"prev_offset must be 1, got {self.prev_offset}")
        if self.apast_offset < 1:
            raise ReadoutError(f"apast_offset must be >= 1, got {self.apast_offset}")
        if self.apast_digest is not None and self.apast_offset < 2:
            raise ReadoutError("An a-past digest with offset 1 would duplicate prev_digest")

    def encode_into(self, enc: Encoder) -> None:
        enc.digest(self.prev_digest).u64(self.prev_offset)
        enc.boolean(self.apast_digest is not None)
        if self.apast_digest is not None:
            enc.digest(self.apast_digest)
        enc.u64(self.apast_offset)

    @classmethod
    def decode_from(cls, dec: Decoder) -> "ChainLink":
        prev_digest = dec.digest()
        prev_offset = dec.u64()
        apast_digest = dec.digest() if dec.boolean() else None
        return cls(prev_digest=prev_digest, apast_digest=apast_digest,
                   apast_offset=dec.u64(), prev_offset=prev_offset)


@dataclass(frozen=True)
class Location:
    """Latitude/longitude in degrees."""

    latitude: float
    longitude: float

    def __post_init__(self):
        for name, value, bound in (("latitude", self.latitude, 90.0),
                                   ("longitude", self.longitude, 180.0)):
            if not math.isfinite(value) or abs(value) > bound:
                raise ReadoutError(f"{name} out of range: {value}")
        # -0.0 and 0.0 are one logical value; keep one representation.
        object.__setattr__(self, "latitude", float(self.latitude) + 0.0)
        object.__setattr__(self, "longitude", float(self.longitude) + 0.0)

    def encode_into(self, enc: Encoder) -> None:
        enc.f64(self.latitude).f64(self.longitude)

    @classmethod
    def decode_from(cls, dec: Decoder) -> "Location":
        return cls(latitude=dec.f64(), longitude=dec.f64())


@dataclass(frozen=True)
class Readout:
    """One signed sensor emission."""

    index: int
    sensor_public_key: bytes
    timestamp: int
    location: Optional[Location]
    segments: Tuple[Segment, ...]
    blinding_pairs: Tuple[BlindingPair, ...]
    chain_link: Optional[ChainLink]
    witness: Optional[WitnessSection]
    is_checkpoint: bool
    signature: Signature

    def __post_init__(self):
        _check_structure(self.index, self.timestamp, self.segments, self.chain_link,
                         self.witness, self.is_checkpoint)

    @property
    def labels(self) -> Tuple[str, ...]:
        return tuple(seg.label for seg in self.segments)

    def encode_into(self, enc: Encoder) -> None:
        enc.raw(STORAGE_TAG).u8(FORMAT_VERSION)
        _encode_header(enc, self.index, self.sensor_public_key, self.timestamp, self.location)
        enc.u32(len(self.segments))
        for seg in self.segments:
            seg.encode_into(enc)
        enc.u32(len(self.blinding_pairs))
        for pair in self.blinding_pairs:
            pair.encode_into(enc)
        _encode_optional(enc, self.chain_link)
        _encode_optional(enc, self.witness)
        enc.boolean(self.is_checkpoint)
        enc.blob(self.signature.value)

    @classmethod
    def decode_from(cls, dec: Decoder) -> "Readout":
        dec.expect(STORAGE_TAG)
        version = dec.u8()
        if version != FORMAT_VERSION:
            raise ReadoutError(f"Unsupported readout format version {version}")
        index, public_key, timestamp, location = _decode_header(dec)
        segments = tuple(Segment.decode_from(dec) for _ in range(dec.u32()))
        blinding_pairs = tuple(BlindingPair.decode_from(dec) for _ in range(dec.u32()))
        chain_link = ChainLink.decode_from(dec) if dec.boolean() else None
        witness = WitnessSection.decode_from(dec) if dec.boolean() else None
        is_checkpoint = dec.boolean()
        signature = Signature(value=dec.blob(), signer=public_key)
        return cls(index=index, sensor_public_key=public_key, timestamp=timestamp,
                   location=location, segments=segments, blinding_pairs=blinding_pairs,
                   chain_link=chain_link, witness=witness, is_checkpoint=is_checkpoint,
                   signature=signature)


def _check_structure(index, timestamp, segments, chain_link, witness, is_checkpoint) -> None:
    if index < 0:
        raise ReadoutError(f"index must be >= 0, got {index}")
    if timestamp < 0:
        raise ReadoutError(f"timestamp must be >= 0 microseconds, got {timestamp}")
    if not segments:
        raise ReadoutError("A readout needs at least one segment")
    labels = [seg.label for seg in segments]
    if len(set(labels)) != len(labels):
        raise ReadoutError(f"Segment labels must be unique, got {labels}")
    if (index == 0) != (chain_link is None):
        raise ReadoutError(
            "Index 0 must have no chain link and every later index must have one",
            f"index={index}, chain_link={'present' if chain_link else 'absent'}")
    if is_checkpoint and witness is None:
        raise ReadoutError(f"Checkpoint readout {index} has no witness section")


def _encode_header(enc: Encoder, index: int, public_key: bytes, timestamp: int,
                   location: Optional[Location]) -> None:
    enc.u64(index).blob(public_key).u64(timestamp)
    _encode_optional(enc, location)


def _decode_header(dec: Decoder):
    index = dec.u64()
    public_key = dec.blob()
    timestamp = dec.u64()
    location = Location.decode_from(dec) if dec.boolean() else None
    return index, public_key, timestamp, location


def _encode_optional(enc: Encoder, value) -> None:
    enc.boolean(value is not None)
    if value is not None:
        value.encode_into(enc)


def encode_commitment(
    index: int,
    public_key: bytes,
    timestamp: int,
    location: Optional[Location],
    segment_digests: Sequence[Digest],
    blinding_digests: Sequence[Digest],
    chain_link: Optional[ChainLink],
    witness: Optional[WitnessSection],
    is_checkpoint: bool,
) -> bytes:
    """Commitment form from already-digested content."""
    enc = Encoder()
    enc.raw(COMMITMENT_TAG).u8(FORMAT_VERSION)
    _encode_header(enc, index, public_key, timestamp, location)
    enc.u32(len(segment_digests))
    for d in segment_digests:
        enc.digest(d)
    enc.u32(len(blinding_digests))
    for d in blinding_digests:
        enc.digest(d)
    _encode_optional(enc, chain_link)
    _encode_optional(enc, witness)
    enc.boolean(is_checkpoint)
    return enc.getvalue()


def commitment_bytes(r: Readout) -> bytes:
    """The byte string the sensor signs."""
    return encode_commitment(
        r.index, r.sensor_public_key, r.timestamp, r.location,
        [seg.digest() for seg in r.segments],
        [pair.digest() for pair in r.blinding_pairs],
        r.chain_link, r.witness, r.is_checkpoint,
    )


def digest_with_signature(commitment: bytes, signature: Signature) -> Digest:
    return hash_bytes(commitment + Encoder().blob(signature.value).getvalue())


def final_digest(r: Readout) -> Digest:
    """Hash of the commitment form plus signature: the value sent to the anchor."""
    return digest_with_signature(commitment_bytes(r), r.signature)


def witness_matches(r: Readout) -> bool:
    """True if the readout has no witness, or its witness matches its content."""
    if r.witness is None:
        return True
    return r.witness == WitnessSection.for_content(r.segments, r.blinding_pairs)


def signature_valid(r: Readout) -> bool:
    """Signature over the commitment form verifies and the witness is consistent."""
    return witness_matches(r) and verify_signature(
        r.signature, r.sensor_public_key, commitment_bytes(r))


def build_readout(
    key: KeyPair,
    index: int,
    timestamp: int,
    location: Optional[Location],
    segments: Sequence[Segment],
    blinding_pairs: Sequence[BlindingPair],
    chain_link: Optional[ChainLink],
    is_checkpoint: bool,
) -> Readout:
    """Build and sign a readout. The witness is attached iff it is a checkpoint.

    Raises:
        ReadoutError: Empty segment list, duplicate labels, or index/chain_link
            mismatch (index 0 has no link; every later index has one).
    """
    segments = tuple(segments)
    blinding_pairs = tuple(blinding_pairs)
    _check_structure(index, timestamp, segments, chain_link,
                     witness=WitnessSection(()) if is_checkpoint else None,
                     is_checkpoint=is_checkpoint)
    witness = WitnessSection.for_content(segments, blinding_pairs) if is_checkpoint else None
    commitment = encode_commitment(
        index, key.public_key, timestamp, location,
        [seg.digest() for seg in segments],
        [pair.digest() for pair in blinding_pairs],
        chain_link, witness, is_checkpoint,
    )
    return Readout(
        index=index,
        sensor_public_key=key.public_key,
        timestamp=timestamp,
        location=location,
        segments=segments,
        blinding_pairs=blinding_pairs,
        chain_link=chain_link,
        witness=witness,
        is_checkpoint=is_checkpoint,
        signature=sign(key, commitment),
    )


def resign(key: KeyPair, r: Readout, **changes) -> Readout:
    """Rebuild `r` with field changes and a fresh signature.

    Used to forge validly signed substitutes in threat-model fixtures.
    """
    fields = {
        "index": r.index, "timestamp": r.timestamp, "location": r.location,
        "segments": r.segments, "blinding_pairs": r.blinding_pairs,
        "chain_link": r.chain_link, "is_checkpoint": r.is_checkpoint,
    }
    fields.update(changes)
    return build_readout(key, **fields)

