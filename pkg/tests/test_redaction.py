"""Selective disclosure: hiding segments while the final digest still checks out."""

import itertools
import random
from dataclasses import replace

import pytest

from sensor_evidence.common.errors import EvidenceError, FormatError, RedactionError
from sensor_evidence.crypto.canonical import canonical_bytes
from sensor_evidence.crypto.primitives import hash_bytes
from sensor_evidence.model.readout import (
    BlindingPair,
    ChainLink,
    Location,
    Segment,
    build_readout,
    final_digest,
)
from sensor_evidence.model.redaction import (
    HiddenSegment,
    parse_redacted,
    redact,
    verify_redacted,
)

from _fixtures import KEY

SEGMENTS = [Segment("temp", b"t=21.5C"), Segment("hum", b"h=40%"), Segment("cam", b"\x89PNG...")]
LABELS = [s.label for s in SEGMENTS]


def checkpoint():
    return build_readout(KEY, 0, 5_000, None, SEGMENTS, [BlindingPair.generate(b"id")], None, True)


def test_identity_redaction():
    r = checkpoint()
    rr = redact(r, set(LABELS))
    assert rr.disclosed_labels == tuple(LABELS)
    assert verify_redacted(rr, final_digest(r))


def test_full_redaction_still_verifies():
    r = checkpoint()
    rr = redact(r, set())
    assert all(isinstance(e, HiddenSegment) for e in rr.segments)
    assert verify_redacted(rr, final_digest(r))


def test_every_subset_verifies():
    r = checkpoint()
    expected = final_digest(r)
    for k in range(len(LABELS) + 1):
        for keep in itertools.combinations(LABELS, k):
            assert verify_redacted(redact(r, set(keep)), expected)


def test_altered_hidden_digest_fails():
    r = checkpoint()
    rr = redact(r, {"temp", "hum"})
    forged = replace(rr, segments=rr.segments[:2] + (
        HiddenSegment(hash_bytes(b"something else")),))
    assert not verify_redacted(forged, final_digest(r))


def test_modified_disclosed_body_fails():
    r = checkpoint()
    rr = redact(r, {"temp"})
    entries = list(rr.segments)
    entries[0] = Segment("temp", b"t=35.0C")
    forged = replace(rr, segments=tuple(entries))
    assert not verify_redacted(forged, final_digest(r))


def test_swapped_segment_order_fails():
    r = checkpoint()
    rr = redact(r, set())
    entries = list(rr.segments)
    entries[0], entries[1] = entries[1], entries[0]
    forged = replace(rr, segments=tuple(entries))
    assert not verify_redacted(forged, final_digest(r))


def test_wrong_expected_digest_fails():
    r = checkpoint()
    assert not verify_redacted(redact(r, {"hum"}), hash_bytes(b"other"))


def test_redaction_preconditions():
    stream = build_readout(KEY, 0, 0, None, SEGMENTS, (), None, False)
    with pytest.raises(RedactionError):
        redact(stream, {"temp"})
    with pytest.raises(RedactionError):
        redact(checkpoint(), {"pressure"})


def test_redacted_form_parses_back():
    r = checkpoint()
    rng = random.Random(3)
    for _ in range(20):
        keep = {label for label in LABELS if rng.random() < 0.5}
        rr = redact(r, keep)
        data = canonical_bytes(rr)
        assert data[:4] == b"SEVD"
        parsed = parse_redacted(data)
        assert parsed == rr
        assert verify_redacted(parsed, final_digest(r))
    with pytest.raises(FormatError):
        parse_redacted(canonical_bytes(redact(r, set()))[:-3])


@pytest.mark.parametrize("mask", [0x01, 0x80, 0xFF])
def test_flipped_byte_in_redacted_form_never_verifies(mask):
    link = ChainLink(prev_digest=hash_bytes(b"prev"), apast_digest=hash_bytes(b"past"),
                     apast_offset=3)
    r = build_readout(KEY, 7, 5_000, Location(1.5, -2.0), SEGMENTS,
                      [BlindingPair.generate(b"id")], link, True)
    expected = final_digest(r)
    data = canonical_bytes(redact(r, {"hum"}))
    assert verify_redacted(parse_redacted(data), expected)
    for pos in range(len(data)):
        mutated = bytearray(data)
        mutated[pos] ^= mask
        try:
            rr = parse_redacted(bytes(mutated))
        except EvidenceError:
            continue
        assert not verify_redacted(rr, expected), pos


if __name__ == "__main__":
    test_identity_redaction()
    test_full_redaction_still_verifies()
    test_every_subset_verifies()
    test_swapped_segment_order_fails()
    print("ok  redaction")
