"""Readout construction, final digests and the storage form."""

import json
import random
from pathlib import Path

import pytest

from sensor_evidence.common.errors import FormatError, ReadoutError
from sensor_evidence.crypto.canonical import canonical_bytes, parse_canonical
from sensor_evidence.crypto.primitives import Digest, Signature, hash_bytes, verify_signature
from sensor_evidence.evidence.merkle import MerkleProof, ProofStep, Side
from sensor_evidence.model.readout import (
    BlindingPair,
    ChainLink,
    Location,
    Readout,
    Segment,
    WitnessSection,
    build_readout,
    commitment_bytes,
    final_digest,
    resign,
    signature_valid,
)

from _fixtures import KEY, OTHER_KEY

GOLDEN = Path(__file__).parent / "golden"

LINK = ChainLink(prev_digest=hash_bytes(b"prev"), apast_digest=hash_bytes(b"past"),
                 apast_offset=3)


def make(index=1, checkpoint=False, segments=None, timestamp=1_000, blinding=(), key=KEY):
    segments = segments or [Segment("temp", b"t=21.5C"), Segment("hum", b"h=40%")]
    return build_readout(key, index, timestamp, Location(45.07, 7.69), segments, blinding,
                         None if index == 0 else LINK, checkpoint)


def test_genesis_checkpoint():
    r = build_readout(KEY, 0, 0, None, [Segment("t", b"t=21.5C")], (), None, True)
    assert r.chain_link is None
    assert r.witness is not None
    assert r.witness.segment_digests == (Segment("t", b"t=21.5C").digest(),)
    assert signature_valid(r)
    assert verify_signature(r.signature, KEY.public_key, commitment_bytes(r))


def test_stream_readout_has_no_witness():
    r = make(index=5)
    assert r.witness is None
    assert signature_valid(r)


def test_construction_preconditions():
    with pytest.raises(ReadoutError):
        make(segments=[Segment("a", b"1"), Segment("a", b"2")])
    with pytest.raises(ReadoutError):
        build_readout(KEY, 0, 0, None, [], (), None, False)
    with pytest.raises(ReadoutError):
        build_readout(KEY, 0, 0, None, [Segment("a", b"1")], (), LINK, False)
    with pytest.raises(ReadoutError):
        build_readout(KEY, 3, 0, None, [Segment("a", b"1")], (), None, False)
    with pytest.raises(ReadoutError):
        Location(91.0, 0.0)
    with pytest.raises(ReadoutError):
        ChainLink(prev_digest=hash_bytes(b"x"), apast_digest=hash_bytes(b"y"), apast_offset=1)
    with pytest.raises(ReadoutError):
        BlindingPair(random_number=b"short", search_key=b"k")


def test_final_digest_deterministic():
    r = make(checkpoint=True)
    assert final_digest(r) == final_digest(r)
    assert final_digest(r) == final_digest(parse_canonical(Readout, canonical_bytes(r)))


def test_final_digest_field_sensitivity():
    base = make()
    assert final_digest(base) != final_digest(make(timestamp=1_001))
    assert final_digest(base) != final_digest(resign(KEY, base, location=None))
    assert final_digest(base) != final_digest(resign(KEY, base, is_checkpoint=True))
    assert final_digest(base) != final_digest(make(key=OTHER_KEY))


def test_segment_byte_flip_changes_digest():
    rng = random.Random(7)
    body = bytes(rng.randrange(256) for _ in range(64))
    original = final_digest(make(segments=[Segment("raw", body)]))
    for _ in range(100):
        flipped = bytearray(body)
        flipped[rng.randrange(len(body))] ^= 1 << rng.randrange(8)
        assert final_digest(make(segments=[Segment("raw", bytes(flipped))])) != original


def test_content_swap_breaks_signature():
    r = make(checkpoint=True)
    swapped = Readout(
        index=r.index, sensor_public_key=r.sensor_public_key, timestamp=r.timestamp,
        location=r.location, segments=(Segment("temp", b"t=99.9C"), r.segments[1]),
        blinding_pairs=r.blinding_pairs, chain_link=r.chain_link, witness=r.witness,
        is_checkpoint=r.is_checkpoint, signature=r.signature,
    )
    assert not signature_valid(swapped)


def test_blinding_pairs_are_committed():
    pair = BlindingPair.generate(b"sensor-42")
    assert len(pair.random_number) == 32
    assert BlindingPair.generate(b"sensor-42") != pair
    r = make(checkpoint=True, blinding=[pair])
    assert r.witness.blinding_digests == (pair.digest(),)
    assert signature_valid(r)
    assert final_digest(r) != final_digest(resign(KEY, r, blinding_pairs=()))


def test_storage_form_round_trip_and_truncation():
    r = make(checkpoint=True, blinding=[BlindingPair.generate(b"k")])
    data = canonical_bytes(r)
    assert data[:4] == b"SEVR"
    assert parse_canonical(Readout, data) == r
    with pytest.raises(FormatError):
        parse_canonical(Readout, data[:len(data) // 2])


def test_canonical_bytes_collision_search():
    rng = random.Random(11)
    seen = {}
    for _ in range(10_000):
        body = bytes(rng.randrange(3) for _ in range(rng.randrange(3)))
        seg = Segment(rng.choice(["", "a", "ab", "b"]), body)
        data = canonical_bytes(seg)
        assert seen.setdefault(data, seg) == seg


def test_final_digest_injective_over_ten_thousand_readouts():
    # tiny field alphabets, so most pairs differ in one or two fields only
    rng = random.Random(17)
    links = [
        ChainLink(prev_digest=hash_bytes(b"p0"), apast_digest=None, apast_offset=1),
        ChainLink(prev_digest=hash_bytes(b"p0"), apast_digest=None, apast_offset=3),
        ChainLink(prev_digest=hash_bytes(b"p1"), apast_digest=hash_bytes(b"q"), apast_offset=3),
        ChainLink(prev_digest=hash_bytes(b"p1"), apast_digest=hash_bytes(b"q"), apast_offset=4),
    ]
    locations = [None, Location(0.0, 0.0), Location(1.5, -2.0)]
    by_form = {}
    while len(by_form) < 10_000:
        index = rng.randrange(4)
        labels = rng.sample(["", "a", "b", "ab"], rng.randrange(1, 3))
        segments = [Segment(label, bytes(rng.randrange(2) for _ in range(rng.randrange(3))))
                    for label in labels]
        r = build_readout(rng.choice((KEY, OTHER_KEY)), index, rng.randrange(3),
                          rng.choice(locations), segments, (),
                          None if index == 0 else rng.choice(links), rng.random() < 0.5)
        by_form[canonical_bytes(r)] = final_digest(r)
    assert len(set(by_form.values())) == len(by_form)


def test_canonical_layout_golden():
    golden = json.loads((GOLDEN / "canonical_layout.json").read_text())
    d11, d22, d33 = (Digest(bytes([b]) * 32) for b in (0x11, 0x22, 0x33))
    short_link = ChainLink(prev_digest=d11, apast_digest=None, apast_offset=3)
    public_key = b"\xab" * 32
    readout = Readout(
        index=1, sensor_public_key=public_key, timestamp=1_000, location=Location(1.5, -2.0),
        segments=(Segment("t", b"\x01\x02"),), blinding_pairs=(), chain_link=short_link,
        witness=None, is_checkpoint=False,
        signature=Signature(value=b"\x55" * 64, signer=public_key),
    )
    forms = {
        "location": Location(1.5, -2.0),
        "segment": Segment("t", b"\x01\x02"),
        "chain_link": ChainLink(prev_digest=d11, apast_digest=d22, apast_offset=3),
        "chain_link_without_apast": short_link,
        "witness": WitnessSection(segment_digests=(d33,)),
        "proof": MerkleProof(leaf=d11, path=(ProofStep(d22, Side.LEFT),), root=d33),
        "readout": readout,
    }
    assert sorted(forms) == sorted(golden)
    for name, value in forms.items():
        assert canonical_bytes(value).hex() == golden[name], name
    assert parse_canonical(Readout, bytes.fromhex(golden["readout"])) == readout


if __name__ == "__main__":
    test_genesis_checkpoint()
    test_final_digest_field_sensitivity()
    test_segment_byte_flip_changes_digest()
    test_storage_form_round_trip_and_truncation()
    print("ok  readout construction and digests")
