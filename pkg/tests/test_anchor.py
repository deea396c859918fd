"""Emulated anchor contract and the evidence batching service."""

import random
import threading

import pytest

from sensor_evidence.common.config import AnchorConfig
from sensor_evidence.common.errors import AnchorSubmissionError
from sensor_evidence.crypto.primitives import hash_bytes
from sensor_evidence.evidence.anchor import FIRST_BLOCK, AnchorStore, FaultPolicy
from sensor_evidence.evidence.batch import (
    PENDING,
    AnchorReceipt,
    EvidenceBatch,
    check_receipt,
    submit_evidence,
)
from sensor_evidence.evidence.merkle import verify_proof


def digests(n, tag="d"):
    return [hash_bytes(f"{tag}-{i}".encode()) for i in range(n)]


def test_store_semantics():
    store = AnchorStore()
    d, unknown = digests(2)
    assert store.store(d) is False
    assert store.get_stored(d) == FIRST_BLOCK
    assert store.store(d) is True
    assert store.get_stored(d) == FIRST_BLOCK
    assert store.get_stored(unknown) == 0
    assert not store.is_stored(unknown)
    assert store.current_block == FIRST_BLOCK + 1


def test_random_operations_match_reference_mapping():
    rng = random.Random(17)
    pool = digests(200)
    store = AnchorStore()
    reference = {}
    block = FIRST_BLOCK
    for _ in range(10_000):
        d = rng.choice(pool)
        op = rng.randrange(3)
        if op == 0:
            already = reference.get(d, 0) > 0
            if not already:
                reference[d] = block
                block += 1
            assert store.store(d) is already
        elif op == 1:
            assert store.get_stored(d) == reference.get(d, 0)
        else:
            assert store.is_stored(d) == (store.get_stored(d) > 0)
    assert dict(store.items()) == reference
    assert [b for _, b in store.items()] == sorted(reference.values())


def test_concurrent_stores_are_linearizable():
    store = AnchorStore()
    pool = digests(50)
    results = []

    def worker(seed):
        rng = random.Random(seed)
        results.extend((d, store.store(d)) for d in rng.sample(pool, len(pool)))

    threads = [threading.Thread(target=worker, args=(s,)) for s in range(8)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert sum(1 for _, already in results if not already) == len(pool)
    assert sorted(b for _, b in store.items()) == list(range(FIRST_BLOCK, FIRST_BLOCK + 50))


def test_restored_store_validates_blocks():
    d1, d2 = digests(2)
    store = AnchorStore(current_block=3, digests={d1: 1, d2: 2})
    assert store.get_stored(d2) == 2
    with pytest.raises(ValueError):
        AnchorStore(current_block=2, digests={d1: 1, d2: 2})
    with pytest.raises(ValueError):
        AnchorStore(current_block=0)


def test_fault_policy():
    store = AnchorStore(faults=FaultPolicy(fail_next=2))
    d = digests(1)[0]
    for _ in range(2):
        with pytest.raises(AnchorSubmissionError):
            store.store(d)
    assert not store.is_stored(d)
    assert store.store(d) is False
    always = AnchorStore(faults=FaultPolicy.from_config(AnchorConfig(fail_probability=1.0)))
    with pytest.raises(AnchorSubmissionError):
        always.store(d)
    with pytest.raises(ValueError):
        FaultPolicy(fail_probability=1.5)


def test_seeded_faults_are_reproducible():
    def outcomes(seed):
        store = AnchorStore(faults=FaultPolicy(fail_probability=0.3, seed=seed))
        out = []
        for d in digests(100):
            try:
                store.store(d)
                out.append(True)
            except AnchorSubmissionError:
                out.append(False)
        return out

    assert outcomes(4) == outcomes(4)
    assert 10 < outcomes(4).count(False) < 60


def test_batch_size_one_receipt_has_empty_path():
    store = AnchorStore()
    batch = EvidenceBatch(1)
    d = digests(1)[0]
    receipt = submit_evidence(batch, store, d)
    assert isinstance(receipt, AnchorReceipt)
    assert receipt.proof.path == ()
    assert receipt.digest == d
    assert check_receipt(receipt, store, leaf=d)


def test_batch_of_four_shares_one_root():
    store = AnchorStore()
    batch = EvidenceBatch(4)
    ds = digests(4)
    results = [batch.submit(store, d) for d in ds]
    assert results[:3] == [PENDING] * 3
    assert not PENDING
    assert len(store) == 1
    receipts = [batch.receipt_for(d) for d in ds]
    assert len({r.digest for r in receipts}) == 1
    for d, r in zip(ds, receipts):
        assert verify_proof(r.proof)
        assert store.is_stored(r.digest)
        assert check_receipt(r, store, leaf=d)
    # resubmission returns the existing receipt without a new root
    assert batch.submit(store, ds[0]) == receipts[0]
    assert len(store) == 1


def test_failed_flush_keeps_everything_pending():
    store = AnchorStore()
    batch = EvidenceBatch(4)
    ds = digests(4)
    for d in ds[:3]:
        batch.submit(store, d)
    store.faults.fail_next = 1
    with pytest.raises(AnchorSubmissionError):
        batch.submit(store, ds[3])
    assert len(store) == 0
    assert batch.pending == tuple(ds)
    assert batch.receipts == {}
    receipts = batch.flush(store)
    assert len(receipts) == 4 and len(store) == 1


def test_partial_flush_and_withdraw():
    store = AnchorStore()
    batch = EvidenceBatch(8)
    ds = digests(3)
    for d in ds:
        batch.submit(store, d)
    assert batch.withdraw(ds[1])
    assert not batch.withdraw(ds[1])
    receipts = batch.flush(store)
    assert [r.leaf for r in receipts] == [ds[0], ds[2]]
    assert batch.flush(store) == []


def test_check_receipt_rejections():
    store = AnchorStore()
    batch = EvidenceBatch(2)
    d1, d2, other = digests(3)
    batch.submit(store, d1)
    receipt = batch.submit(store, d2)
    assert check_receipt(receipt, store)
    assert not check_receipt(receipt, store, leaf=other)
    wrong_block = AnchorReceipt(receipt.digest, receipt.block_number + 1, receipt.proof)
    assert not check_receipt(wrong_block, store)
    assert not check_receipt(receipt, AnchorStore())
    wrong_root = AnchorReceipt(other, receipt.block_number, receipt.proof)
    assert not check_receipt(wrong_root, store)


def test_receipt_json():
    store = AnchorStore()
    receipt = EvidenceBatch(1).submit(store, digests(1)[0])
    assert AnchorReceipt.from_json(receipt.to_json()) == receipt


if __name__ == "__main__":
    test_store_semantics()
    test_random_operations_match_reference_mapping()
    test_batch_of_four_shares_one_root()
    test_failed_flush_keeps_everything_pending()
    print("ok  anchor store and evidence batches")
