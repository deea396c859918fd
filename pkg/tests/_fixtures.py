"""Shared builders for chain, log and reachability tests."""

from collections import deque

from sensor_evidence.chain.builder import ChainRecorder
from sensor_evidence.common.config import ChainConfig
from sensor_evidence.crypto.primitives import KeyPair
from sensor_evidence.evidence.anchor import AnchorStore
from sensor_evidence.model.readout import Segment
from sensor_evidence.verification.verifier import AvailableLog

KEY = KeyPair.from_seed(bytes(range(32)))
OTHER_KEY = KeyPair.from_seed(bytes(range(32, 64)))


def record_chain(n, a, s, batch_size=1, store=None, key=KEY, fail_at=()):
    """Record n readouts; checkpoints listed in fail_at have their submission fail."""
    store = store if store is not None else AnchorStore()
    rec = ChainRecorder(ChainConfig(a=a, s=s), key, store, batch_size=batch_size)
    for i in range(n):
        if i in fail_at:
            store.faults.fail_next = 1
        rec.record(timestamp=1_000 * i, segments=[Segment("value", f"reading-{i}".encode())])
    rec.finish()
    return rec, store


def available_log(rec, lost=(), key=KEY):
    lost = set(lost)
    return AvailableLog(
        readouts={r.index: r for r in rec.readouts if r.index not in lost},
        receipts={j: rc for j, rc in rec.receipts.items() if j not in lost},
        length=len(rec.readouts),
        public_key=key.public_key,
    )


def brute_force_reachable(available, checkpoints, a):
    """Breadth-first search over explicit edges i -> i-1, i -> i-a."""
    def children(i):
        out = []
        if i >= 1:
            out.append(i - 1)
        if a > 1 and i >= a:
            out.append(i - a)
        return out

    seen = set()
    queue = deque(c for c in checkpoints if c in available)
    seen.update(queue)
    while queue:
        node = queue.popleft()
        for child in children(node):
            if child in available and child not in seen:
                seen.add(child)
                queue.append(child)
    return seen


def checkpoints_of(n, s):
    return set(range(s - 1, n, s))
