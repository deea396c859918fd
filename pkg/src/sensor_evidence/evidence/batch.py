"""Evidence service: batches final digests into Merkle roots and anchors them.

Receipts carry the per-leaf proof, so a verifier never needs the evidence
service again, only the anchor store.
"""

import threading
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple, Union

from ..common.errors import MerkleError
from ..crypto.primitives import Digest
from .anchor import AnchorStore
from .merkle import MerkleProof, build_tree, prove, verify_proof


class _Pending:
    """Marker returned while a digest waits for its batch to fill."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "PENDING"

    def __bool__(self) -> bool:
        return False


PENDING = _Pending()


@dataclass(frozen=True)
class AnchorReceipt:
    """Proof that one final digest is covered by an anchored Merkle root."""

    digest: Digest
    block_number: int
    proof: MerkleProof

    @property
    def leaf(self) -> Digest:
        return self.proof.leaf

    def to_json(self) -> dict:
        return {
            "root": self.digest.hex(),
            "block_number": self.block_number,
            "proof": self.proof.to_json(),
        }

    @classmethod
    def from_json(cls, data: dict) -> "AnchorReceipt":
        try:
            return cls(
                digest=Digest.from_hex(data["root"]),
                block_number=int(data["block_number"]),
                proof=MerkleProof.from_json(data["proof"]),
            )
        except (KeyError, ValueError, TypeError) as e:
            raise MerkleError(f"Malformed receipt JSON: {e}")


def check_receipt(receipt: AnchorReceipt, store: AnchorStore,
                  leaf: Optional[Digest] = None) -> bool:
    """True iff the proof verifies, its root is the receipt digest, the root is
    stored at exactly the receipt's block, and (if given) the leaf matches."""
    try:
        if leaf is not None and receipt.proof.leaf != leaf:
            return False
        if receipt.proof.root != receipt.digest or not verify_proof(receipt.proof):
            return False
        block = store.get_stored(receipt.digest)
        return block > 0 and block == receipt.block_number
    except (ValueError, TypeError, AttributeError):
        return False


class EvidenceBatch:
    """Pending final digests awaiting aggregation.

    Submissions and flushes are mutually exclusive (one lock). A flush stores
    exactly one root; if that store fails, every flushed digest stays pending
    and nothing from the batch is anchored.

    Args:
        batch_size: Digests per Merkle root (>= 1).
    """

    def __init__(self, batch_size: int = 1):
        if batch_size < 1:
            raise ValueError(f"batch_size must be >= 1, got {batch_size}")
        self.batch_size = batch_size
        self._pending: List[Digest] = []
        self._issued: Dict[Digest, AnchorReceipt] = {}
        self._lock = threading.Lock()

    @property
    def pending(self) -> Tuple[Digest, ...]:
        with self._lock:
            return tuple(self._pending)

    @property
    def receipts(self) -> Dict[Digest, AnchorReceipt]:
        with self._lock:
            return dict(self._issued)

    def receipt_for(self, digest: Digest) -> Optional[AnchorReceipt]:
        with self._lock:
            return self._issued.get(digest)

    def submit(self, store: AnchorStore, digest: Digest) -> Union[AnchorReceipt, _Pending]:
        """Queue `digest`; flush when the batch is full.

        Returns:
            The digest's receipt if this submission completed a batch (or the
            digest was anchored before), otherwise PENDING.

        Raises:
            AnchorSubmissionError: The flush failed; all its digests remain pending.
        """
        with self._lock:
            issued = self._issued.get(digest)
            if issued is not None:
                return issued
            if digest not in self._pending:
                self._pending.append(digest)
            if len(self._pending) >= self.batch_size:
                self._flush_locked(store)
                return self._issued[digest]
            return PENDING

    def flush(self, store: AnchorStore) -> List[AnchorReceipt]:
        """Anchor everything pending now, whatever the batch size.

        Raises:
            AnchorSubmissionError: The store failed; all digests remain pending.
        """
        with self._lock:
            return self._flush_locked(store)

    def withdraw(self, digest: Digest) -> bool:
        """Drop a pending digest (its atomic action failed as a unit)."""
        with self._lock:
            if digest in self._pending:
                self._pending.remove(digest)
                return True
            return False

    def _flush_locked(self, store: AnchorStore) -> List[AnchorReceipt]:
        if not self._pending:
            return []
        leaves = list(self._pending)
        tree = build_tree(leaves)
        store.store(tree.root)  # AnchorSubmissionError leaves _pending untouched
        block = store.get_stored(tree.root)
        receipts = [
            AnchorReceipt(digest=tree.root, block_number=block, proof=prove(tree, i))
            for i in range(len(leaves))
        ]
        for leaf, receipt in zip(leaves, receipts):
            self._issued[leaf] = receipt
        self._pending.clear()
        return receipts


def submit_evidence(batch: EvidenceBatch, store: AnchorStore,
                    digest: Digest) -> Union[AnchorReceipt, _Pending]:
    """Queue one final digest with the evidence service (see EvidenceBatch.submit)."""
    return batch.submit(store, digest)
