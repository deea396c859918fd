"""Stream construction: prev and a-past links, checkpoints, atomic anchoring.

Checkpoints sit at indices where (index + 1) % s == 0, so the s-th, 2s-th ...
readouts are checkpoints and s == 1 makes every readout one. For
0 < index < a the a-past digest is absent (never clamped to index 0), and
a == 1 omits it entirely.
"""

from collections import deque
from dataclasses import dataclass, field
from typing import Deque, Dict, List, Optional, Sequence, Union

from ..common.config import ChainConfig
from ..common.errors import AnchorSubmissionError, ChainError
from ..common.log import LogCallback, null_log
from ..crypto.primitives import Digest, KeyPair
from ..evidence.anchor import AnchorStore
from ..evidence.batch import AnchorReceipt, EvidenceBatch, check_receipt
from ..model.readout import (
    BlindingPair,
    ChainLink,
    Location,
    Readout,
    Segment,
    build_readout,
    final_digest,
    signature_valid,
)


def is_checkpoint_index(index: int, s: int) -> bool:
    """True iff `index` is a checkpoint in a chain with interval `s`."""
    if index < 0 or s < 1:
        raise ChainError(f"is_checkpoint_index needs index >= 0 and s >= 1, got {index}, {s}")
    return index % s == s - 1


@dataclass
class ChainState:
    """Single-owner emission state for one sensor stream."""

    config: ChainConfig
    key: KeyPair
    next_index: int = 0
    recent_digests: Deque[Digest] = field(default_factory=deque)

    def __post_init__(self):
        if self.recent_digests.maxlen != self.config.a:
            self.recent_digests = deque(self.recent_digests, maxlen=self.config.a)

    def next_link(self) -> Optional[ChainLink]:
        if self.next_index == 0:
            return None
        a = self.config.a
        apast = self.recent_digests[0] if a > 1 and self.next_index >= a else None
        return ChainLink(prev_digest=self.recent_digests[-1], apast_digest=apast, apast_offset=a)


@dataclass(frozen=True)
class AtomicActionResult:
    """Outcome of one emission.

    `anchored` is True only once the readout's final digest sits under a
    stored Merkle root; `pending` marks a checkpoint waiting for its batch.
    """

    readout: Readout
    anchored: bool
    anchor_receipt: Optional[AnchorReceipt] = None
    pending: bool = False

    def __post_init__(self):
        if self.anchored and self.anchor_receipt is None:
            raise ChainError("An anchored result must carry its receipt")

    @property
    def block_number(self) -> Optional[int]:
        return self.anchor_receipt.block_number if self.anchor_receipt else None


def new_chain(config: ChainConfig, key: KeyPair) -> ChainState:
    """Empty chain at index 0.

    Raises:
        ChainError: If `config` is not a ChainConfig (its own constructor
            rejects a < 1 or s < 1).
    """
    if not isinstance(config, ChainConfig):
        raise ChainError(f"Expected ChainConfig, got {type(config).__name__}")
    return ChainState(config=config, key=key)


def emit(
    state: ChainState,
    timestamp: int,
    location: Optional[Location],
    segments: Sequence[Segment],
    blinding_pairs: Sequence[BlindingPair] = (),
    anchor: Optional[Union[AnchorStore, EvidenceBatch]] = None,
    store: Optional[AnchorStore] = None,
) -> AtomicActionResult:
    """Emit the next readout and, on a checkpoint, submit its evidence.

    `anchor` is either the anchor store itself (each checkpoint is its own
    one-leaf batch) or an EvidenceBatch, in which case `store` must be given.
    A failed submission never raises: the readout is still emitted, the
    digest is withdrawn from the batch, and `anchored` is False.

    Raises:
        ReadoutError: The readout itself could not be built; state unchanged.
    """
    index = state.next_index
    checkpoint = is_checkpoint_index(index, state.config.s)
    readout = build_readout(
        state.key, index, timestamp, location, segments, blinding_pairs,
        state.next_link(), checkpoint,
    )
    digest = final_digest(readout)
    state.recent_digests.append(digest)
    state.next_index += 1

    if not checkpoint or anchor is None:
        return AtomicActionResult(readout=readout, anchored=False)

    if isinstance(anchor, EvidenceBatch):
        batch = anchor
        if store is None:
            raise ChainError("emit with an EvidenceBatch needs the anchor store")
    else:
        batch, store = EvidenceBatch(1), anchor
    try:
        receipt = batch.submit(store, digest)
    except AnchorSubmissionError:
        batch.withdraw(digest)
        return AtomicActionResult(readout=readout, anchored=False)
    if isinstance(receipt, AnchorReceipt):
        return AtomicActionResult(readout=readout, anchored=True, anchor_receipt=receipt)
    return AtomicActionResult(readout=readout, anchored=False, pending=True)


def anchor_readout(readout: Readout, store: AnchorStore,
                   batch: Optional[EvidenceBatch] = None) -> AnchorReceipt:
    """Anchor one witnessed readout outside the stream schedule.

    The readout's digest is flushed immediately with whatever else is
    pending in `batch`.

    Raises:
        ChainError: The readout has no witness section or a bad signature.
        AnchorSubmissionError: The store rejected the submission.
    """
    if readout.witness is None:
        raise ChainError(f"Readout {readout.index} has no witness section to anchor")
    if not signature_valid(readout):
        raise ChainError(f"Readout {readout.index} does not carry a valid signature")
    batch = batch or EvidenceBatch(1)
    digest = final_digest(readout)
    existing = batch.receipt_for(digest)
    if existing is not None:
        return existing
    batch.submit(store, digest)
    batch.flush(store)
    receipt = batch.receipt_for(digest)
    assert receipt is not None
    return receipt


def check_anchored_readout(readout: Readout, receipt: AnchorReceipt,
                           store: AnchorStore) -> bool:
    """Standalone check of a sporadically anchored readout."""
    try:
        return (readout.witness is not None and signature_valid(readout)
                and check_receipt(receipt, store, leaf=final_digest(readout)))
    except (ValueError, TypeError, AttributeError):
        return False


class ChainRecorder:
    """Drives one chain against an anchor store and keeps what a log needs.

    Args:
        config: Chain shape.
        key: Sensor key.
        store: Anchor store shared with other recorders, if any.
        batch_size: Final digests per Merkle root.
        log: Progress callback.
    """

    def __init__(self, config: ChainConfig, key: KeyPair, store: AnchorStore,
                 batch_size: int = 1, log: Optional[LogCallback] = None):
        self.state = new_chain(config, key)
        self.store = store
        self.batch = EvidenceBatch(batch_size)
        self.readouts: List[Readout] = []
        self.receipts: Dict[int, AnchorReceipt] = {}
        self.failed_checkpoints: List[int] = []
        self._pending: Dict[Digest, int] = {}
        self._log = log or null_log

    @property
    def config(self) -> ChainConfig:
        return self.state.config

    def record(self, timestamp: int, segments: Sequence[Segment],
               location: Optional[Location] = None,
               blinding_pairs: Sequence[BlindingPair] = ()) -> AtomicActionResult:
        result = emit(self.state, timestamp, location, segments, blinding_pairs,
                      anchor=self.batch, store=self.store)
        r = result.readout
        self.readouts.append(r)
        if not r.is_checkpoint:
            return result
        if result.anchored:
            self.receipts[r.index] = result.anchor_receipt
            self._collect()
            self._log(f"[chain] checkpoint {r.index} anchored at block {result.block_number}")
        elif result.pending:
            self._pending[final_digest(r)] = r.index
        else:
            self.failed_checkpoints.append(r.index)
            self._log(f"[chain] checkpoint {r.index}: evidence submission FAILED")
        return result

    def finish(self) -> Dict[int, AnchorReceipt]:
        """Flush any partial batch and return receipts by readout index.

        A failed final flush leaves those checkpoints unanchored (logged).
        """
        if self.batch.pending:
            try:
                self.batch.flush(self.store)
            except AnchorSubmissionError as e:
                self._log(f"[chain] final flush FAILED: {e.message}")
                self.failed_checkpoints.extend(self._pending.values())
                self._pending.clear()
        self._collect()
        return dict(self.receipts)

    def _collect(self) -> None:
        for digest, index in list(self._pending.items()):
            receipt = self.batch.receipt_for(digest)
            if receipt is not None:
                self.receipts[index] = receipt
                del self._pending[digest]

    def summary(self) -> dict:
        roots = {r.digest for r in self.receipts.values()}
        return {
            "readouts": len(self.readouts),
            "checkpoints": sum(1 for r in self.readouts if r.is_checkpoint),
            "anchored_checkpoints": len(self.receipts),
            "failed_checkpoints": len(self.failed_checkpoints),
            "anchored_roots": len(roots),
        }
