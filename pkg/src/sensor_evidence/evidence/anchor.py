"""In-process emulation of the digest-anchoring smart contract.

Contract semantics, step by step:

    getStored(digest)  -> _digests[digest]            (0 when absent)
    isStored(digest)   -> _digests[digest] > 0
    store(digest)      -> isRes = _digests[digest] > 0
                          if not isRes: _digests[digest] = block.number
                          return isRes

Block numbers are a deterministic counter starting at 1; every store that
records a new digest is its own block. Block number 0 means "not stored".
Digests stay 32-byte values and are never converted to integers, so
endianness of a uint256 mapping is left to a future real-chain backend.
"""

import threading
from dataclasses import dataclass, field
from typing import Dict, Iterator, Optional, Tuple

import numpy as np

from ..common.config import AnchorConfig
from ..common.errors import AnchorSubmissionError
from ..crypto.primitives import Digest

FIRST_BLOCK = 1


@dataclass
class FaultPolicy:
    """Injected store failures.

    Args:
        fail_next: The next N store calls fail unconditionally.
        fail_probability: Each later store call fails with this probability.
        seed: Seed for the probabilistic failures (None = OS entropy).
    """

    fail_next: int = 0
    fail_probability: float = 0.0
    seed: Optional[int] = None
    _rng: np.random.Generator = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.fail_next < 0:
            raise ValueError(f"fail_next must be >= 0, got {self.fail_next}")
        if not 0.0 <= self.fail_probability <= 1.0:
            raise ValueError(f"fail_probability must be in [0, 1], got {self.fail_probability}")
        self._rng = np.random.default_rng(self.seed)

    @classmethod
    def from_config(cls, config: AnchorConfig) -> "FaultPolicy":
        return cls(fail_next=config.fail_next, fail_probability=config.fail_probability,
                   seed=config.fault_seed)

    @property
    def active(self) -> bool:
        return self.fail_next > 0 or self.fail_probability > 0.0

    def should_fail(self) -> bool:
        if self.fail_next > 0:
            self.fail_next -= 1
            return True
        if self.fail_probability > 0.0:
            return bool(self._rng.random() < self.fail_probability)
        return False


class AnchorStore:
    """Emulated contract state: digest -> block number, plus a block counter.

    Store/get calls are linearizable: one lock serializes them, so concurrent
    submissions from several chains behave as if applied in some total order.
    """

    def __init__(self, current_block: int = FIRST_BLOCK,
                 digests: Optional[Dict[Digest, int]] = None,
                 faults: Optional[FaultPolicy] = None):
        if current_block < FIRST_BLOCK:
            raise ValueError(f"current_block must be >= {FIRST_BLOCK}, got {current_block}")
        self._digests: Dict[Digest, int] = dict(digests or {})
        bad = [d for d, block in self._digests.items() if not 0 < block < current_block]
        if bad:
            raise ValueError(
                f"{len(bad)} stored block number(s) outside [1, {current_block - 1}]")
        self._current_block = current_block
        self.faults = faults or FaultPolicy()
        self._lock = threading.RLock()

    @property
    def current_block(self) -> int:
        return self._current_block

    def __len__(self) -> int:
        return len(self._digests)

    def items(self) -> Iterator[Tuple[Digest, int]]:
        """(digest, block) pairs in block order."""
        with self._lock:
            snapshot = sorted(self._digests.items(), key=lambda kv: (kv[1], kv[0].value))
        return iter(snapshot)

    def store(self, digest: Digest) -> bool:
        """Record `digest` at the current block unless already present.

        Returns:
            True iff the digest was already stored (isAlreadyStored).

        Raises:
            AnchorSubmissionError: If the fault policy rejects this submission.
        """
        with self._lock:
            if self.faults.should_fail():
                raise AnchorSubmissionError(
                    "Anchor submission failed (injected fault)", self._current_block)
            already = self._digests.get(digest, 0) > 0
            if not already:
                self._digests[digest] = self._current_block
                self._current_block += 1
            return already

    def get_stored(self, digest: Digest) -> int:
        """Block number the digest was stored at, or 0."""
        with self._lock:
            return self._digests.get(digest, 0)

    def is_stored(self, digest: Digest) -> bool:
        return self.get_stored(digest) > 0

