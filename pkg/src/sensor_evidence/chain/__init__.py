"""Readout stream construction."""

from .builder import (
    AtomicActionResult,
    ChainRecorder,
    ChainState,
    anchor_readout,
    check_anchored_readout,
    emit,
    is_checkpoint_index,
    new_chain,
)

__all__ = [
    "AtomicActionResult",
    "ChainRecorder",
    "ChainState",
    "anchor_readout",
    "check_anchored_readout",
    "emit",
    "is_checkpoint_index",
    "new_chain",
]
