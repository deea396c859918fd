"""Checkpoint reachability and log verification."""

from .reachability import (
    ALL_STATUSES,
    Status,
    assign_statuses,
    classify_mask,
    reachable_mask,
    reachable_set,
)
from .verifier import (
    AvailableLog,
    SingleVerification,
    Trail,
    VerificationReport,
    check_trail,
    verify_log,
    verify_single,
)

__all__ = [
    "ALL_STATUSES",
    "Status",
    "assign_statuses",
    "classify_mask",
    "reachable_mask",
    "reachable_set",
    "AvailableLog",
    "SingleVerification",
    "Trail",
    "VerificationReport",
    "check_trail",
    "verify_log",
    "verify_single",
]
