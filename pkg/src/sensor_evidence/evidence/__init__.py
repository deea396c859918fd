"""Merkle aggregation, the emulated anchor contract and the evidence batch."""

from .anchor import FIRST_BLOCK, AnchorStore, FaultPolicy
from .batch import PENDING, AnchorReceipt, EvidenceBatch, check_receipt, submit_evidence
from .merkle import MerkleProof, MerkleTree, ProofStep, Side, build_tree, prove, verify_proof

__all__ = [
    "FIRST_BLOCK",
    "AnchorStore",
    "FaultPolicy",
    "PENDING",
    "AnchorReceipt",
    "EvidenceBatch",
    "check_receipt",
    "submit_evidence",
    "MerkleProof",
    "MerkleTree",
    "ProofStep",
    "Side",
    "build_tree",
    "prove",
    "verify_proof",
]
