"""Merkle aggregation of final digests and inclusion proofs.

Node rule: combine(L, R) = SHA-256(0x01 || L || R). Leaves enter as-is, a
single-leaf tree's root is the leaf, and an odd level duplicates its last
node. A duplicated node is always its own right sibling; verify_proof
enforces that, so a proof step can never be satisfied with either side flag.
Equal digests side by side would break that, so build_tree refuses
repeated leaves; the evidence batch deduplicates its pending leaves.
"""

from dataclasses import dataclass
from enum import Enum
from typing import List, Sequence, Tuple

from ..common.errors import EvidenceError, MerkleError
from ..crypto.canonical import Decoder, Encoder
from ..crypto.primitives import Digest, hash_bytes

NODE_PREFIX = b"\x01"
PROOF_TAG = b"SEVP"


class Side(str, Enum):
    """Which side of the running node the sibling sits on."""
    LEFT = "left"
    RIGHT = "right"


def combine(left: Digest, right: Digest) -> Digest:
    return hash_bytes(NODE_PREFIX + left.value + right.value)


@dataclass(frozen=True)
class MerkleTree:
    """Immutable tree; levels[0] are the leaves, levels[-1] == [root]."""

    levels: Tuple[Tuple[Digest, ...], ...]

    @property
    def leaves(self) -> Tuple[Digest, ...]:
        return self.levels[0]

    @property
    def root(self) -> Digest:
        return self.levels[-1][0]

    @property
    def height(self) -> int:
        """Number of combining levels."""
        return len(self.levels) - 1


@dataclass(frozen=True)
class ProofStep:
    sibling: Digest
    side: Side


@dataclass(frozen=True)
class MerkleProof:
    """Self-contained inclusion proof: explicit side flags, no indices needed."""

    leaf: Digest
    path: Tuple[ProofStep, ...]
    root: Digest

    def encode_into(self, enc: Encoder) -> None:
        enc.raw(PROOF_TAG).digest(self.leaf).u32(len(self.path))
        for step in self.path:
            enc.u8(0 if step.side is Side.LEFT else 1).digest(step.sibling)
        enc.digest(self.root)

    @classmethod
    def decode_from(cls, dec: Decoder) -> "MerkleProof":
        dec.expect(PROOF_TAG)
        leaf = dec.digest()
        steps = []
        for _ in range(dec.u32()):
            at = dec.pos
            flag = dec.u8()
            if flag not in (0, 1):
                raise MerkleError(f"Invalid side flag {flag} at offset {at}")
            steps.append(ProofStep(sibling=dec.digest(), side=Side.LEFT if flag == 0 else Side.RIGHT))
        return cls(leaf=leaf, path=tuple(steps), root=dec.digest())

    def to_json(self) -> dict:
        return {
            "leaf": self.leaf.hex(),
            "path": [{"sibling": s.sibling.hex(), "side": s.side.value} for s in self.path],
            "root": self.root.hex(),
        }

    @classmethod
    def from_json(cls, data: dict) -> "MerkleProof":
        try:
            return cls(
                leaf=Digest.from_hex(data["leaf"]),
                path=tuple(
                    ProofStep(sibling=Digest.from_hex(s["sibling"]), side=Side(s["side"]))
                    for s in data["path"]
                ),
                root=Digest.from_hex(data["root"]),
            )
        except (KeyError, ValueError, TypeError) as e:
            raise MerkleError(f"Malformed proof JSON: {e}")


def build_tree(leaves: Sequence[Digest]) -> MerkleTree:
    """Build the tree over `leaves` in order.

    Leaves must be distinct: verify_proof refuses a left sibling equal to
    the running node, so a repeated leaf could never be proven.

    Raises:
        MerkleError: If `leaves` is empty or contains a repeated digest.
    """
    if not leaves:
        raise MerkleError("Cannot build a Merkle tree over zero leaves")
    seen = set()
    for leaf in leaves:
        if leaf in seen:
            raise MerkleError("Merkle leaves must be distinct", f"Repeated leaf: {leaf.hex()}")
        seen.add(leaf)
    levels: List[Tuple[Digest, ...]] = [tuple(leaves)]
    while len(levels[-1]) > 1:
        level = levels[-1]
        nxt = []
        for i in range(0, len(level), 2):
            left = level[i]
            right = level[i + 1] if i + 1 < len(level) else level[i]
            nxt.append(combine(left, right))
        levels.append(tuple(nxt))
    return MerkleTree(levels=tuple(levels))


def prove(tree: MerkleTree, leaf_index: int) -> MerkleProof:
    """Inclusion proof for the leaf at `leaf_index`.

    Raises:
        MerkleError: If the index is out of range.
    """
    if not 0 <= leaf_index < len(tree.leaves):
        raise MerkleError(
            f"Leaf index {leaf_index} out of range for {len(tree.leaves)} leaves")
    path = []
    i = leaf_index
    for level in tree.levels[:-1]:
        if i % 2 == 0:
            sibling = level[i + 1] if i + 1 < len(level) else level[i]
            path.append(ProofStep(sibling=sibling, side=Side.RIGHT))
        else:
            path.append(ProofStep(sibling=level[i - 1], side=Side.LEFT))
        i //= 2
    return MerkleProof(leaf=tree.leaves[leaf_index], path=tuple(path), root=tree.root)


def verify_proof(proof: MerkleProof) -> bool:
    """True iff folding the leaf through the path reproduces the root."""
    try:
        node = proof.leaf
        for step in proof.path:
            if step.side is Side.RIGHT:
                node = combine(node, step.sibling)
            elif step.side is Side.LEFT:
                # duplicated nodes only ever appear as right siblings
                if step.sibling == node:
                    return False
                node = combine(step.sibling, node)
            else:
                return False
        return node == proof.root
    except (EvidenceError, ValueError, TypeError, AttributeError):
        return False
