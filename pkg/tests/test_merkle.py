"""Merkle tree construction, inclusion proofs and proof tampering."""

import itertools
import random
from dataclasses import replace

import pytest

from sensor_evidence.common.errors import MerkleError
from sensor_evidence.crypto.canonical import canonical_bytes, parse_canonical
from sensor_evidence.crypto.primitives import Digest, hash_bytes
from sensor_evidence.evidence.merkle import (
    MerkleProof,
    ProofStep,
    Side,
    build_tree,
    combine,
    prove,
    verify_proof,
)


def leaves(n, tag="leaf"):
    return [hash_bytes(f"{tag}-{i}".encode()) for i in range(n)]


def fold_root(level):
    """Independent scalar fold: pair up, duplicate an odd tail, repeat."""
    level = list(level)
    while len(level) > 1:
        if len(level) % 2:
            level.append(level[-1])
        level = [hash_bytes(b"\x01" + level[i].value + level[i + 1].value)
                 for i in range(0, len(level), 2)]
    return level[0]


def flip(d: Digest, rng) -> Digest:
    data = bytearray(d.value)
    data[rng.randrange(len(data))] ^= 1 << rng.randrange(8)
    return Digest(bytes(data))


def test_single_leaf_is_root():
    (leaf,) = leaves(1)
    tree = build_tree([leaf])
    assert tree.root == leaf
    proof = prove(tree, 0)
    assert proof.path == ()
    assert verify_proof(proof)


def test_two_leaves_combine_with_node_prefix():
    left, right = leaves(2)
    assert build_tree([left, right]).root == hash_bytes(b"\x01" + left.value + right.value)
    assert combine(left, right) != combine(right, left)


def test_odd_level_duplicates_last():
    ls = leaves(3)
    tree = build_tree(ls)
    assert tree.root == fold_root(ls)
    assert tree.levels[1][1] == combine(ls[2], ls[2])


def test_path_lengths():
    assert len(prove(build_tree(leaves(4)), 2).path) == 2
    assert len(prove(build_tree(leaves(5)), 4).path) == 3


def test_proofs_complete_up_to_64_leaves():
    for n in range(1, 65):
        ls = leaves(n)
        tree = build_tree(ls)
        assert tree.root == fold_root(ls)
        for i in range(n):
            proof = prove(tree, i)
            assert proof.leaf == ls[i]
            assert verify_proof(proof), (n, i)


def test_random_large_trees():
    rng = random.Random(5)
    for n in (100, 257, 1000):
        tree = build_tree(leaves(n, tag=str(n)))
        for i in rng.sample(range(n), 25):
            assert verify_proof(prove(tree, i))


def test_preconditions():
    with pytest.raises(MerkleError):
        build_tree([])
    tree = build_tree(leaves(3))
    with pytest.raises(MerkleError):
        prove(tree, 3)
    with pytest.raises(MerkleError):
        prove(tree, -1)


def test_repeated_leaves_rejected():
    a, b = leaves(2)
    for ls in ([a, a], [a, b, a, b], [a, b, b]):
        with pytest.raises(MerkleError):
            build_tree(ls)


def test_every_buildable_tree_proves_every_leaf():
    # small trees over a pool of 3 digests, every sequence the builder accepts
    pool = leaves(3, tag="pool")
    for n in range(1, 5):
        for idx in itertools.product(range(3), repeat=n):
            ls = [pool[k] for k in idx]
            try:
                tree = build_tree(ls)
            except MerkleError:
                assert len(set(idx)) < n
                continue
            assert all(verify_proof(prove(tree, i)) for i in range(n)), idx


def test_duplicated_node_cannot_pose_as_left_sibling():
    ls = leaves(3)
    proof = prove(build_tree(ls), 2)
    assert proof.path[0] == ProofStep(sibling=ls[2], side=Side.RIGHT)
    swapped = replace(proof, path=(ProofStep(ls[2], Side.LEFT),) + proof.path[1:])
    assert not verify_proof(swapped)


def test_mutated_proofs_fail():
    rng = random.Random(2024)
    trees = {n: build_tree(leaves(n, tag=f"m{n}")) for n in range(2, 40)}
    for _ in range(10_000):
        n = rng.randrange(2, 40)
        proof = prove(trees[n], rng.randrange(n))
        target = rng.choice(["leaf", "root", "sibling", "side", "drop", "extra"])
        if target == "leaf":
            bad = replace(proof, leaf=flip(proof.leaf, rng))
        elif target == "root":
            bad = replace(proof, root=flip(proof.root, rng))
        elif target in ("sibling", "side"):
            k = rng.randrange(len(proof.path))
            step = proof.path[k]
            if target == "sibling":
                step = ProofStep(flip(step.sibling, rng), step.side)
            else:
                step = ProofStep(step.sibling, Side.LEFT if step.side is Side.RIGHT else Side.RIGHT)
            bad = replace(proof, path=proof.path[:k] + (step,) + proof.path[k + 1:])
        elif target == "drop":
            bad = replace(proof, path=proof.path[:-1])
        else:
            bad = replace(proof, path=proof.path + (ProofStep(proof.root, Side.RIGHT),))
        assert not verify_proof(bad), target


def test_root_sensitive_to_order():
    rng = random.Random(9)
    for n in range(2, 20):
        ls = leaves(n)
        shuffled = ls[:]
        while shuffled == ls:
            rng.shuffle(shuffled)
        assert build_tree(shuffled).root != build_tree(ls).root


def test_proof_binary_and_json_forms():
    proof = prove(build_tree(leaves(7)), 5)
    assert parse_canonical(MerkleProof, canonical_bytes(proof)) == proof
    assert MerkleProof.from_json(proof.to_json()) == proof
    with pytest.raises(MerkleError):
        MerkleProof.from_json({"leaf": "zz", "path": [], "root": proof.root.hex()})
    with pytest.raises(MerkleError):
        MerkleProof.from_json({"leaf": proof.leaf.hex(), "path": [{"sibling": proof.root.hex(),
                                                                   "side": "up"}],
                               "root": proof.root.hex()})


if __name__ == "__main__":
    test_single_leaf_is_root()
    test_proofs_complete_up_to_64_leaves()
    test_mutated_proofs_fail()
    print("ok  merkle proofs")
